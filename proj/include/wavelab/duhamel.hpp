#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "wavelab/propagator.hpp"
#include "wavelab/trajectory.hpp"

namespace wavelab {

// Weights for integrating over `intervals` uniform steps of size h:
// composite Simpson, Simpson 3/8 on the last three steps when the count is
// odd, trapezoid for a single step.
std::vector<double> composite_weights(std::size_t intervals, double h);

// Time integrals of a source trajectory against the wave group, done mode by
// mode: the source is transformed once and every integral is a weighted sum
// of multiplier(t - s, rho) * f_hat(s).
class DuhamelIntegrator {
 public:
  DuhamelIntegrator(const SpectralPlan& plan, const Trajectory& source);

  const SpectralPlan& plan() const noexcept { return plan_; }
  const std::vector<double>& times() const noexcept { return times_; }

  // zeta(f)(t_j) = int_0^{t_j} W(t_j - s) f(s) ds (signed for t_j < 0).
  Eigen::VectorXd forward_spectrum(std::size_t j) const;
  RadialField forward(std::size_t j) const;
  std::vector<RadialField> forward_all() const;

  // gamma(f)(t_j) = int_{t_j}^{T} W(s - t_j) f(s) ds for the future horizon
  // (past = true: int_{-T}^{t_j} W(t_j - s) f(s) ds).
  RadialField tail(std::size_t j, bool past = false) const;

  // sum_k w_k m(s_k, rho) f_hat(s_k) over the nodes between indices lo and hi
  // (lo <= hi), weights from composite_weights, or the three-point rule when
  // the range is a single step and a neighbouring node exists. The rule is
  // laid out from the starting node (hi when from_high), so an integral and
  // its time mirror use mirrored weights.
  Eigen::VectorXd integrate(std::size_t lo, std::size_t hi,
                            const std::function<double(double s, double rho)>& multiplier,
                            bool from_high = false) const;

 private:
  const SpectralPlan& plan_;
  std::vector<double> times_;
  Eigen::MatrixXd spectra_;  // modes x nodes
};

}  // namespace wavelab
