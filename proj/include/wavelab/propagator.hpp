#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wavelab/lorentz.hpp"
#include "wavelab/radial_grid.hpp"
#include "wavelab/report.hpp"

namespace wavelab {

// Radial Fourier kernel of R^n normalised to 1 at the origin:
// Gamma(n/2) (2/s)^{n/2-1} J_{n/2-1}(s) = (2l+1)!! j_l(s) / s^l, l = (n-3)/2.
double radial_kernel(int n, double s);

// Dense discrete radial Fourier transform pair on a RadialGrid. Frequencies
// are midpoint-uniform on (0, rho_max]; both directions use midpoint weights,
// which are spectrally accurate because the radial integrands are even.
class SpectralPlan {
 public:
  SpectralPlan(GridPtr grid, std::size_t modes, double rho_max);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t modes() const noexcept { return rho_.size(); }
  double rho_max() const noexcept { return rho_max_; }
  std::span<const double> frequencies() const noexcept { return rho_; }
  // Relative max error of inverse(forward(probe)) on the built-in probe.
  double round_trip_error() const noexcept { return round_trip_error_; }

  Eigen::VectorXd forward(const RadialField& f) const;
  RadialField inverse(const Eigen::VectorXd& spectrum) const;
  // Column j of `spectra` is one spectrum; returns one field per column.
  std::vector<RadialField> inverse_columns(const Eigen::MatrixXd& spectra) const;

  // Inverse transform evaluated at an arbitrary radius r >= 0.
  double evaluate(const Eigen::VectorXd& spectrum, double r) const;

  // F^{-1}[m(rho) F f].
  RadialField apply(const RadialField& f, const std::function<double(double)>& multiplier) const;

  void require_grid(const RadialField& f) const;

 private:
  GridPtr grid_;
  double rho_max_;
  std::vector<double> rho_;
  Eigen::MatrixXd forward_;  // modes x cells
  Eigen::MatrixXd inverse_;  // cells x modes
  double round_trip_error_ = 0.0;
};

using PlanPtr = std::shared_ptr<const SpectralPlan>;

// Default frequency layout: modes = N, rho_max = pi N / (2 r_max).
std::size_t default_modes(const RadialGrid& grid);
double default_rho_max(const RadialGrid& grid);

// Builds the tables and verifies the round trip on the built-in Gaussian probe
// exp(-(r/w)^2), w = r_max/8. Throws plan_construction if the relative max
// error exceeds 1e-8.
PlanPtr build_plan(GridPtr grid, std::size_t modes, double rho_max);
PlanPtr build_plan(GridPtr grid);

// sin(t rho)/rho with the removable value t at rho = 0.
double sin_over(double t, double rho);

// W(t) h = sin(tD)/D h and Wdot(t) h = cos(tD) h.
RadialField propagate_W(const SpectralPlan& plan, double t, const RadialField& h);
RadialField propagate_Wdot(const SpectralPlan& plan, double t, const RadialField& h);

// Free evolution Wdot(t) u0 + W(t) u1 at each time, batched.
std::vector<RadialField> free_evolution(const SpectralPlan& plan, std::span<const double> times,
                                        const RadialField& u0, const RadialField& u1);

// Per-mode rho^2 |u_hat(t)|^2 + |d_t u_hat(t)|^2 of the free solution.
Eigen::VectorXd spectral_energy(const SpectralPlan& plan, double t, const RadialField& u0, const RadialField& u1);

// A radial profile for the three-dimensional closed form. When
// moment_antiderivative is set it must equal int_0^sigma tau u(tau) dtau.
struct OracleProfile {
  RadialFunction value;
  RadialFunction moment_antiderivative;

  static OracleProfile zero();
};

// d'Alembert reduction v = r u of the free radial wave in R^3.
double oracle_3d(double t, const OracleProfile& u0, const OracleProfile& u1, double r, int n = 3);
// Field variant: profiles are linear interpolants of the samples (zero beyond
// r_max) and the velocity integral uses the trapezoid rule.
double oracle_3d(double t, const RadialField& u0, const RadialField& u1, double r);

// Samples ||W(t)h||_{(l2,z)} against |t|^{-n(1/l1-1/l2)+1} ||h||_{(l1,z)}.
// The slope window defaults to the top decade of the sampled times.
EstimateReport audit_dispersive(const SpectralPlan& plan, double l1, double l2, double z, const RadialField& h,
                                std::span<const double> times, std::optional<std::pair<double, double>> window = {});

// L^p - L^{p'} mode: plain L^p norms with l1 = p', l2 = p.
EstimateReport audit_dispersive_lp(const SpectralPlan& plan, double p, const RadialField& h,
                                   std::span<const double> times,
                                   std::optional<std::pair<double, double>> window = {});

struct YamazakiOptions {
  bool allow_out_of_region = false;
  std::size_t steps_per_horizon = 256;  // uniform steps on [0, T]
};

// I(T) = int_{-T}^{T} |t|^{n(1/d1-1/d2)-2} ||W(t) f||_{(d2,1)} dt on a graded
// grid. values: I_T, I_2T, I_neg, I_pos, source_norm, normalized, tail_indicator,
// weight_exponent.
EstimateReport audit_yamazaki(const SpectralPlan& plan, double d1, double d2, const RadialField& f, double horizon,
                              const YamazakiOptions& options = {});

}  // namespace wavelab
