#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavelab/duhamel.hpp"
#include "wavelab/exponents.hpp"
#include "wavelab/propagator.hpp"
#include "wavelab/trajectory.hpp"

namespace wavelab {

// F with F(0) = 0 and |F(u) - F(v)| <= C (|u|^{q-1} + |v|^{q-1}) |u - v|.
struct Nonlinearity {
  double q = 2.0;
  std::function<double(double)> evaluate;
  std::string name;

  // u -> |u|^{q-1} u
  static Nonlinearity power(double q);
  double operator()(double u) const { return evaluate(u); }
};

struct LipschitzSpotCheck {
  double constant = 0.0;  // largest observed |F(u)-F(v)| / ((|u|^{q-1}+|v|^{q-1})|u-v|)
  bool zero_fixed = false;
  std::size_t pairs = 0;
};

// Samples pairs uniformly in [-amplitude, amplitude]; cannot certify a plugin.
LipschitzSpotCheck spot_check(const Nonlinearity& f, std::uint64_t seed, std::size_t pairs = 1000,
                              double amplitude = 2.0);

struct InitialData {
  RadialField u0;
  RadialField u1;
};

struct PotentialFields {
  RadialField v1;
  RadialField v2;
  double v1_norm = 0.0;  // ||V1||_{(n/2, inf)}
  double v2_norm = 0.0;  // ||V2||_{(n/b, inf)}; sup norm when b = 0
  bool v2_constant = false;
};

// V1 = c1 / r^2, V2 = c2 / r^b. With b = 0 the potential V2 is the constant
// c2 and v2_norm is its sup norm (flagged by v2_constant).
PotentialFields potential_fields(const ModelParams& params, const GridPtr& grid);

// The semilinear problem on a fixed spectral plan.
struct Model {
  ModelParams params;
  Nonlinearity nonlinearity;
  PotentialFields potentials;
};

Model make_model(const ModelParams& params, const GridPtr& grid, std::optional<Nonlinearity> nonlinearity = {});

// Wdot(t_j) u0 + W(t_j) u1 at every node.
Trajectory linear_evolution(const SpectralPlan& plan, const InitialData& data, const std::vector<double>& times);

// Source -V1 v + V2 F(v) at every node. Throws overflow naming the first node
// where it is not finite.
Trajectory source_of(const Model& model, const Trajectory& v);

// int_0^t W(t - s) f(s) ds at a node of the source trajectory.
RadialField duhamel_forward(const SpectralPlan& plan, const Trajectory& source, double t);

// Phi(v) = linear evolution + zeta(-V1 v + V2 F(v)).
Trajectory phi_map(const SpectralPlan& plan, const Model& model, const InitialData& data, const Trajectory& v);

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 100;
  std::optional<double> ball_radius;          // default: 2 x linear sup weak norm
  std::optional<Trajectory> initial_iterate;  // default: the linear evolution
};

struct SolveDiagnostics {
  std::vector<double> sup_weak_norms;      // per iterate, v_0 first
  std::vector<double> increments;          // sup_t ||v_{k+1} - v_k||
  std::vector<double> contraction_ratios;  // increments[k] / increments[k-1]
  double linear_sup_norm = 0.0;
  double ball_radius = 0.0;
  bool ball_invariant = true;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct Solution {
  Trajectory u;
  SolveDiagnostics diagnostics;
};

// Picard iteration v_{k+1} = Phi(v_k) in sup_t ||.||_{(r0,inf)}. Throws
// precondition when the ball cannot contain the linear evolution,
// non_contraction after three consecutive ratios >= 1 and no_convergence when
// max_iter is exhausted.
Solution picard_solve(const SpectralPlan& plan, const Model& model, const InitialData& data,
                      const std::vector<double>& times, const SolveOptions& options = {});

// sup_t ||u(t) - Phi(u)(t)||_{(r0,inf)}, computed by applying Phi once.
double residual(const SpectralPlan& plan, const Model& model, const InitialData& data, const Trajectory& u);

}  // namespace wavelab
