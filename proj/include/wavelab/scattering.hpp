#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wavelab/mild_solution.hpp"
#include "wavelab/report.hpp"

namespace wavelab {

enum class Direction { future, past };

// Free data (u0^+, u1^+) whose evolution matches the solution as t -> +-inf,
// with the improper time integrals truncated at the horizon T.
struct ScatteringState {
  RadialField u0_plus;
  RadialField u1_plus;
  Direction direction = Direction::future;
  double horizon = 0.0;
  // ||delta u0||_{(r0,inf)} + ||delta u1||_{(r0,inf)} between horizons T/4 -> T/2
  // and T/2 -> T. The second is tail_increment.
  double previous_increment = 0.0;
  double tail_increment = 0.0;
};

// gamma(f)(t) = int_t^T W(s - t) f(s) ds at a node t.
RadialField duhamel_tail(const SpectralPlan& plan, const Trajectory& source, double t);

// u0^+ = u0 + int_0^{+-T} W(-s) f ds, u1^+ = u1 + int_0^{+-T} Wdot(-s) f ds
// with f = -V1 u + V2 F(u). The past direction needs a symmetric trajectory.
// Throws precondition when the solution did not converge or its residual
// exceeds residual_tol.
ScatteringState scattering_state(const SpectralPlan& plan, const Model& model, const InitialData& data,
                                 const Solution& solution, Direction direction, double residual_tol = 1e-6);

struct ScatteringDefect {
  std::vector<double> times;
  std::vector<double> direct;  // ||u(t) - u^+(t)||_{(r0,inf)}
  std::vector<double> tail;    // ||gamma(f)(t)||_{(r0,inf)}
};

// Both defect formulas at every node on the side of the state's direction.
ScatteringDefect scattering_defect(const SpectralPlan& plan, const Model& model, const Trajectory& u,
                                   const ScatteringState& state);

// Single-node form; returns {direct, tail}.
std::pair<double, double> scattering_defect(const SpectralPlan& plan, const Model& model, const Trajectory& u,
                                            const ScatteringState& state, double t);

// Ratio of t^h ||zeta(f)(t)||_{(r0,inf)} to sup_tau tau^h ||f(tau)||_{(s,inf)}
// over positive nodes. measured_constant is the sup (the empirical L~);
// values I1_max and I2_max hold the [0,t/2] and [t/2,t] parts.
EstimateReport audit_weighted_duhamel(const SpectralPlan& plan, const Trajectory& source, double h, double r0,
                                      double s);

// Decay verdict on a positive sampled quantity: "zero" when identically 0,
// "decaying" when the slope over the last decade is <= -0.2 and the final
// value is <= 0.1 x the value at the first sample t >= 1, else "not_decaying".
struct DecayVerdict {
  std::string verdict;
  std::optional<double> slope;
  double initial = 0.0;
  double final_value = 0.0;
  bool tends_to_zero() const { return verdict != "not_decaying"; }
};

DecayVerdict decay_verdict(const std::vector<double>& t, const std::vector<double>& y);

struct StabilityReport {
  double h = 0.0;
  std::vector<double> times;
  std::vector<double> weighted_linear;      // t^h ||Wdot(t) du0 + W(t) du1||_{(r0,inf)}
  std::vector<double> weighted_difference;  // t^h ||u(t) - u~(t)||_{(r0,inf)}
  DecayVerdict linear;
  DecayVerdict difference;
  bool iff_holds = false;
};

// Theorem-style equivalence between decay of the weighted linear data
// difference and of the weighted solution difference, at positive nodes.
StabilityReport stability_check(const SpectralPlan& plan, const Model& model, const Solution& u,
                                const InitialData& data, const Solution& u_tilde, const InitialData& data_tilde,
                                double h, double residual_tol = 1e-6);

// Fits the exponent of ||u(t) - u^+(t)||_{(r0,inf)} over the window (default
// [1, T/2]) and passes when it is <= -h + 0.1. Flags "precondition_failed"
// when t^h ||linear(t)||_{(r0,inf)} does not decay and "trivial_pass" when
// the defect vanishes.
EstimateReport improved_decay(const SpectralPlan& plan, const Model& model, const InitialData& data,
                              const Solution& solution, const ScatteringState& state, double h,
                              std::optional<std::pair<double, double>> window = {});

nlohmann::json to_json(const StabilityReport& report);

}  // namespace wavelab
