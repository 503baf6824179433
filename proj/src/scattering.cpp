#include "wavelab/scattering.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/duhamel.hpp"
#include "wavelab/error.hpp"
#include "wavelab/lorentz.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "scattering_stability";

void require_solved(const Solution& s, double residual_tol) {
  if (!s.diagnostics.converged) throw Error(ErrorKind::precondition, kModule, "trajectory is not a converged solution");
  if (!(s.diagnostics.residual <= residual_tol)) {
    throw Error(ErrorKind::precondition, kModule,
                "solution residual " + std::to_string(s.diagnostics.residual) + " exceeds " +
                    std::to_string(residual_tol));
  }
}

void require_h(double h) {
  if (!(h > 0.0 && h < 1.0)) throw Error(ErrorKind::invalid_argument, kModule, "h must lie in (0, 1)");
}

bool vanishes(const Trajectory& t) {
  return std::all_of(t.fields.begin(), t.fields.end(), [](const RadialField& f) { return f.is_zero(); });
}

// Node indices on one side of t = 0, in increasing time order.
std::vector<std::size_t> side_indices(const Trajectory& u, Direction d) {
  const std::size_t o = u.origin();
  std::vector<std::size_t> idx;
  if (d == Direction::future) {
    for (std::size_t j = o; j < u.size(); ++j) idx.push_back(j);
  } else {
    for (std::size_t j = 0; j <= o; ++j) idx.push_back(j);
  }
  return idx;
}

std::vector<double> positive_times(const Trajectory& u) {
  std::vector<double> t;
  for (std::size_t j = u.origin() + 1; j < u.size(); ++j) t.push_back(u.times[j]);
  return t;
}
}  // namespace

RadialField duhamel_tail(const SpectralPlan& plan, const Trajectory& source, double t) {
  if (t > source.horizon() + 1e-9 * source.step()) {
    throw Error(ErrorKind::invalid_argument, kModule, "tail time lies beyond the trajectory horizon");
  }
  const std::size_t j = source.index_of(t);
  if (vanishes(source)) return RadialField(source.grid());
  return DuhamelIntegrator(plan, source).tail(j);
}

ScatteringState scattering_state(const SpectralPlan& plan, const Model& model, const InitialData& data,
                                 const Solution& solution, Direction direction, double residual_tol) {
  require_solved(solution, residual_tol);
  const Trajectory& u = solution.u;
  const std::size_t o = u.origin();
  if (direction == Direction::future && o + 1 >= u.size()) {
    throw Error(ErrorKind::precondition, kModule, "trajectory has no positive times");
  }
  if (direction == Direction::past && o == 0) {
    throw Error(ErrorKind::precondition, kModule, "past scattering needs a symmetric trajectory");
  }

  ScatteringState state{data.u0, data.u1, direction,
                        direction == Direction::future ? u.times.back() : u.times.front()};
  const Trajectory source = source_of(model, u);
  if (vanishes(source)) return state;

  const DuhamelIntegrator integ(plan, source);
  const auto w_minus = [](double s, double rho) { return sin_over(-s, rho); };
  const auto wdot = [](double s, double rho) { return std::cos(s * rho); };
  // Spectra of int_0^{t_e} W(-s) f ds and int_0^{t_e} Wdot(-s) f ds.
  const auto integrals = [&](std::size_t e) {
    if (e >= o) return std::make_pair(integ.integrate(o, e, w_minus), integ.integrate(o, e, wdot));
    return std::make_pair(Eigen::VectorXd(-integ.integrate(e, o, w_minus, true)),
                          Eigen::VectorXd(-integ.integrate(e, o, wdot, true)));
  };
  const std::size_t span = direction == Direction::future ? u.size() - 1 - o : o;
  const auto at = [&](std::size_t k) { return direction == Direction::future ? o + k : o - k; };

  const auto full = integrals(at(span));
  const auto half = integrals(at(span / 2));
  const auto quarter = integrals(at(span / 4));
  state.u0_plus += plan.inverse(full.first);
  state.u1_plus += plan.inverse(full.second);

  const double r0 = model.params.r0;
  const auto change = [&](const auto& a, const auto& b) {
    return weak_norm(plan.inverse(a.first - b.first), r0) + weak_norm(plan.inverse(a.second - b.second), r0);
  };
  state.tail_increment = change(full, half);
  state.previous_increment = change(half, quarter);
  return state;
}

ScatteringDefect scattering_defect(const SpectralPlan& plan, const Model& model, const Trajectory& u,
                                   const ScatteringState& state) {
  const double r0 = model.params.r0;
  const auto idx = side_indices(u, state.direction);
  ScatteringDefect out;
  for (std::size_t j : idx) out.times.push_back(u.times[j]);
  const auto free = free_evolution(plan, out.times, state.u0_plus, state.u1_plus);

  const Trajectory source = source_of(model, u);
  const bool zero_source = vanishes(source);
  std::optional<DuhamelIntegrator> integ;
  if (!zero_source) integ.emplace(plan, source);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out.direct.push_back(weak_norm(u.fields[idx[k]] - free[k], r0));
    out.tail.push_back(zero_source ? 0.0 : weak_norm(integ->tail(idx[k], state.direction == Direction::past), r0));
  }
  return out;
}

std::pair<double, double> scattering_defect(const SpectralPlan& plan, const Model& model, const Trajectory& u,
                                            const ScatteringState& state, double t) {
  const std::size_t j = u.index_of(t);
  const double r0 = model.params.r0;
  const RadialField free =
      propagate_Wdot(plan, t, state.u0_plus) + propagate_W(plan, t, state.u1_plus);
  const Trajectory source = source_of(model, u);
  const double tail =
      vanishes(source) ? 0.0
                       : weak_norm(DuhamelIntegrator(plan, source).tail(j, state.direction == Direction::past), r0);
  return {weak_norm(u.fields[j] - free, r0), tail};
}

EstimateReport audit_weighted_duhamel(const SpectralPlan& plan, const Trajectory& source, double h, double r0,
                                      double s) {
  require_h(h);
  EstimateReport report;
  report.inputs = {{"h", h}, {"r0", r0}, {"s", s}, {"horizon", source.horizon()}};
  if (h > 0.9) report.flags.push_back("h_near_one");

  const std::size_t o = source.origin();
  double denominator = 0.0;
  for (std::size_t j = o; j < source.size(); ++j) {
    denominator = std::max(denominator, std::pow(source.times[j], h) * weak_norm(source.fields[j], s));
  }
  report.values["source_weighted_sup"] = denominator;
  double i1_max = 0.0, i2_max = 0.0;
  if (denominator == 0.0) {
    report.flags.push_back("zero_source");
    for (std::size_t j = o + 1; j < source.size(); ++j) report.samples.push_back({source.times[j], 0.0, 0.0});
  } else {
    const DuhamelIntegrator integ(plan, source);
    for (std::size_t j = o + 1; j < source.size(); ++j) {
      const double t = source.times[j];
      const double weight = std::pow(t, h);
      const auto kernel = [t](double tau, double rho) { return sin_over(t - tau, rho); };
      const std::size_t mid = o + (j - o) / 2;
      const Eigen::VectorXd first = integ.integrate(o, mid, kernel);
      const Eigen::VectorXd second = integ.integrate(mid, j, kernel);
      const double total = weight * weak_norm(plan.inverse(first + second), r0);
      i1_max = std::max(i1_max, weight * weak_norm(plan.inverse(first), r0) / denominator);
      i2_max = std::max(i2_max, weight * weak_norm(plan.inverse(second), r0) / denominator);
      report.samples.push_back({t, total, denominator});
      report.measured_constant = std::max(report.measured_constant, total / denominator);
    }
  }
  report.values["I1_max"] = i1_max;
  report.values["I2_max"] = i2_max;
  return report;
}

DecayVerdict decay_verdict(const std::vector<double>& t, const std::vector<double>& y) {
  DecayVerdict v;
  if (t.empty() || t.size() != y.size()) throw Error(ErrorKind::invalid_argument, kModule, "bad decay samples");
  if (std::all_of(y.begin(), y.end(), [](double x) { return x == 0.0; })) {
    v.verdict = "zero";
    return v;
  }
  std::size_t first = 0;
  while (first + 1 < t.size() && t[first] < 1.0) ++first;
  v.initial = y[first];
  v.final_value = y.back();
  v.slope = fit_loglog_slope(t, y, t.back() / 10.0, t.back());
  const bool decaying = v.slope && *v.slope <= -0.2 && v.final_value <= 0.1 * v.initial;
  v.verdict = decaying ? "decaying" : "not_decaying";
  return v;
}

StabilityReport stability_check(const SpectralPlan& plan, const Model& model, const Solution& u,
                                const InitialData& data, const Solution& u_tilde, const InitialData& data_tilde,
                                double h, double residual_tol) {
  require_h(h);
  require_solved(u, residual_tol);
  require_solved(u_tilde, residual_tol);
  if (u.u.times != u_tilde.u.times) {
    throw Error(ErrorKind::invalid_argument, kModule, "trajectories use different time grids");
  }
  const double r0 = model.params.r0;
  StabilityReport report;
  report.h = h;
  report.times = positive_times(u.u);
  const RadialField du0 = data.u0 - data_tilde.u0;
  const RadialField du1 = data.u1 - data_tilde.u1;
  const auto lin = free_evolution(plan, report.times, du0, du1);
  const std::size_t o = u.u.origin();
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    const double w = std::pow(report.times[k], h);
    report.weighted_linear.push_back(w * weak_norm(lin[k], r0));
    report.weighted_difference.push_back(w * weak_norm(u.u.fields[o + 1 + k] - u_tilde.u.fields[o + 1 + k], r0));
  }
  report.linear = decay_verdict(report.times, report.weighted_linear);
  report.difference = decay_verdict(report.times, report.weighted_difference);
  report.iff_holds = report.linear.tends_to_zero() == report.difference.tends_to_zero();
  return report;
}

EstimateReport improved_decay(const SpectralPlan& plan, const Model& model, const InitialData& data,
                              const Solution& solution, const ScatteringState& state, double h,
                              std::optional<std::pair<double, double>> window) {
  require_h(h);
  if (state.direction != Direction::future) {
    throw Error(ErrorKind::invalid_argument, kModule, "improved decay is measured forward in time");
  }
  const double r0 = model.params.r0;
  const Trajectory& u = solution.u;
  const double horizon = u.horizon();
  EstimateReport report;
  report.window_lo = window ? window->first : 1.0;
  report.window_hi = window ? window->second : horizon / 2.0;
  report.inputs = {{"h", h}, {"horizon", horizon}, {"r0", r0}};

  const auto times = positive_times(u);
  const auto lin = free_evolution(plan, times, data.u0, data.u1);
  std::vector<double> weighted;
  for (std::size_t k = 0; k < times.size(); ++k) weighted.push_back(std::pow(times[k], h) * weak_norm(lin[k], r0));
  const DecayVerdict pre = decay_verdict(times, weighted);
  if (!pre.tends_to_zero()) report.flags.push_back("precondition_failed");
  report.values["precondition_final_over_initial"] = pre.initial > 0.0 ? pre.final_value / pre.initial : 0.0;
  if (pre.slope) report.values["precondition_slope"] = *pre.slope;

  const ScatteringDefect defect = scattering_defect(plan, model, u, state);
  double defect_max = 0.0;
  for (std::size_t k = 1; k < defect.times.size(); ++k) {
    report.samples.push_back({defect.times[k], defect.direct[k], std::pow(defect.times[k], -h)});
    defect_max = std::max(defect_max, defect.direct[k]);
  }
  const double bound = -h + 0.1;
  report.values["exponent_bound"] = bound;
  if (defect_max <= 1e-14 * (1.0 + sup_weak_norm(u, r0))) {
    report.flags.push_back("trivial_pass");
    report.verdict = "pass";
    return report;
  }
  std::vector<double> t, y;
  for (const auto& s : report.samples) {
    t.push_back(s.t);
    y.push_back(s.measured);
  }
  report.fitted_slope = fit_loglog_slope(t, y, report.window_lo, report.window_hi);
  if (!report.fitted_slope) {
    report.flags.push_back("fit_failed");
    report.verdict = "fail";
    return report;
  }
  report.measured_constant = *report.fitted_slope;
  report.verdict = *report.fitted_slope <= bound ? "pass" : "fail";
  return report;
}

nlohmann::json to_json(const StabilityReport& r) {
  const auto verdict = [](const DecayVerdict& v) {
    nlohmann::json j = {{"verdict", v.verdict}, {"initial", v.initial}, {"final", v.final_value}};
    j["slope"] = v.slope ? nlohmann::json(*v.slope) : nlohmann::json(nullptr);
    return j;
  };
  return {{"h", r.h},
          {"linear", verdict(r.linear)},
          {"difference", verdict(r.difference)},
          {"iff_holds", r.iff_holds},
          {"thresholds", {{"slope", -0.2}, {"ratio", 0.1}}}};
}

}  // namespace wavelab
