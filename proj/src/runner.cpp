#include "wavelab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "wavelab/error.hpp"
#include "wavelab/lorentz.hpp"
#include "wavelab/scattering.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "cli_runner";
using nlohmann::json;

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) : columns_(header.size()) {
    bool first = true;
    for (const auto& h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  explicit Csv(const std::vector<std::string>& header) : columns_(header.size()) {
    for (std::size_t k = 0; k < header.size(); ++k) out_ << (k ? "," : "") << header[k];
    out_ << '\n';
  }
  // Cells are doubles or preformatted strings.
  Csv& row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error(ErrorKind::invalid_argument, kModule, "CSV row width mismatch");
    for (std::size_t k = 0; k < cells.size(); ++k) out_ << (k ? "," : "") << cells[k];
    out_ << '\n';
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::size_t columns_;
  std::ostringstream out_;
};

std::string f(double x) { return format_double(x); }

// Quotes a CSV cell when it holds a separator or a quote.
std::string text_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::admissibility:
    case ErrorKind::non_contraction:
    case ErrorKind::no_convergence:
      return kExitAuditFailure;
    default:
      return kExitError;
  }
}

std::string estimate_csv(const EstimateReport& r) {
  Csv csv({"t", "norm", "bound", "ratio"});
  for (const auto& s : r.samples) csv.row({f(s.t), f(s.measured), f(s.bound), f(s.bound > 0.0 ? s.measured / s.bound : 0.0)});
  return csv.str();
}

// Everything the time-dependent subcommands share.
struct Setup {
  GridPtr grid;
  PlanPtr plan;
  ModelParams params;
  std::vector<double> times;
  InitialData data;
  double data_scale = 1.0;
};

GridPtr grid_of(const ExperimentConfig& c) { return make_grid(c.grid.dimension, c.grid.r_max, c.grid.nodes); }

PlanPtr plan_of(const ExperimentConfig& c, const GridPtr& grid) {
  const std::size_t modes = c.spectral.freq_nodes.value_or(default_modes(*grid));
  const double rho = c.spectral.rho_max.value_or(default_rho_max(*grid));
  return build_plan(grid, modes, rho);
}

InitialData data_of(const DataConfig& d, const GridPtr& grid) {
  return {sample_profile(d.u0, grid), sample_profile(d.u1, grid)};
}

Setup setup(const ExperimentConfig& c) {
  const ModelParams params =
      derive_params(c.grid.dimension, c.model.q, c.model.b, c.model.c1, c.model.c2, c.model.mode);
  const GridPtr grid = grid_of(c);
  PlanPtr plan = plan_of(c, grid);
  Setup s{grid, std::move(plan), params, make_time_grid(c.time.t_max, c.time.time_nodes, c.time.symmetric),
          data_of(c.data, grid)};
  if (c.data.scale_to_linear_sup) {
    const double sup = sup_weak_norm(linear_evolution(*s.plan, s.data, s.times), s.params.r0);
    if (sup > 0.0) {
      s.data_scale = *c.data.scale_to_linear_sup / sup;
      s.data.u0 *= s.data_scale;
      s.data.u1 *= s.data_scale;
    }
  }
  return s;
}

SolveOptions solve_options(const ExperimentConfig& c) {
  SolveOptions o;
  o.tol = c.audit.tol;
  o.max_iter = c.audit.max_iter;
  o.ball_radius = c.audit.ball_radius;
  return o;
}

// Same dr and dt on twice the horizon and twice the radius, with the data
// scale of the base run fixed explicitly.
ExperimentConfig doubled(const ExperimentConfig& c, double data_scale) {
  ExperimentConfig d = c;
  d.time.t_max *= 2.0;
  d.time.time_nodes *= 2;
  d.grid.r_max *= 2.0;
  d.grid.nodes *= 2;
  if (d.spectral.freq_nodes) *d.spectral.freq_nodes *= 2;
  d.data.scale_to_linear_sup.reset();
  d.data.u0.amplitude *= data_scale;
  d.data.u1.amplitude *= data_scale;
  d.audit.check_doubling = false;
  return d;
}

json diagnostics_json(const SolveDiagnostics& d) {
  return {{"converged", d.converged},
          {"iterations", d.iterations},
          {"residual", d.residual},
          {"ball_radius", d.ball_radius},
          {"ball_invariant", d.ball_invariant},
          {"linear_sup_weak_norm", d.linear_sup_norm},
          {"sup_weak_norms", d.sup_weak_norms},
          {"increments", d.increments},
          {"contraction_ratios", d.contraction_ratios}};
}

std::size_t nearest_node(const std::vector<double>& t, double target) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < t.size(); ++k)
    if (std::abs(t[k] - target) < std::abs(t[best] - target)) best = k;
  return best;
}

// ---------------------------------------------------------------- params

RunResult run_params(const ExperimentConfig& c) {
  RunResult r;
  const ModelParams p = derive_params(c.grid.dimension, c.model.q, c.model.b, c.model.c1, c.model.c2, c.model.mode);
  r.report = to_json(p);
  r.summary = {{"p", p.p}, {"r0", p.r0}, {"s", p.s}, {"threshold_ok", p.threshold_ok},
               {"d1d2_residual", p.d1d2_residual}, {"on_open_segment", p.on_open_segment}};
  return r;
}

// ----------------------------------------------------------------- norms

RunResult run_norms(const ExperimentConfig& c) {
  RunResult r;
  const GridPtr grid = grid_of(c);
  const int n = grid->dimension();
  Csv csv({"field_id", "p", "z", "norm", "closed_form", "rel_err"});
  json rows = json::array();
  double worst = 0.0;

  std::vector<std::pair<std::string, RadialField>> fields;
  for (const auto& req : c.audit.norms) fields.emplace_back(req.id, sample_profile(req.field, grid));
  std::vector<LorentzIndex> indices;
  for (const auto& req : c.audit.norms) {
    const bool seen = std::any_of(indices.begin(), indices.end(),
                                  [&](const LorentzIndex& i) { return i.p == req.p && i.z == req.z; });
    if (!seen) indices.push_back({req.p, req.z});
  }
  if (indices.empty()) indices.push_back(LorentzIndex::weak(2.0));

  const auto emit = [&](const std::string& id, const RadialField& field, LorentzIndex idx,
                        std::optional<double> closed) {
    const double norm = lorentz_norm(field, idx);
    std::optional<double> err;
    if (closed) err = *closed > 0.0 ? std::abs(norm - *closed) / *closed : std::abs(norm);
    if (err) worst = std::max(worst, *err);
    csv.row({text_cell(id), f(idx.p), f(idx.z), f(norm), closed ? f(*closed) : "", err ? f(*err) : ""});
    json row = {{"field_id", id}, {"p", num(idx.p)}, {"z", num(idx.z)}, {"norm", num(norm)}};
    row["closed_form"] = closed ? num(*closed) : json(nullptr);
    row["rel_err"] = err ? num(*err) : json(nullptr);
    rows.push_back(std::move(row));
  };

  for (std::size_t k = 0; k < c.audit.norms.size(); ++k) {
    const auto& req = c.audit.norms[k];
    const RadialField& field = fields[k].second;
    const LorentzIndex idx{req.p, req.z};
    std::optional<double> closed;
    if (req.field.name == "indicator") {
      if (const auto shape = as_indicator(field)) closed = indicator_norm(shape->amplitude, shape->measure, idx);
    } else if (req.field.name == "power" && std::isinf(req.z) && std::abs(req.field.exponent * req.p - n) < 1e-12) {
      closed = std::abs(req.field.amplitude) * std::pow(unit_ball_volume(n), 1.0 / req.p);
    } else if (req.field.name == "zero") {
      closed = 0.0;
    }
    emit(req.id, field, idx, closed);
  }

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < c.audit.random_fields; ++k) {
    RadialField field(grid);
    const auto r_nodes = grid->nodes();
    for (std::size_t i = 0; i < field.size(); ++i) field[i] = unit(rng) * std::exp(-r_nodes[i]);
    for (const auto& idx : indices) emit("random" + std::to_string(k), field, idx, std::nullopt);
  }

  r.report = {{"rows", rows}, {"max_rel_err", worst}, {"tolerance", c.audit.norm_rel_tol}, {"seed", c.seed}};
  r.summary = {{"max_rel_err", worst}};
  r.tables.emplace_back("norms.csv", csv.str());
  if (worst > c.audit.norm_rel_tol) r.exit_code = kExitAuditFailure;
  return r;
}

// ------------------------------------------------------------ dispersive

std::vector<double> log_times(double lo, double hi, std::size_t count) {
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k)
    t[k] = lo * std::pow(hi / lo, static_cast<double>(k) / static_cast<double>(count - 1));
  return t;
}

RunResult run_dispersive(const ExperimentConfig& c) {
  RunResult r;
  const GridPtr grid = grid_of(c);
  const PlanPtr plan = plan_of(c, grid);
  const RadialField h = sample_profile(c.data.u0, grid);
  const auto times = log_times(c.audit.t_min, c.audit.t_max, c.audit.samples);
  const EstimateReport rep = c.audit.mode == "lp"
                                 ? audit_dispersive_lp(*plan, c.audit.p, h, times, c.audit.window)
                                 : audit_dispersive(*plan, c.audit.l1, c.audit.l2, c.audit.z, h, times, c.audit.window);
  const double expected = rep.values.at("expected_slope");
  const bool pass = rep.fitted_slope && std::abs(*rep.fitted_slope - expected) <= c.audit.slope_tol;
  r.report = to_json(rep);
  r.report["slope_tol"] = c.audit.slope_tol;
  r.report["pass"] = pass;
  r.summary = {{"fitted_slope", rep.fitted_slope ? json(*rep.fitted_slope) : json(nullptr)},
               {"expected_slope", expected}, {"measured_constant", rep.measured_constant}};
  r.tables.emplace_back("dispersive.csv", estimate_csv(rep));
  r.exit_code = pass ? kExitPass : kExitAuditFailure;
  return r;
}

// -------------------------------------------------------------- yamazaki

RunResult run_yamazaki(const ExperimentConfig& c) {
  RunResult r;
  const GridPtr grid = grid_of(c);
  const PlanPtr plan = plan_of(c, grid);
  double d1 = 0.0, d2 = 0.0;
  if (c.audit.d1 && c.audit.d2) {
    d1 = *c.audit.d1;
    d2 = *c.audit.d2;
  } else {
    const ModelParams p = derive_params(c.grid.dimension, c.model.q, c.model.b, c.model.c1, c.model.c2, c.model.mode);
    d1 = c.audit.d1.value_or(p.r0_dual);
    d2 = c.audit.d2.value_or(p.s_dual);
  }
  const RadialField src = sample_profile(c.data.u0, grid);
  YamazakiOptions opts;
  opts.allow_out_of_region = c.audit.allow_out_of_region;
  opts.steps_per_horizon = c.audit.steps_per_horizon;
  const EstimateReport rep = audit_yamazaki(*plan, d1, d2, src, c.audit.horizon, opts);
  const double tail = rep.values.at("tail_indicator");
  const bool pass = tail <= c.audit.tail_tol;
  r.report = to_json(rep);
  r.report["tail_tol"] = c.audit.tail_tol;
  r.report["pass"] = pass;
  r.summary = {{"tail_indicator", tail}, {"normalized", rep.values.at("normalized")}, {"d1", d1}, {"d2", d2}};
  r.tables.emplace_back("yamazaki.csv", estimate_csv(rep));
  r.exit_code = pass ? kExitPass : kExitAuditFailure;
  return r;
}

// ----------------------------------------------------------------- solve

RunResult run_solve(const ExperimentConfig& c) {
  RunResult r;
  const Setup s = setup(c);
  const Model model = make_model(s.params, s.grid);
  const Solution sol = picard_solve(*s.plan, model, s.data, s.times, solve_options(c));
  const auto& d = sol.diagnostics;
  const bool pass = d.converged && d.residual <= c.audit.residual_tol && d.ball_invariant;

  Csv csv({"t", "r", "u"});
  const auto r_nodes = s.grid->nodes();
  for (std::size_t j = 0; j < sol.u.size(); j += c.audit.snapshot_every) {
    for (std::size_t i = 0; i < r_nodes.size(); ++i) csv.row({f(sol.u.times[j]), f(r_nodes[i]), f(sol.u.fields[j][i])});
  }
  double max_ratio = 0.0;
  for (std::size_t k = 1; k < d.contraction_ratios.size(); ++k) max_ratio = std::max(max_ratio, d.contraction_ratios[k]);
  r.report = {{"params", to_json(s.params)},
              {"data_scale", s.data_scale},
              {"diagnostics", diagnostics_json(d)},
              {"potential_norms", {{"V1", model.potentials.v1_norm}, {"V2", model.potentials.v2_norm},
                                   {"V2_constant", model.potentials.v2_constant}}},
              {"max_ratio_from_iteration_2", max_ratio},
              {"residual_tol", c.audit.residual_tol},
              {"pass", pass}};
  r.summary = {{"iterations", d.iterations}, {"residual", d.residual}, {"max_ratio_from_iteration_2", max_ratio},
               {"ball_invariant", d.ball_invariant}};
  r.tables.emplace_back("trajectory.csv", csv.str());
  r.exit_code = pass ? kExitPass : kExitAuditFailure;
  return r;
}

// --------------------------------------------------------------- scatter

struct ScatterRun {
  Setup setup;
  Solution solution;
  ScatteringState state;
  ScatteringDefect defect;
  EstimateReport improved;
  std::vector<double> weighted_linear;
};

ScatterRun scatter_run(const ExperimentConfig& c) {
  Setup s = setup(c);
  const Model model = make_model(s.params, s.grid);
  Solution sol = picard_solve(*s.plan, model, s.data, s.times, solve_options(c));
  ScatteringState st = scattering_state(*s.plan, model, s.data, sol, Direction::future, c.audit.residual_tol);
  ScatteringDefect defect = scattering_defect(*s.plan, model, sol.u, st);
  EstimateReport improved = improved_decay(*s.plan, model, s.data, sol, st, c.audit.h);
  const auto lin = free_evolution(*s.plan, defect.times, s.data.u0, s.data.u1);
  std::vector<double> wl;
  for (std::size_t k = 0; k < defect.times.size(); ++k)
    wl.push_back(std::pow(defect.times[k], c.audit.h) * weak_norm(lin[k], s.params.r0));
  return {std::move(s), std::move(sol), std::move(st), std::move(defect), std::move(improved), std::move(wl)};
}

RunResult run_scatter(const ExperimentConfig& c) {
  RunResult r;
  const ScatterRun run = scatter_run(c);
  const auto& d = run.defect;
  const double h = c.audit.h;

  double agreement = 0.0;
  for (std::size_t k = 0; k < d.times.size(); ++k) agreement = std::max(agreement, std::abs(d.direct[k] - d.tail[k]));
  const std::size_t k1 = nearest_node(d.times, 1.0);
  const std::size_t khalf = nearest_node(d.times, 0.5 * d.times.back());
  const double decay = d.direct[k1] > 0.0 ? d.direct[khalf] / d.direct[k1] : 0.0;
  const std::size_t kmax = static_cast<std::size_t>(std::max_element(d.direct.begin(), d.direct.end()) - d.direct.begin());
  bool monotone = true;
  for (std::size_t k = kmax + 1; k < d.direct.size(); ++k) monotone = monotone && d.direct[k] <= d.direct[k - 1];

  const bool trivial = run.improved.has_flag("trivial_pass");
  bool pass = agreement <= c.audit.defect_tol && (trivial || decay <= c.audit.decay_ratio) &&
              run.improved.verdict == "pass";

  Csv csv({"t", "defect_direct", "defect_tail", "weighted_linear", "weighted_diff"});
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    csv.row({f(d.times[k]), f(d.direct[k]), f(d.tail[k]), f(run.weighted_linear[k]),
             f(std::pow(d.times[k], h) * d.direct[k])});
  }

  r.report = {{"params", to_json(run.setup.params)},
              {"data_scale", run.setup.data_scale},
              {"diagnostics", diagnostics_json(run.solution.diagnostics)},
              {"state", {{"horizon", run.state.horizon},
                         {"tail_increment", run.state.tail_increment},
                         {"previous_increment", run.state.previous_increment}}},
              {"defect", {{"max_direct_tail_gap", agreement},
                          {"tolerance", c.audit.defect_tol},
                          {"t_first", d.times[k1]},
                          {"t_half", d.times[khalf]},
                          {"half_over_first", decay},
                          {"decay_ratio", c.audit.decay_ratio},
                          {"monotone_after_first_max", monotone}}},
              {"improved_decay", to_json(run.improved)}};
  r.summary = {{"max_direct_tail_gap", agreement}, {"half_over_first", decay},
               {"exponent", run.improved.fitted_slope ? json(*run.improved.fitted_slope) : json(nullptr)}};

  if (c.audit.check_doubling) {
    const ScatterRun twice = scatter_run(doubled(c, run.setup.data_scale));
    json block = {{"horizon", twice.state.horizon}, {"improved_decay", to_json(twice.improved)},
                  {"tail_increment", twice.state.tail_increment}, {"tolerance", c.audit.exponent_tol}};
    bool stable = trivial && twice.improved.has_flag("trivial_pass");
    if (run.improved.fitted_slope && twice.improved.fitted_slope) {
      const double change = std::abs(*twice.improved.fitted_slope - *run.improved.fitted_slope);
      block["exponent_change"] = change;
      stable = change <= c.audit.exponent_tol;
    }
    block["stable"] = stable;
    r.report["doubling"] = block;
    r.summary["exponent_doubled"] =
        twice.improved.fitted_slope ? json(*twice.improved.fitted_slope) : json(nullptr);
    pass = pass && stable;
  }
  r.report["pass"] = pass;
  r.tables.emplace_back("scatter.csv", csv.str());
  r.exit_code = pass ? kExitPass : kExitAuditFailure;
  return r;
}

// ------------------------------------------------------------- stability

struct StabilityRun {
  Setup setup;
  StabilityReport stability;
  EstimateReport weighted;
  ScatteringDefect defect;
};

StabilityRun stability_run(const ExperimentConfig& c) {
  Setup s = setup(c);
  const Model model = make_model(s.params, s.grid);
  const SolveOptions opts = solve_options(c);
  const Solution u = picard_solve(*s.plan, model, s.data, s.times, opts);
  InitialData tilde_data{RadialField(s.grid), RadialField(s.grid)};
  if (c.data_tilde.kind == TildeConfig::Kind::same) {
    tilde_data = s.data;
  } else if (c.data_tilde.kind == TildeConfig::Kind::data) {
    tilde_data = data_of(c.data_tilde.data, s.grid);
    tilde_data.u0 *= s.data_scale;
    tilde_data.u1 *= s.data_scale;
  }
  SolveOptions tilde_opts = opts;
  tilde_opts.ball_radius.reset();
  const Solution ut = c.data_tilde.kind == TildeConfig::Kind::same
                          ? u
                          : picard_solve(*s.plan, model, tilde_data, s.times, tilde_opts);
  StabilityReport rep = stability_check(*s.plan, model, u, s.data, ut, tilde_data, c.audit.h, c.audit.residual_tol);
  EstimateReport weighted = audit_weighted_duhamel(*s.plan, source_of(model, u.u), c.audit.h, s.params.r0, s.params.s);
  const ScatteringState st = scattering_state(*s.plan, model, s.data, u, Direction::future, c.audit.residual_tol);
  ScatteringDefect defect = scattering_defect(*s.plan, model, u.u, st);
  return {std::move(s), std::move(rep), std::move(weighted), std::move(defect)};
}

RunResult run_stability(const ExperimentConfig& c) {
  RunResult r;
  const StabilityRun run = stability_run(c);
  const auto& st = run.stability;
  bool pass = st.iff_holds;

  Csv csv({"t", "defect_direct", "defect_tail", "weighted_linear", "weighted_diff"});
  // The defect starts at t = 0, the weighted samples at the first positive node.
  for (std::size_t k = 0; k < st.times.size(); ++k) {
    csv.row({f(st.times[k]), f(run.defect.direct[k + 1]), f(run.defect.tail[k + 1]), f(st.weighted_linear[k]),
             f(st.weighted_difference[k])});
  }
  r.report = to_json(st);
  r.report["params"] = to_json(run.setup.params);
  r.report["data_scale"] = run.setup.data_scale;
  r.report["weighted_duhamel"] = to_json(run.weighted);
  r.summary = {{"iff_holds", st.iff_holds}, {"linear", st.linear.verdict}, {"difference", st.difference.verdict},
               {"L_tilde", run.weighted.measured_constant}};
  if (c.audit.check_doubling) {
    const StabilityRun twice = stability_run(doubled(c, run.setup.data_scale));
    const double a = run.weighted.measured_constant, b = twice.weighted.measured_constant;
    const double change = a > 0.0 ? std::abs(b - a) / a : std::abs(b);
    const bool stable = change <= c.audit.constant_tol;
    r.report["doubling"] = {{"horizon", twice.setup.times.back()},
                            {"L_tilde", b},
                            {"relative_change", change},
                            {"tolerance", c.audit.constant_tol},
                            {"stable", stable},
                            {"iff_holds", twice.stability.iff_holds}};
    r.summary["L_tilde_doubled"] = b;
    pass = pass && stable;
  }
  r.report["pass"] = pass;
  r.tables.emplace_back("stability.csv", csv.str());
  r.exit_code = pass ? kExitPass : kExitAuditFailure;
  return r;
}

// ----------------------------------------------------------------- sweep

RunResult run_one(const std::string& command, const ExperimentConfig& c, unsigned workers);

RunResult run_sweep(const ExperimentConfig& c, unsigned workers) {
  const std::string& inner = c.sweep.experiment;
  if (inner == "sweep") throw Error(ErrorKind::config, kModule, "sweep.experiment cannot be sweep");
  if (std::find(subcommands().begin(), subcommands().end(), inner) == subcommands().end()) {
    throw Error(ErrorKind::config, kModule, "sweep.experiment '" + inner + "' is not a subcommand");
  }
  if (c.sweep.ranges.empty()) throw Error(ErrorKind::config, kModule, "sweep.ranges is empty");

  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  for (const auto& [name, list] : c.sweep.ranges) {
    ExperimentConfig probe = c;
    if (!set_parameter(probe, name, list.front())) {
      throw Error(ErrorKind::config, kModule, "sweep.ranges has unknown parameter '" + name + "'");
    }
    names.push_back(name);
    std::vector<double> sorted = list;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    values.push_back(std::move(sorted));
  }

  // Cartesian product, first name outermost.
  std::vector<std::vector<double>> points{{}};
  for (const auto& list : values) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points)
      for (double v : list) {
        next.push_back(p);
        next.back().push_back(v);
      }
    points = std::move(next);
  }

  std::vector<RunResult> results(points.size());
  std::atomic<std::size_t> cursor{0};
  const auto worker = [&] {
    for (std::size_t k = cursor++; k < points.size(); k = cursor++) {
      ExperimentConfig point = c;
      for (std::size_t a = 0; a < names.size(); ++a) set_parameter(point, names[a], points[k][a]);
      results[k] = run_one(inner, point, 1);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::set<std::string> summary_keys;
  for (const auto& res : results)
    for (const auto& [key, _] : res.summary.items()) summary_keys.insert(key);
  std::vector<std::string> header = names;
  header.insert(header.end(), {"exit_code", "status", "message"});
  header.insert(header.end(), summary_keys.begin(), summary_keys.end());
  Csv csv(header);

  RunResult r;
  json rows = json::array();
  bool any_failed = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const RunResult& res = results[k];
    any_failed = any_failed || res.exit_code != kExitPass;
    std::vector<std::string> cells;
    json row;
    for (std::size_t a = 0; a < names.size(); ++a) {
      cells.push_back(f(points[k][a]));
      row[names[a]] = points[k][a];
    }
    const std::string status = res.report.contains("error") ? res.report["error"]["kind"].get<std::string>()
                                                            : (res.exit_code == kExitPass ? "ok" : "audit_failure");
    const std::string message = res.report.contains("error") ? res.report["error"]["message"].get<std::string>() : "";
    cells.insert(cells.end(), {std::to_string(res.exit_code), status, text_cell(message)});
    for (const auto& key : summary_keys) {
      if (!res.summary.contains(key)) {
        cells.emplace_back("");
        continue;
      }
      const json& v = res.summary[key];
      if (v.is_number()) cells.push_back(f(v.get<double>()));
      else if (v.is_boolean()) cells.emplace_back(v.get<bool>() ? "true" : "false");
      else if (v.is_string()) cells.push_back(text_cell(v.get<std::string>()));
      else cells.emplace_back("");
    }
    csv.row(cells);
    row["exit_code"] = res.exit_code;
    row["status"] = status;
    row["summary"] = res.summary;
    if (!message.empty()) row["message"] = message;
    rows.push_back(std::move(row));
  }
  r.report = {{"experiment", inner}, {"parameters", names}, {"rows", rows}};
  r.tables.emplace_back("sweep.csv", csv.str());
  r.exit_code = any_failed ? kExitAuditFailure : kExitPass;
  return r;
}

RunResult run_one(const std::string& command, const ExperimentConfig& c, unsigned workers) {
  try {
    validate(c);
    if (command == "params") return run_params(c);
    if (command == "norms") return run_norms(c);
    if (command == "dispersive") return run_dispersive(c);
    if (command == "yamazaki") return run_yamazaki(c);
    if (command == "solve") return run_solve(c);
    if (command == "scatter") return run_scatter(c);
    if (command == "stability") return run_stability(c);
    if (command == "sweep") return run_sweep(c, workers);
    throw Error(ErrorKind::config, kModule, "unknown subcommand '" + command + "'");
  } catch (const Error& e) {
    RunResult r;
    r.exit_code = exit_code_for(e.kind());
    r.report = {{"error", {{"kind", to_string(e.kind())}, {"module", e.module()}, {"message", e.what()}}}};
    return r;
  } catch (const std::exception& e) {
    RunResult r;
    r.exit_code = kExitError;
    r.report = {{"error", {{"kind", "runtime"}, {"module", kModule}, {"message", e.what()}}}};
    return r;
  }
}
// Data that has not decayed by r_max is silently truncated by the grid.
std::vector<std::string> truncation_warnings(const std::string& command, const ExperimentConfig& c) {
  std::vector<std::string> out;
  if (command == "params" || command == "norms" || command == "sweep") return out;
  try {
    const GridPtr grid = grid_of(c);
    const auto check = [&](const ProfileSpec& spec, const std::string& label) {
      const RadialField f = sample_profile(spec, grid);
      const double peak = f.max_abs();
      if (peak > 0.0 && std::abs(f[f.size() - 1]) > 1e-12 * peak)
        out.push_back(label + " is not negligible at r_max (|f(r_N)|/max = " + format_double(std::abs(f[f.size() - 1]) / peak) +
                      "); the grid truncates it");
    };
    check(c.data.u0, "u0");
    check(c.data.u1, "u1");
    if (command == "stability" && c.data_tilde.kind == TildeConfig::Kind::data) {
      check(c.data_tilde.data.u0, "data_tilde.u0");
      check(c.data_tilde.data.u1, "data_tilde.u1");
    }
  } catch (const std::exception&) {
    // Configuration errors are reported by the subcommand itself.
  }
  return out;
}
}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"params", "norms",     "dispersive", "yamazaki",
                                                 "solve",  "scatter",   "stability",  "sweep"};
  return names;
}

RunResult run(const std::string& command, const ExperimentConfig& config, unsigned workers) {
  RunResult r = run_one(command, config, workers);
  if (const auto warnings = truncation_warnings(command, config); !warnings.empty()) r.report["warnings"] = warnings;
  r.report["command"] = command;
  r.report["exit_code"] = r.exit_code;
  return r;
}

void write_artifacts(const RunResult& result, const OutputConfig& output, const std::string& command) {
  namespace fs = std::filesystem;
  const fs::path dir(output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::config, kModule, "cannot create output directory '" + output.dir + "'");
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(dir / (output.prefix + name), std::ios::binary);
    if (!out) throw Error(ErrorKind::config, kModule, "cannot write '" + (dir / (output.prefix + name)).string() + "'");
    out << text;
  };
  write(command + ".json", result.report.dump(2) + "\n");
  for (const auto& [name, text] : result.tables) write(name, text);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"n", p.n},
          {"q", p.q},
          {"b", p.b},
          {"c1", p.c1},
          {"c2", p.c2},
          {"p", p.p},
          {"r0", p.r0},
          {"s", p.s},
          {"r0_dual", p.r0_dual},
          {"s_dual", p.s_dual},
          {"threshold", num(p.threshold)},
          {"threshold_ok", p.threshold_ok},
          {"boundary", p.boundary},
          {"r0_identity_residual", p.r0_identity_residual},
          {"s_identity_residual", p.s_identity_residual},
          {"d1d2_residual", p.d1d2_residual},
          {"derived_point", {p.derived_point.x, p.derived_point.y}},
          {"dual_point_residual", p.dual_point_residual},
          {"on_open_segment", p.on_open_segment},
          {"in_radial_triangle", p.in_radial_triangle},
          {"warnings", p.warnings}};
}

}  // namespace wavelab
