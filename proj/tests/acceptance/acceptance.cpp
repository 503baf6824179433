// Acceptance suite: one PASS/FAIL line per criterion, followed by the measured
// numbers behind each sub-check. `--only N` runs a single criterion.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wavelab/config.hpp"
#include "wavelab/error.hpp"
#include "wavelab/exponents.hpp"
#include "wavelab/lorentz.hpp"
#include "wavelab/mild_solution.hpp"
#include "wavelab/profiles.hpp"
#include "wavelab/propagator.hpp"
#include "wavelab/runner.hpp"

using namespace wavelab;
using nlohmann::json;

namespace {

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

struct Outcome {
  std::vector<Check> checks;

  void add(std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7g", x);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double max_rel(const RadialField& got, const RadialField& want) {
  double err = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) err = std::max(err, std::abs(got[i] - want[i]));
  return err / want.max_abs();
}

// The criterion-8 experiment; other criteria start from it.
json base_solve_config() {
  return json::parse(R"({
    "experiment": "solve",
    "grid": {"dimension": 5, "r_max": 16.0, "nodes": 256},
    "model": {"q": 3.0, "b": 0.5, "c1": 0.01, "c2": 0.01},
    "data": {"u0": {"profile": "gaussian", "amplitude": 1.0, "width": 1.0}, "scale_to_linear_sup": 0.1},
    "time": {"t_max": 8.0, "time_nodes": 64},
    "audit": {"tol": 1e-10, "max_iter": 100, "ball_radius": 0.2, "residual_tol": 1e-6, "snapshot_every": 8}
  })");
}

RunResult run_json(const std::string& command, const json& j, unsigned workers = 1) {
  return run(command, parse_config(j), workers);
}

double num(const json& j) { return j.is_number() ? j.get<double>() : std::nan(""); }

// ------------------------------------------------------------------ 1

Outcome criterion1() {
  Outcome o;
  const Stopwatch clock;
  const auto g = make_grid(3, 20.0, 1024);
  const auto plan = build_plan(g);
  const RadialField u1 = sample([](double r) { return std::exp(-r * r); }, g);
  const OracleProfile exact{[](double r) { return std::exp(-r * r); },
                            [](double s) { return 0.5 * (1.0 - std::exp(-s * s)); }};
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const RadialField u = propagate_W(*plan, t, u1);
    RadialField want(g);
    for (std::size_t i = 0; i < g->size(); ++i) want[i] = oracle_3d(t, OracleProfile::zero(), exact, g->node(i));
    worst = std::max(worst, max_rel(u, want));
  }
  o.add("max relative error vs closed form, t in {0.5, 1, 2}", worst <= 1e-6, fmt(worst) + " <= 1e-6");

  const Eigen::VectorXd spectrum = plan->forward(u1);
  Eigen::VectorXd moved = spectrum;
  const auto rho = plan->frequencies();
  for (std::size_t k = 0; k < plan->modes(); ++k) moved[static_cast<Eigen::Index>(k)] *= sin_over(1.0, rho[k]);
  const double spot = plan->evaluate(moved, 1.0);
  const double closed = (1.0 - std::exp(-4.0)) / 4.0;
  o.add("u(1,1)", std::abs(spot - 0.2454211) <= 5e-8 && std::abs(spot - closed) <= 1e-6 * closed,
        fmt(spot) + " vs (1-e^-4)/4 = " + fmt(closed));
  const double elapsed = clock.seconds();
  o.add("runtime", elapsed < 10.0, fmt(elapsed) + " s < 10 s");
  return o;
}

// ------------------------------------------------------------------ 2

Outcome criterion2() {
  Outcome o;
  const auto g = make_grid(5, 20.0, 512);
  const auto plan = build_plan(g);
  const RadialField u0 = sample([](double r) { return std::exp(-r * r); }, g);
  const RadialField u1 = sample([](double r) { return r * r * std::exp(-r * r); }, g);
  const Eigen::VectorXd e0 = spectral_energy(*plan, 0.0, u0, u1);
  const double scale = e0.cwiseAbs().maxCoeff();
  double drift = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    drift = std::max(drift, (spectral_energy(*plan, t, u0, u1) - e0).cwiseAbs().maxCoeff() / scale);
  }
  o.add("per-mode energy drift on [0, 10]", drift <= 1e-12, fmt(drift) + " <= 1e-12");

  double identity = 0.0;
  for (double t : {0.5, 1.0, 2.0})
    for (double s : {0.5, 1.0, 2.0}) {
      const RadialField lhs = propagate_W(*plan, t + s, u0);
      const RadialField rhs =
          propagate_Wdot(*plan, s, propagate_W(*plan, t, u0)) + propagate_W(*plan, s, propagate_Wdot(*plan, t, u0));
      identity = std::max(identity, max_rel(rhs, lhs));
    }
  o.add("addition identity W(t+s) = Wdot(s)W(t) + W(s)Wdot(t)", identity <= 1e-8, fmt(identity) + " <= 1e-8");
  return o;
}

// ------------------------------------------------------------------ 3

Outcome criterion3() {
  Outcome o;
  double indicator_err = 0.0;
  for (int n : {3, 5}) {
    const auto g = make_grid(n, 2.0, 64);
    const RadialField ball = sample([](double r) { return r < 1.0 ? 3.0 : 0.0; }, g);
    const double E = unit_ball_volume(n);
    for (double p : {1.5, 2.0, 2.5, 5.0})
      for (double z : {1.0, 2.0, 7.5, kInf}) {
        const double want = 3.0 * (std::isinf(z) ? 1.0 : std::pow(p / z, 1.0 / z)) * std::pow(E, 1.0 / p);
        indicator_err = std::max(indicator_err, std::abs(lorentz_norm(ball, {p, z}) - want) / want);
      }
  }
  o.add("indicator anchors (p/z)^{1/z}|E|^{1/p}", indicator_err <= 1e-12, fmt(indicator_err) + " <= 1e-12");

  std::ostringstream anchors;
  bool anchors_ok = true;
  for (auto [n, p] : {std::pair{3, 3.0}, std::pair{5, 2.5}, std::pair{5, 5.0}}) {
    const auto g = make_grid(n, 1.0, 4096);
    const RadialField f = sample([n = n, p = p](double r) { return std::pow(r, -n / p); }, g);
    const double want = std::pow(unit_ball_volume(n), 1.0 / p);
    const double ratio = weak_norm(f, p) / want;
    anchors_ok = anchors_ok && std::abs(ratio - 1.0) <= 0.01;
    anchors << "(" << n << "," << fmt(p) << ") ratio " << fmt(ratio) << "; ";
  }
  o.add("weak norm of r^{-n/p} within 1% of omega_n^{1/p} at N=4096", anchors_ok, anchors.str() + "tol 1%");

  const auto profile = [](double r) { return std::exp(-r * r) * (1.0 + r); };
  double scaling = 0.0;
  for (double lambda : {0.5, 2.0, 3.0}) {
    const auto g = make_grid(5, 6.0, 300);
    const auto gs = make_grid(5, 6.0 / lambda, 300);
    const RadialField f = sample(profile, g);
    const RadialField fl = sample([&](double r) { return profile(lambda * r); }, gs);
    for (LorentzIndex idx : {LorentzIndex{2.0, 1.0}, LorentzIndex{2.5, kInf}, LorentzIndex{4.0, 3.0}}) {
      const double want = std::pow(lambda, -5.0 / idx.p) * lorentz_norm(f, idx);
      scaling = std::max(scaling, std::abs(lorentz_norm(fl, idx) - want) / want);
    }
  }
  o.add("scaling law", scaling <= 1e-10, fmt(scaling) + " <= 1e-10");

  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const auto g = make_grid(5, 3.0, 200);
  double lp = 0.0;
  for (int k = 0; k < 5; ++k) {
    RadialField f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = normal(rng) * std::exp(-g->node(i));
    for (double p : {1.5, 2.0, 3.0, 5.0}) {
      double sum = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) sum += std::pow(std::abs(f[i]), p) * g->measure(i);
      const double want = std::pow(sum, 1.0 / p);
      lp = std::max(lp, std::abs(lorentz_norm(f, LorentzIndex::strong(p)) - want) / want);
    }
  }
  o.add("L^(p,p) equals the L^p norm", lp <= 1e-12, fmt(lp) + " <= 1e-12");
  return o;
}

// ------------------------------------------------------------------ 4

// Smooth random field: three Gaussian bumps with random signs, centres and widths.
RadialField random_bumps(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> centre(0.0, 3.0), width(0.3, 1.5);
  std::normal_distribution<double> amp;
  RadialField f(g);
  for (int b = 0; b < 3; ++b) {
    const double a = amp(rng), c = centre(rng), w = width(rng);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += a * std::exp(-std::pow((g->node(i) - c) / w, 2));
  }
  return f;
}

double corpus_sup(std::uint64_t seed, const GridPtr& g, LorentzIndex a, LorentzIndex b, LorentzIndex ab) {
  std::mt19937_64 rng(seed);
  double sup = 0.0;
  for (int k = 0; k < 100; ++k) {
    const RadialField f = random_bumps(g, rng);
    const RadialField h = random_bumps(g, rng);
    sup = std::max(sup, audit_holder(f, h, a, b, ab).ratio);
  }
  return sup;
}

Outcome criterion4() {
  Outcome o;
  std::ostringstream eq;
  double worst = 0.0;
  for (auto [n, p1, p2] : {std::tuple{5, 4.0, 4.0}, std::tuple{5, 2.5, 5.0}, std::tuple{3, 3.0, 6.0}}) {
    const auto g = make_grid(n, 1.0, 4096);
    const RadialField f = sample([n = n, p1 = p1](double r) { return std::pow(r, -n / p1); }, g);
    const RadialField h = sample([n = n, p2 = p2](double r) { return std::pow(r, -n / p2); }, g);
    const double p3 = 1.0 / (1.0 / p1 + 1.0 / p2);
    const double ratio =
        audit_holder(f, h, LorentzIndex::weak(p1), LorentzIndex::weak(p2), LorentzIndex::weak(p3)).ratio;
    worst = std::max(worst, std::abs(ratio - 1.0));
    eq << "(" << n << "," << fmt(p1) << "," << fmt(p2) << ") " << fmt(ratio) << "; ";
  }
  o.add("power-law equality cases", worst <= 0.01, eq.str() + "tol 1%");

  const auto g = make_grid(5, 8.0, 512);
  const LorentzIndex a{4.0, 2.0}, b{4.0, 2.0}, ab{2.0, 1.0};
  const double s1 = corpus_sup(1, g, a, b, ab);
  const double s2 = corpus_sup(2, g, a, b, ab);
  const bool finite = std::isfinite(s1) && std::isfinite(s2) && s1 > 0.0 && s2 > 0.0;
  const double spread = std::abs(s1 / s2 - 1.0);
  o.add("random corpus sup ratio, 100 fields, seeds 1 and 2", finite && spread <= 0.05,
        fmt(s1) + " vs " + fmt(s2) + ", spread " + fmt(spread) + " <= 0.05");
  return o;
}

// ------------------------------------------------------------------ 5

Outcome criterion5() {
  Outcome o;
  const Stopwatch clock;
  for (auto [n, q, b] : {std::tuple{5, 3.0, 0.0}, std::tuple{5, 3.0, 0.5}, std::tuple{5, 2.8, 0.3}}) {
    const ModelParams p = derive_params(n, q, b, 0.01, 0.01);
    const ExponentPoint a1 = vertex(Vertex::A1, n), a2 = vertex(Vertex::A2, n);
    // Independent distance to the line through A1 and A2.
    const double dx = a2.x - a1.x, dy = a2.y - a1.y;
    const double dist =
        std::abs(dy * (p.derived_point.x - a1.x) - dx * (p.derived_point.y - a1.y)) / std::hypot(dx, dy);
    const bool ok = p.d1d2_residual <= 1e-12 && dist <= 1e-12 && p.dual_point_residual <= 1e-12 && p.on_open_segment;
    std::ostringstream name;
    name << "(n,q,b) = (" << n << "," << fmt(q) << "," << fmt(b) << ")";
    o.add(name.str(), ok,
          "d1d2 residual " + fmt(p.d1d2_residual) + ", distance to A1A2 " + fmt(dist) + ", dual residual " +
              fmt(p.dual_point_residual) + ", open segment " + (p.on_open_segment ? "yes" : "no"));
  }
  bool rejected = false;
  std::string why = "accepted";
  try {
    derive_params(5, 2.1, 0.0, 0.01, 0.01);
  } catch (const Error& e) {
    rejected = e.kind() == ErrorKind::admissibility;
    why = std::string(to_string(e.kind())) + " error";
  }
  o.add("(5, 2.1, 0) rejected", rejected, why);
  const double elapsed = clock.seconds();
  o.add("runtime", elapsed < 1.0, fmt(elapsed) + " s < 1 s");
  return o;
}

// ------------------------------------------------------------------ 6

Outcome criterion6() {
  Outcome o;
  const Stopwatch clock;
  const json n5 = json::parse(R"({
    "experiment": "dispersive",
    "grid": {"dimension": 5, "r_max": 96.0, "nodes": 1536},
    "data": {"profile": "bump", "width": 1.0},
    "audit": {"mode": "lorentz", "l1": 1.25, "l2": 2.5, "z": 1.0,
              "t_min": 1.0, "t_max": 64.0, "samples": 25, "window": [8.0, 64.0], "slope_tol": 0.1}
  })");
  json n3 = n5;
  n3["grid"]["dimension"] = 3;
  n3["audit"] = json::parse(R"({"mode": "lp", "p": 4.0, "t_min": 1.0, "t_max": 64.0, "samples": 25,
                                "window": [8.0, 64.0], "slope_tol": 0.1})");
  for (const auto& [label, cfg] : {std::pair{"n=5 (5/4, 5/2), z=1", n5}, std::pair{"n=3 L^p-L^p' p=4", n3}}) {
    const RunResult r = run_json("dispersive", cfg);
    const double slope = num(r.summary.value("fitted_slope", json()));
    const double expected = num(r.summary.value("expected_slope", json()));
    o.add(std::string("slope ") + label, r.exit_code == kExitPass,
          "fitted " + fmt(slope) + ", expected " + fmt(expected) + " +- 0.1");
  }
  const double elapsed = clock.seconds();
  o.add("runtime", elapsed < 60.0, fmt(elapsed) + " s < 60 s");
  return o;
}

// ------------------------------------------------------------------ 7

Outcome criterion7() {
  Outcome o;
  const ModelParams p = derive_params(5, 3.0, 0.0, 0.01, 0.01);
  const auto g = make_grid(5, 160.0, 2560);
  const auto plan = build_plan(g);
  std::vector<double> normalized;
  std::ostringstream norm_detail;
  for (const char* name : {"bump", "gaussian", "two_bump"}) {
    ProfileSpec spec;
    spec.name = name;
    const RadialField f = sample_profile(spec, g);
    const EstimateReport rep = audit_yamazaki(*plan, p.r0_dual, p.s_dual, f, 64.0);
    normalized.push_back(rep.values.at("normalized"));
    norm_detail << name << " " << fmt(normalized.back()) << "; ";
    if (normalized.size() == 1) {
      const double tail = rep.values.at("tail_indicator");
      o.add("tail I(2T)/I(T) - 1 at T=64, compact bump", tail <= 0.05,
            fmt(tail) + " <= 0.05 with (d1,d2) = (" + fmt(p.r0_dual) + "," + fmt(p.s_dual) + ")");
    }
  }
  const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  const double spread = *hi / *lo;
  o.add("I(T)/||f||_(d1,1) across profiles", spread < 3.0, norm_detail.str() + "max/min " + fmt(spread) + " < 3");
  return o;
}

// ------------------------------------------------------------------ 8

Outcome criterion8() {
  Outcome o;
  const Stopwatch clock;
  const RunResult r = run_json("solve", base_solve_config());
  const json& d = r.report.at("diagnostics");
  double max_ratio = 0.0;
  for (const auto& x : d.at("contraction_ratios")) max_ratio = std::max(max_ratio, x.get<double>());
  double max_sup = 0.0;
  for (const auto& x : d.at("sup_weak_norms")) max_sup = std::max(max_sup, x.get<double>());
  const double elapsed = clock.seconds();
  o.add("contraction ratios from iteration 2", d.at("converged").get<bool>() && max_ratio < 0.5,
        "max " + fmt(max_ratio) + " < 0.5 over " + std::to_string(d.at("iterations").get<int>()) + " iterations");
  const double res = d.at("residual").get<double>();
  o.add("residual", res < 1e-6, fmt(res) + " < 1e-6");
  o.add("iterates stay in the ball of radius 0.2", d.at("ball_invariant").get<bool>() && max_sup <= 0.2,
        "max sup weak norm " + fmt(max_sup));
  o.add("runtime", elapsed < 60.0, fmt(elapsed) + " s < 60 s");

  const auto g = make_grid(5, 16.0, 256);
  const auto plan = build_plan(g);
  const auto times = make_time_grid(8.0, 64);
  const ModelParams params = derive_params(5, 3.0, 0.5, 0.01, 0.01);
  const InitialData zero{RadialField(g), RadialField(g)};
  const Solution z = picard_solve(*plan, make_model(params, g), zero, times);
  const bool all_zero = std::all_of(z.u.fields.begin(), z.u.fields.end(), [](const RadialField& f) { return f.is_zero(); });
  o.add("zero data gives the zero solution", all_zero, all_zero ? "identically zero" : "nonzero entries");

  const InitialData data{sample([](double r) { return 0.05 * std::exp(-r * r); }, g), RadialField(g)};
  const Solution free = picard_solve(*plan, make_model(derive_params(5, 3.0, 0.5, 0.0, 0.0), g), data, times);
  o.add("c1 = c2 = 0 converges in one iteration", free.diagnostics.converged && free.diagnostics.iterations == 1,
        std::to_string(free.diagnostics.iterations) + " iteration(s)");
  return o;
}

// ------------------------------------------------------------------ 9

Outcome criterion9() {
  Outcome o;
  json cfg = base_solve_config();
  cfg["experiment"] = "scatter";
  cfg["audit"] = json::parse(R"({"ball_radius": 0.2, "h": 0.5, "defect_tol": 1e-4, "decay_ratio": 0.1,
                                  "exponent_tol": 0.05, "check_doubling": true})");
  const RunResult r = run_json("scatter", cfg);
  if (r.report.contains("error")) {
    o.add("scatter run", false, r.report.at("error").at("message").get<std::string>());
    return o;
  }
  const json& d = r.report.at("defect");
  const double gap = d.at("max_direct_tail_gap").get<double>();
  o.add("defect_direct vs defect_tail at all nodes", gap <= 1e-4, fmt(gap) + " <= 1e-4");
  const double decay = d.at("half_over_first").get<double>();
  o.add("defect(t_max/2) / defect(1)", decay <= 0.1, fmt(decay) + " <= 0.1");
  const double exponent = num(r.summary.value("exponent", json()));
  o.add("improved-decay exponent, h = 0.5", exponent <= -0.4, fmt(exponent) + " <= -0.4");
  const json& dbl = r.report.at("doubling");
  const double doubled = num(r.summary.value("exponent_doubled", json()));
  o.add("exponent stable under T-doubling", dbl.at("stable").get<bool>(),
        fmt(exponent) + " at T=8, " + fmt(doubled) + " at T=16, change " + fmt(num(dbl.value("exponent_change", json()))) +
            " <= 0.05");
  return o;
}

// ----------------------------------------------------------------- 10

json stability_config(double t_max, std::size_t time_nodes, double r_max, std::size_t nodes) {
  json cfg = base_solve_config();
  cfg["experiment"] = "stability";
  cfg["grid"] = {{"dimension", 5}, {"r_max", r_max}, {"nodes", nodes}};
  cfg["time"] = {{"t_max", t_max}, {"time_nodes", time_nodes}};
  cfg["audit"] = {{"h", 0.5}};
  cfg["data_tilde"] = "zero";
  return cfg;
}

Outcome criterion10() {
  Outcome o;
  {
    const RunResult r = run_json("stability", stability_config(16.0, 128, 32.0, 512));
    const json& lin = r.report.at("linear");
    const json& dif = r.report.at("difference");
    const double rl = num(lin.at("final")) / num(lin.at("initial"));
    const double rd = num(dif.at("final")) / num(dif.at("initial"));
    const bool iff = r.report.at("iff_holds").get<bool>();
    o.add("(a) zero comparison, t_max = 16", iff && rl <= 0.1 && rd <= 0.1,
          "final/initial " + fmt(rl) + " (linear), " + fmt(rd) + " (difference), verdicts " +
              lin.at("verdict").get<std::string>() + "/" + dif.at("verdict").get<std::string>() +
              ", iff " + (iff ? "holds" : "fails"));
  }
  {
    json cfg = stability_config(8.0, 64, 16.0, 256);
    cfg["data_tilde"] = "same";
    const RunResult r = run_json("stability", cfg);
    const std::string vl = r.report.at("linear").at("verdict"), vd = r.report.at("difference").at("verdict");
    const bool iff = r.report.at("iff_holds").get<bool>();
    o.add("(b) identical data", iff && vl == "zero" && vd == "zero",
          "verdicts " + vl + "/" + vd + ", iff " + (iff ? "holds" : "fails"));
  }
  {
    json cfg = stability_config(8.0, 64, 16.0, 256);
    cfg["audit"]["check_doubling"] = true;
    cfg["audit"]["constant_tol"] = 0.1;
    const RunResult r = run_json("stability", cfg);
    const json& dbl = r.report.at("doubling");
    const double a = num(r.summary.at("L_tilde")), b = num(dbl.at("L_tilde"));
    o.add("(c) L_tilde under t_max doubling", dbl.at("stable").get<bool>(),
          fmt(a) + " at T=8, " + fmt(b) + " at T=16, relative change " + fmt(num(dbl.at("relative_change"))) +
              " <= 0.1");
  }
  return o;
}

// ----------------------------------------------------------------- 11

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Writes the artifacts of one run into dir and returns name -> bytes.
std::vector<std::pair<std::string, std::string>> artifacts(const std::string& command, const json& cfg,
                                                           const std::filesystem::path& dir, unsigned workers) {
  const ExperimentConfig c = parse_config(cfg);
  OutputConfig out;
  out.dir = dir.string();
  write_artifacts(run(command, c, workers), out, command);
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files.emplace_back(e.path().filename().string(), read_file(e.path()));
  std::sort(files.begin(), files.end());
  return files;
}

Outcome criterion11() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("wavelab_acceptance_" + std::to_string(std::random_device{}()));

  json norms = json::parse(R"({
    "experiment": "norms",
    "grid": {"dimension": 5, "r_max": 4.0, "nodes": 1024},
    "audit": {"norms": [{"id": "indicator_weak", "field": {"profile": "indicator", "amplitude": 2.0, "width": 1.0},
                         "p": 2.5, "z": "inf"}],
              "random_fields": 8},
    "seed": 7
  })");
  json scatter = base_solve_config();
  scatter["experiment"] = "scatter";
  scatter["audit"] = {{"ball_radius", 0.2}, {"h", 0.5}};
  json sweep = json::parse(R"({"experiment": "sweep", "grid": {"dimension": 5}, "model": {"b": 0.0},
                               "sweep": {"experiment": "params", "ranges": {"q": [3.2, 2.8, 3.0, 2.9]}}})");
  json dispersive = json::parse(R"({"experiment": "dispersive", "grid": {"dimension": 3, "r_max": 48.0, "nodes": 512},
                                    "data": {"profile": "bump"},
                                    "audit": {"mode": "lp", "p": 4.0, "t_min": 1.0, "t_max": 32.0, "samples": 9}})");

  struct Case {
    std::string label, command;
    json cfg;
    unsigned workers_first, workers_second;
  };
  const std::vector<Case> cases = {
      {"params", "params", json::parse(R"({"model": {"q": 3.0, "b": 0.5}})"), 1, 1},
      {"norms, seed 7", "norms", norms, 1, 1},
      {"dispersive", "dispersive", dispersive, 1, 1},
      {"solve", "solve", base_solve_config(), 1, 1},
      {"scatter", "scatter", scatter, 1, 1},
      {"stability", "stability", stability_config(8.0, 64, 16.0, 256), 1, 1},
      {"sweep, 1 vs 4 workers", "sweep", sweep, 1, 4},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Case& c = cases[k];
    std::string detail;
    bool same = false;
    try {
      const fs::path a = root / (std::to_string(k) + "a"), b = root / (std::to_string(k) + "b");
      const auto first = artifacts(c.command, c.cfg, a, c.workers_first);
      const auto second = artifacts(c.command, c.cfg, b, c.workers_second);
      same = first == second;
      std::size_t bytes = 0;
      for (const auto& f : first) bytes += f.second.size();
      detail = std::to_string(first.size()) + " file(s), " + std::to_string(bytes) + " bytes" +
               (same ? ", identical" : ", differ");
    } catch (const std::exception& e) {
      detail = e.what();
    }
    o.add(c.label, same, detail);
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> body;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wavelab acceptance suite"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "propagator vs three-dimensional closed form", criterion1},
      {2, "spectral energy invariant and addition identity", criterion2},
      {3, "Lorentz norm anchors", criterion3},
      {4, "Holder audit", criterion4},
      {5, "exponent geometry", criterion5},
      {6, "dispersive slopes", criterion6},
      {7, "time-integrated estimate", criterion7},
      {8, "Picard construction", criterion8},
      {9, "scattering", criterion9},
      {10, "stability equivalence", criterion10},
      {11, "determinism", criterion11},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    Outcome out;
    const Stopwatch clock;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out.add("unexpected exception", false, e.what());
    }
    const bool pass = out.pass();
    all = all && pass;
    std::printf("%s criterion %d: %s (%.2f s)\n", pass ? "PASS" : "FAIL", c.id, c.title, clock.seconds());
    for (const auto& ch : out.checks)
      std::printf("    [%s] %s: %s\n", ch.pass ? "ok" : "FAIL", ch.name.c_str(), ch.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
