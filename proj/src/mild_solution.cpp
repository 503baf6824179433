#include "wavelab/mild_solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "wavelab/error.hpp"
#include "wavelab/lorentz.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "mild_solution";

void require_plan_grid(const SpectralPlan& plan, const RadialField& f) {
  if (!f.grid()->same_layout(*plan.grid())) {
    throw Error(ErrorKind::grid_mismatch, kModule, "field does not live on the plan grid");
  }
}
}  // namespace

Nonlinearity Nonlinearity::power(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw Error(ErrorKind::invalid_parameter, kModule, "power q must exceed 1");
  Nonlinearity f;
  f.q = q;
  f.name = "power";
  f.evaluate = [q](double u) { return u == 0.0 ? 0.0 : std::pow(std::abs(u), q - 1.0) * u; };
  return f;
}

LipschitzSpotCheck spot_check(const Nonlinearity& f, std::uint64_t seed, std::size_t pairs, double amplitude) {
  LipschitzSpotCheck out;
  out.pairs = pairs;
  out.zero_fixed = f(0.0) == 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (std::size_t k = 0; k < pairs; ++k) {
    const double u = dist(rng);
    const double v = dist(rng);
    const double scale = (std::pow(std::abs(u), f.q - 1.0) + std::pow(std::abs(v), f.q - 1.0)) * std::abs(u - v);
    if (scale <= 0.0) continue;
    out.constant = std::max(out.constant, std::abs(f(u) - f(v)) / scale);
  }
  return out;
}

PotentialFields potential_fields(const ModelParams& params, const GridPtr& grid) {
  const auto r = grid->nodes();
  std::vector<double> v1(r.size()), v2(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw Error(ErrorKind::precondition, kModule, "grid must exclude the origin");
    v1[i] = params.c1 / (r[i] * r[i]);
    v2[i] = params.b == 0.0 ? params.c2 : params.c2 / std::pow(r[i], params.b);
  }
  PotentialFields out{RadialField(grid, std::move(v1)), RadialField(grid, std::move(v2))};
  const int n = grid->dimension();
  out.v1_norm = weak_norm(out.v1, n / 2.0);
  out.v2_constant = params.b == 0.0 && params.c2 != 0.0;
  out.v2_norm = params.b == 0.0 ? out.v2.max_abs() : weak_norm(out.v2, n / params.b);
  return out;
}

Model make_model(const ModelParams& params, const GridPtr& grid, std::optional<Nonlinearity> nonlinearity) {
  Model m{params, nonlinearity ? std::move(*nonlinearity) : Nonlinearity::power(params.q),
          potential_fields(params, grid)};
  return m;
}

Trajectory linear_evolution(const SpectralPlan& plan, const InitialData& data, const std::vector<double>& times) {
  require_plan_grid(plan, data.u0);
  require_plan_grid(plan, data.u1);
  return Trajectory(times, free_evolution(plan, times, data.u0, data.u1));
}

Trajectory source_of(const Model& model, const Trajectory& v) {
  const auto& v1 = model.potentials.v1;
  const auto& v2 = model.potentials.v2;
  std::vector<RadialField> out;
  out.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const RadialField& u = v.fields[j];
    u.require_same_grid(v1, kModule);
    RadialField f(u.grid());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = u[i];
      const double value = -v1[i] * x + (v2[i] == 0.0 ? 0.0 : v2[i] * model.nonlinearity(x));
      if (!std::isfinite(value)) {
        std::ostringstream msg;
        msg << "non-finite source at t = " << v.times[j] << ", r = " << u.grid()->nodes()[i];
        throw Error(ErrorKind::overflow, kModule, msg.str());
      }
      f[i] = value;
    }
    out.push_back(std::move(f));
  }
  return Trajectory(v.times, std::move(out));
}

RadialField duhamel_forward(const SpectralPlan& plan, const Trajectory& source, double t) {
  const std::size_t j = source.index_of(t);
  require_plan_grid(plan, source.fields.front());
  return DuhamelIntegrator(plan, source).forward(j);
}

Trajectory phi_map(const SpectralPlan& plan, const Model& model, const InitialData& data, const Trajectory& v) {
  require_plan_grid(plan, v.fields.front());
  Trajectory out = linear_evolution(plan, data, v.times);
  const Trajectory source = source_of(model, v);
  const bool vanishes = std::all_of(source.fields.begin(), source.fields.end(),
                                    [](const RadialField& f) { return f.is_zero(); });
  if (vanishes) return out;
  const auto duhamel = DuhamelIntegrator(plan, source).forward_all();
  for (std::size_t j = 0; j < out.size(); ++j) out.fields[j] += duhamel[j];
  return out;
}

double residual(const SpectralPlan& plan, const Model& model, const InitialData& data, const Trajectory& u) {
  return sup_weak_norm(u - phi_map(plan, model, data, u), model.params.r0);
}

Solution picard_solve(const SpectralPlan& plan, const Model& model, const InitialData& data,
                      const std::vector<double>& times, const SolveOptions& options) {
  if (!(options.tol > 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "tolerance must be positive");
  if (options.max_iter < 1) throw Error(ErrorKind::invalid_argument, kModule, "max_iter must be at least 1");
  const double r0 = model.params.r0;
  SolveDiagnostics diag;

  Trajectory linear = linear_evolution(plan, data, times);
  diag.linear_sup_norm = sup_weak_norm(linear, r0);
  diag.ball_radius = options.ball_radius.value_or(2.0 * diag.linear_sup_norm);
  if (diag.linear_sup_norm > 0.0 && !(diag.ball_radius > diag.linear_sup_norm)) {
    std::ostringstream msg;
    msg << "ball radius " << diag.ball_radius << " does not exceed the linear evolution's sup weak norm "
        << diag.linear_sup_norm << "; enlarge the ball or shrink the data";
    throw Error(ErrorKind::precondition, kModule, msg.str());
  }

  const bool zero_data = data.u0.is_zero() && data.u1.is_zero();
  if (zero_data && !options.initial_iterate) {
    diag.sup_weak_norms = {0.0};
    diag.converged = true;
    return {std::move(linear), std::move(diag)};
  }

  Trajectory v = options.initial_iterate ? *options.initial_iterate : linear;
  if (v.times.size() != times.size()) {
    throw Error(ErrorKind::invalid_argument, kModule, "initial iterate does not match the time grid");
  }
  const auto track = [&](const Trajectory& it) {
    const double norm = sup_weak_norm(it, r0);
    diag.sup_weak_norms.push_back(norm);
    if (norm > diag.ball_radius) diag.ball_invariant = false;
  };
  track(v);

  int growing = 0;
  for (int k = 0; k < options.max_iter; ++k) {
    Trajectory next = phi_map(plan, model, data, v);
    const double inc = sup_weak_norm(next - v, r0);
    diag.increments.push_back(inc);
    if (diag.increments.size() >= 2) {
      const double prev = diag.increments[diag.increments.size() - 2];
      const double ratio = prev > 0.0 ? inc / prev : 0.0;
      diag.contraction_ratios.push_back(ratio);
      growing = ratio >= 1.0 ? growing + 1 : 0;
    }
    v = std::move(next);
    track(v);
    diag.iterations = k + 1;
    if (inc <= options.tol) {
      diag.converged = true;
      break;
    }
    if (growing >= 3) {
      std::ostringstream msg;
      msg << "Picard iteration is not contracting (ratio >= 1 for 3 consecutive steps, last increment " << inc
          << "); try smaller c1, c2 or smaller data";
      throw Error(ErrorKind::non_contraction, kModule, msg.str());
    }
  }
  if (!diag.converged) {
    std::ostringstream msg;
    msg << "no convergence after " << options.max_iter << " iterations (last increment "
        << diag.increments.back() << ", tolerance " << options.tol << ")";
    throw Error(ErrorKind::no_convergence, kModule, msg.str());
  }
  diag.residual = residual(plan, model, data, v);
  return {std::move(v), std::move(diag)};
}

}  // namespace wavelab
