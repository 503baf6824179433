#include <doctest.h>

#include <cmath>

#include "wavelab/error.hpp"
#include "wavelab/propagator.hpp"

using namespace wavelab;

namespace {
double max_rel(const RadialField& a, const RadialField& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

RadialField gaussian(const GridPtr& g) { return sample([](double r) { return std::exp(-r * r); }, g); }
}  // namespace

TEST_CASE("radial kernel") {
  for (int n : {3, 5, 7, 9}) {
    CHECK(radial_kernel(n, 0.0) == 1.0);
    // Series and closed forms agree across the switch.
    CHECK(radial_kernel(n, 0.999999) == doctest::Approx(radial_kernel(n, 1.000001)).epsilon(1e-5));
  }
  CHECK(radial_kernel(3, 2.0) == doctest::Approx(std::sin(2.0) / 2.0));
  CHECK(radial_kernel(5, 2.0) == doctest::Approx(3.0 * (std::sin(2.0) - 2.0 * std::cos(2.0)) / 8.0));
}

TEST_CASE("build_plan round trip") {
  const auto g = make_grid(3, 20.0, 512);
  const auto plan = build_plan(g);
  CHECK(plan->round_trip_error() <= 1e-8);
  const RadialField zero(g);
  CHECK(plan->inverse(plan->forward(zero)).is_zero());
  // With rho_max fixed the alias period is 4 r_max M / N; at M = N/4 the
  // probe's image lands back on the grid.
  CHECK_THROWS_AS(build_plan(g, 128, default_rho_max(*g)), Error);
  const auto other = make_grid(3, 10.0, 512);
  CHECK_THROWS_AS(plan->forward(RadialField(other)), Error);
}

TEST_CASE("wave group basics") {
  const auto g = make_grid(3, 20.0, 1024);
  const auto plan = build_plan(g);
  const RadialField h = gaussian(g);
  CHECK(propagate_W(*plan, 0.0, h).max_abs() <= 1e-15);
  CHECK(max_rel(propagate_Wdot(*plan, 0.0, h), h) <= 1e-8);
  CHECK(max_rel(propagate_W(*plan, 1.3, h * 2.5), propagate_W(*plan, 1.3, h) * 2.5) <= 1e-14);
  CHECK(max_rel(propagate_W(*plan, -1.3, h), propagate_W(*plan, 1.3, h) * -1.0) <= 1e-14);
  CHECK(max_rel(propagate_Wdot(*plan, -1.3, h), propagate_Wdot(*plan, 1.3, h)) <= 1e-14);
}

TEST_CASE("three-dimensional oracle") {
  const OracleProfile u1{[](double r) { return std::exp(-r * r); },
                         [](double s) { return 0.5 * (1.0 - std::exp(-s * s)); }};
  const double expect = (1.0 - std::exp(-4.0)) / 4.0;
  CHECK(oracle_3d(1.0, OracleProfile::zero(), u1, 1.0) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(oracle_3d(1.0, OracleProfile::zero(), u1, 1.0) == doctest::Approx(0.2454211).epsilon(1e-6));
  // Without the antiderivative the moment integral is done numerically.
  const OracleProfile numeric{u1.value, {}};
  CHECK(oracle_3d(1.0, OracleProfile::zero(), numeric, 1.0) == doctest::Approx(expect).epsilon(1e-10));
  const OracleProfile u0{[](double r) { return std::exp(-r * r); }, {}};
  CHECK(oracle_3d(0.0, u0, OracleProfile::zero(), 0.7) == doctest::Approx(std::exp(-0.49)));
  CHECK(std::isfinite(oracle_3d(2.0, u0, u1, 1e-9)));
}

TEST_CASE("W and Wdot against the closed form") {
  const auto g = make_grid(3, 20.0, 1024);
  const auto plan = build_plan(g);
  const RadialField h = gaussian(g);
  const OracleProfile g1{[](double r) { return std::exp(-r * r); },
                         [](double s) { return 0.5 * (1.0 - std::exp(-s * s)); }};
  for (double t : {0.5, 1.0, 2.0}) {
    const RadialField w = propagate_W(*plan, t, h);
    const RadialField wd = propagate_Wdot(*plan, t, h);
    double err_w = 0.0, err_wd = 0.0, scale_w = 0.0, scale_wd = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->nodes()[i];
      const double ow = oracle_3d(t, OracleProfile::zero(), g1, r);
      const double owd = oracle_3d(t, g1, OracleProfile::zero(), r);
      err_w = std::max(err_w, std::abs(w[i] - ow));
      err_wd = std::max(err_wd, std::abs(wd[i] - owd));
      scale_w = std::max(scale_w, std::abs(ow));
      scale_wd = std::max(scale_wd, std::abs(owd));
    }
    CHECK(err_w / scale_w <= 1e-6);
    CHECK(err_wd / scale_wd <= 1e-6);
  }
}

TEST_CASE("energy invariant and addition identity") {
  const auto g = make_grid(5, 20.0, 512);
  const auto plan = build_plan(g);
  const RadialField u0 = gaussian(g);
  const RadialField u1 = sample([](double r) { return r * r * std::exp(-r * r); }, g);
  const Eigen::VectorXd e0 = spectral_energy(*plan, 0.0, u0, u1);
  for (double t : {0.5, 3.0, 10.0}) {
    const Eigen::VectorXd et = spectral_energy(*plan, t, u0, u1);
    CHECK(((et - e0).cwiseAbs().array() <= 1e-12 * e0.cwiseAbs().maxCoeff()).all());
  }
  for (double t : {0.5, 1.0, 2.0})
    for (double s : {0.5, 1.0, 2.0}) {
      const RadialField lhs = propagate_W(*plan, t + s, u0);
      const RadialField rhs = propagate_Wdot(*plan, s, propagate_W(*plan, t, u0)) +
                              propagate_W(*plan, s, propagate_Wdot(*plan, t, u0));
      CHECK(max_rel(rhs, lhs) <= 1e-8);
    }
}

TEST_CASE("free evolution matches single propagations") {
  const auto g = make_grid(5, 16.0, 128);
  const auto plan = build_plan(g);
  const RadialField u0 = gaussian(g);
  const RadialField u1 = u0 * 0.5;
  std::vector<double> times;
  for (int k = 0; k < 70; ++k) times.push_back(0.1 * k);
  const auto traj = free_evolution(*plan, times, u0, u1);
  for (std::size_t k : {0u, 13u, 64u, 69u}) {
    const RadialField direct = propagate_Wdot(*plan, times[k], u0) + propagate_W(*plan, times[k], u1);
    CHECK(max_rel(traj[k], direct) <= 1e-13);
  }
}

TEST_CASE("dispersive audit flags and slopes") {
  const auto g = make_grid(3, 96.0, 1536);
  const auto plan = build_plan(g);
  const RadialField h = sample([](double r) { return r < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - r * r)) : 0.0; }, g);
  std::vector<double> times;
  for (int k = 0; k <= 24; ++k) times.push_back(std::pow(64.0, k / 24.0));
  const auto lp = audit_dispersive_lp(*plan, 4.0, h, times, std::make_pair(8.0, 64.0));
  REQUIRE(lp.fitted_slope);
  CHECK(*lp.fitted_slope == doctest::Approx(-0.5).epsilon(0.2));
  CHECK(lp.has_flag("lp_dual"));
  const auto same = audit_dispersive(*plan, 2.0, 2.0, 2.0, h, times);
  CHECK(same.has_flag("degenerate_pair"));
  CHECK(same.window_lo == doctest::Approx(6.4));
}

TEST_CASE("Yamazaki audit") {
  const auto g = make_grid(5, 40.0, 640);
  const auto plan = build_plan(g);
  const auto zero = audit_yamazaki(*plan, 1.25, 2.5, RadialField(g), 8.0);
  CHECK(zero.values.at("I_T") == 0.0);
  const RadialField f = gaussian(g);
  const auto rep = audit_yamazaki(*plan, 1.25, 2.5, f, 8.0);
  CHECK(rep.values.at("symmetry_error") <= 1e-10);
  CHECK(std::abs(rep.values.at("weight_exponent")) <= 1e-12);
  CHECK(rep.values.at("I_T") > 0.0);
  CHECK_THROWS_AS(audit_yamazaki(*plan, 3.0, 1.5, f, 8.0), Error);
}
