#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavelab/error.hpp"
#include "wavelab/radial_grid.hpp"

using namespace wavelab;
using std::numbers::pi;

TEST_CASE("unit ball volumes") {
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-15));
  CHECK(unit_ball_volume(5) == doctest::Approx(8.0 * pi * pi / 15.0).epsilon(1e-15));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * pi).epsilon(1e-15));
}

TEST_CASE("make_grid single cell") {
  const auto g3 = make_grid(3, 1.0, 1, true);
  CHECK(g3->cell_measures()[0] == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-14));
  const auto g5 = make_grid(5, 1.0, 1, true);
  CHECK(g5->cell_measures()[0] == doctest::Approx(5.2638).epsilon(1e-4));
  CHECK_THROWS_AS(make_grid(3, 1.0, 1), Error);
}

TEST_CASE("make_grid rejects bad input") {
  const auto kind = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::config;
  };
  CHECK(kind([] { make_grid(4, 1.0, 8); }) == ErrorKind::invalid_dimension);
  CHECK(kind([] { make_grid(2, 1.0, 8); }) == ErrorKind::invalid_dimension);
  CHECK_THROWS_AS(make_grid(3, 0.0, 8), Error);
  CHECK_THROWS_AS(make_grid(3, -1.0, 8), Error);
}

TEST_CASE("nodes are cell midpoints away from the origin") {
  const auto g = make_grid(3, 10.0, 4);
  const double expect[] = {1.25, 3.75, 6.25, 8.75};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(g->nodes()[i] == doctest::Approx(expect[i]));
    CHECK(g->nodes()[i] > g->cell_bounds()[i]);
    CHECK(g->nodes()[i] < g->cell_bounds()[i + 1]);
  }
  const RadialField f = sample([](double r) { return std::exp(-r * r); }, g);
  for (std::size_t i = 0; i < 4; ++i) CHECK(f[i] == std::exp(-expect[i] * expect[i]));
}

TEST_CASE("measure consistency for all sizes") {
  for (int n : {3, 5, 7, 9})
    for (std::size_t N : {2u, 3u, 17u, 256u, 4096u}) {
      const auto g = make_grid(n, 2.5, N);
      const double exact = unit_ball_volume(n) * std::pow(2.5, n);
      CHECK(std::abs(g->total_measure() - exact) <= 1e-12 * exact);
      CHECK(std::abs(integrate(RadialField(g, std::vector<double>(N, 1.0))) - exact) <= 1e-12 * exact);
    }
}

TEST_CASE("integrate examples") {
  const auto g = make_grid(3, 2.0, 64);
  CHECK(integrate(RadialField(g, std::vector<double>(64, 1.0))) == doctest::Approx(4.0 * pi * 8.0 / 3.0));
  CHECK(integrate(RadialField(g)) == 0.0);
  const auto fine = make_grid(3, 1.0, 2048);
  CHECK(integrate(sample([](double r) { return r; }, fine)) == doctest::Approx(pi).epsilon(1e-3));
}

TEST_CASE("midpoint refinement is second order") {
  const auto f = [](double r) { return r < 1.0 ? std::pow(1.0 - r * r, 4) : 0.0; };
  double prev_err = 0.0;
  const double exact = [&] {
    return integrate(sample(f, make_grid(5, 1.0, 1 << 14)));
  }();
  for (std::size_t N : {32u, 64u, 128u}) {
    const double err = std::abs(integrate(sample(f, make_grid(5, 1.0, N))) - exact);
    if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.1));
    prev_err = err;
  }
}

TEST_CASE("sampling") {
  const auto g = make_grid(5, 1.0, 8);
  CHECK(sample([](double) { return 0.0; }, g).is_zero());
  const RadialField inv = sample([](double r) { return 1.0 / (r * r); }, g);
  CHECK(inv.all_finite());
  CHECK_THROWS_AS(sample([](double r) { return r < 0.5 ? NAN : 1.0; }, g), Error);
}

TEST_CASE("field arithmetic checks the grid") {
  const auto a = make_grid(3, 1.0, 4);
  const auto b = make_grid(3, 2.0, 4);
  RadialField f(a, {1, 2, 3, 4});
  const RadialField g(b, {1, 1, 1, 1});
  CHECK_THROWS_AS(f += g, Error);
  const RadialField h = f * 2.0 - f;
  CHECK(h[3] == 4.0);
  CHECK(multiply(f, f)[2] == 9.0);
  CHECK_THROWS_AS(RadialField(a, {1.0, 2.0}), Error);
}
