#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace wavelab {

// Volume of the unit ball and surface area of the unit sphere in R^n.
double unit_ball_volume(int n);
double unit_sphere_area(int n);

// Midpoint-uniform discretisation of [0, r_max] for radial functions on R^n.
// Cell i is the annulus a_{i-1} < |x| <= a_i; its measure is integrated
// exactly, so unions of whole cells have exact volume.
class RadialGrid {
 public:
  RadialGrid(int dimension, double r_max, std::size_t cells);

  int dimension() const noexcept { return dimension_; }
  double r_max() const noexcept { return r_max_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return r_max_ / static_cast<double>(nodes_.size()); }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> cell_bounds() const noexcept { return bounds_; }
  std::span<const double> cell_measures() const noexcept { return measures_; }
  double node(std::size_t i) const { return nodes_.at(i); }
  double measure(std::size_t i) const { return measures_.at(i); }

  // Volume of the truncation ball, omega_n * r_max^n.
  double total_measure() const noexcept;

  bool same_layout(const RadialGrid& other) const noexcept;

 private:
  int dimension_;
  double r_max_;
  std::vector<double> nodes_;
  std::vector<double> bounds_;
  std::vector<double> measures_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

// Throws invalid_dimension for even n or n < 3, invalid_argument for
// r_max <= 0 or cells < 2 (a single cell is accepted when allow_single_cell).
GridPtr make_grid(int dimension, double r_max, std::size_t cells, bool allow_single_cell = false);

// Samples u(r_i) of a radial function. Fields on different grid layouts are
// never combined; every binary operation checks this.
class RadialField {
 public:
  explicit RadialField(GridPtr grid);
  RadialField(GridPtr grid, std::vector<double> values);

  const GridPtr& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double max_abs() const noexcept;
  bool is_zero() const noexcept;
  bool all_finite() const noexcept;

  // Throws grid_mismatch when the layouts differ.
  void require_same_grid(const RadialField& other, const char* module) const;

  RadialField& operator+=(const RadialField& rhs);
  RadialField& operator-=(const RadialField& rhs);
  RadialField& operator*=(double s) noexcept;

  friend RadialField operator+(RadialField lhs, const RadialField& rhs) { return lhs += rhs; }
  friend RadialField operator-(RadialField lhs, const RadialField& rhs) { return lhs -= rhs; }
  friend RadialField operator*(RadialField lhs, double s) { return lhs *= s; }
  friend RadialField operator*(double s, RadialField rhs) { return rhs *= s; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

// Pointwise product f*g.
RadialField multiply(const RadialField& f, const RadialField& g);

// Sum of f(r_i) * mu_i.
double integrate(const RadialField& f);

using RadialFunction = std::function<double(double)>;

// Throws a sampling error naming the first node where fn is not finite.
RadialField sample(const RadialFunction& fn, const GridPtr& grid);

}  // namespace wavelab
