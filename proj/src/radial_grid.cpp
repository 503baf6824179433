#include "wavelab/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wavelab/error.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "radial_grid";
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

RadialGrid::RadialGrid(int dimension, double r_max, std::size_t cells)
    : dimension_(dimension), r_max_(r_max), nodes_(cells), bounds_(cells + 1), measures_(cells) {
  const double omega = unit_ball_volume(dimension);
  const double dr = r_max / static_cast<double>(cells);
  bounds_[0] = 0.0;
  for (std::size_t i = 1; i <= cells; ++i) bounds_[i] = (i == cells) ? r_max : dr * static_cast<double>(i);
  // Cumulative ball volumes telescope, so the measures sum to omega*r_max^n.
  double inner = 0.0;
  for (std::size_t i = 0; i < cells; ++i) {
    nodes_[i] = 0.5 * (bounds_[i] + bounds_[i + 1]);
    const double outer = omega * std::pow(bounds_[i + 1], dimension);
    measures_[i] = outer - inner;
    inner = outer;
  }
}

double RadialGrid::total_measure() const noexcept {
  return unit_ball_volume(dimension_) * std::pow(r_max_, dimension_);
}

bool RadialGrid::same_layout(const RadialGrid& other) const noexcept {
  return dimension_ == other.dimension_ && nodes_.size() == other.nodes_.size() && r_max_ == other.r_max_;
}

GridPtr make_grid(int dimension, double r_max, std::size_t cells, bool allow_single_cell) {
  if (dimension < 3 || dimension % 2 == 0) {
    std::ostringstream msg;
    msg << "dimension must be odd and >= 3, got " << dimension;
    throw Error(ErrorKind::invalid_dimension, kModule, msg.str());
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    std::ostringstream msg;
    msg << "r_max must be positive and finite, got " << r_max;
    throw Error(ErrorKind::invalid_argument, kModule, msg.str());
  }
  if (cells < (allow_single_cell ? 1u : 2u)) {
    std::ostringstream msg;
    msg << "need at least " << (allow_single_cell ? 1 : 2) << " cells, got " << cells;
    throw Error(ErrorKind::invalid_argument, kModule, msg.str());
  }
  return std::make_shared<const RadialGrid>(dimension, r_max, cells);
}

RadialField::RadialField(GridPtr grid) : grid_(std::move(grid)), values_(grid_->size(), 0.0) {}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size())
    throw Error(ErrorKind::grid_mismatch, kModule, "value count does not match grid size");
}

double RadialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool RadialField::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool RadialField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void RadialField::require_same_grid(const RadialField& other, const char* module) const {
  if (grid_ != other.grid_ && !grid_->same_layout(*other.grid_))
    throw Error(ErrorKind::grid_mismatch, module, "fields live on different radial grids");
}

RadialField& RadialField::operator+=(const RadialField& rhs) {
  require_same_grid(rhs, kModule);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& rhs) {
  require_same_grid(rhs, kModule);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

RadialField multiply(const RadialField& f, const RadialField& g) {
  f.require_same_grid(g, kModule);
  RadialField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * g[i];
  return out;
}

double integrate(const RadialField& f) {
  const auto mu = f.grid()->cell_measures();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += f[i] * mu[i];
  return sum;
}

RadialField sample(const RadialFunction& fn, const GridPtr& grid) {
  RadialField out(grid);
  const auto r = grid->nodes();
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = fn(r[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite value " << v << " at node " << i << " (r = " << r[i] << ")";
      throw Error(ErrorKind::sampling, kModule, msg.str());
    }
    out[i] = v;
  }
  return out;
}

}  // namespace wavelab
