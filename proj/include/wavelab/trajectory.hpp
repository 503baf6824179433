#pragma once

#include <cstddef>
#include <vector>

#include "wavelab/radial_grid.hpp"

namespace wavelab {

// Uniform nodes 0, dt, ..., t_max (or -t_max, ..., t_max when symmetric),
// with dt = t_max / intervals.
std::vector<double> make_time_grid(double t_max, std::size_t intervals, bool symmetric = false);

// Fields sampled on a uniform time grid that contains t = 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<RadialField> fields;

  Trajectory() = default;
  Trajectory(std::vector<double> times, std::vector<RadialField> fields);

  std::size_t size() const noexcept { return times.size(); }
  const GridPtr& grid() const { return fields.front().grid(); }
  double step() const;
  std::size_t origin() const;
  // Throws invalid_argument when t is not a node (to 1e-9 of the step).
  std::size_t index_of(double t) const;
  double horizon() const { return times.back(); }
  bool symmetric() const { return times.front() < 0.0; }

  static Trajectory zeros(const GridPtr& grid, std::vector<double> times);
};

Trajectory operator-(const Trajectory& a, const Trajectory& b);

// sup over nodes of ||u(t)||_{(r0,inf)}.
double sup_weak_norm(const Trajectory& u, double r0);

}  // namespace wavelab
