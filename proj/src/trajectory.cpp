#include "wavelab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wavelab/error.hpp"
#include "wavelab/lorentz.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "mild_solution";
}

std::vector<double> make_time_grid(double t_max, std::size_t intervals, bool symmetric) {
  if (!(t_max > 0.0) || intervals == 0)
    throw Error(ErrorKind::invalid_argument, kModule, "time grid needs t_max > 0 and at least one interval");
  const double dt = t_max / static_cast<double>(intervals);
  std::vector<double> times;
  const auto first = symmetric ? -static_cast<long>(intervals) : 0L;
  for (long j = first; j <= static_cast<long>(intervals); ++j) {
    const double t = (std::labs(j) == static_cast<long>(intervals)) ? (j < 0 ? -t_max : t_max) : dt * static_cast<double>(j);
    times.push_back(t);
  }
  return times;
}

Trajectory::Trajectory(std::vector<double> t, std::vector<RadialField> f) : times(std::move(t)), fields(std::move(f)) {
  if (times.size() != fields.size() || times.empty())
    throw Error(ErrorKind::invalid_argument, kModule, "trajectory needs one field per time node");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) throw Error(ErrorKind::invalid_argument, kModule, "times must increase strictly");
    fields[j].require_same_grid(fields[0], kModule);
  }
}

double Trajectory::step() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

std::size_t Trajectory::origin() const { return index_of(0.0); }

std::size_t Trajectory::index_of(double t) const {
  const double tol = 1e-9 * std::max(step(), 1.0);
  const auto it = std::lower_bound(times.begin(), times.end(), t - tol);
  if (it == times.end() || std::abs(*it - t) > tol) {
    std::ostringstream msg;
    msg << "t = " << t << " is not a node of the time grid";
    throw Error(ErrorKind::invalid_argument, kModule, msg.str());
  }
  return static_cast<std::size_t>(it - times.begin());
}

Trajectory Trajectory::zeros(const GridPtr& grid, std::vector<double> times) {
  std::vector<RadialField> fields(times.size(), RadialField(grid));
  return Trajectory(std::move(times), std::move(fields));
}

Trajectory operator-(const Trajectory& a, const Trajectory& b) {
  if (a.times != b.times) throw Error(ErrorKind::invalid_argument, kModule, "trajectories use different time grids");
  Trajectory out = a;
  for (std::size_t j = 0; j < out.size(); ++j) out.fields[j] -= b.fields[j];
  return out;
}

double sup_weak_norm(const Trajectory& u, double r0) {
  double sup = 0.0;
  for (const auto& f : u.fields) sup = std::max(sup, weak_norm(f, r0));
  return sup;
}

}  // namespace wavelab
