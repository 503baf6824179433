#include "wavelab/duhamel.hpp"

#include <algorithm>
#include <cmath>

#include "wavelab/error.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "mild_solution";
}

std::vector<double> composite_weights(std::size_t intervals, double h) {
  std::vector<double> w(intervals + 1, 0.0);
  if (intervals == 0) return w;
  if (intervals == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  const std::size_t simpson = (intervals % 2 == 0) ? intervals : intervals - 3;
  for (std::size_t k = 0; k + 2 <= simpson; k += 2) {
    w[k] += h / 3.0;
    w[k + 1] += 4.0 * h / 3.0;
    w[k + 2] += h / 3.0;
  }
  if (simpson != intervals) {
    const std::size_t k = simpson;
    w[k] += 3.0 * h / 8.0;
    w[k + 1] += 9.0 * h / 8.0;
    w[k + 2] += 9.0 * h / 8.0;
    w[k + 3] += 3.0 * h / 8.0;
  }
  return w;
}

DuhamelIntegrator::DuhamelIntegrator(const SpectralPlan& plan, const Trajectory& source)
    : plan_(plan), times_(source.times) {
  spectra_.resize(static_cast<Eigen::Index>(plan.modes()), static_cast<Eigen::Index>(source.size()));
  for (std::size_t j = 0; j < source.size(); ++j)
    spectra_.col(static_cast<Eigen::Index>(j)) = plan.forward(source.fields[j]);
}

Eigen::VectorXd DuhamelIntegrator::integrate(std::size_t lo, std::size_t hi,
                                             const std::function<double(double, double)>& multiplier,
                                             bool from_high) const {
  const auto modes = static_cast<Eigen::Index>(plan_.modes());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(modes);
  if (hi <= lo) return out;
  const double h = times_[lo + 1] - times_[lo];
  const std::size_t intervals = hi - lo;
  const bool above = hi + 1 < times_.size();
  const bool below = lo >= 1;
  std::vector<std::size_t> nodes;
  std::vector<double> weights;
  if (intervals == 1 && (above || below)) {
    // Three-point rule through a neighbouring node, exact for quadratics.
    // The neighbour sits past the far end when it exists.
    if ((!from_high && above) || (from_high && !below)) {
      nodes = {lo, hi, hi + 1};
      weights = {5.0 * h / 12.0, 8.0 * h / 12.0, -h / 12.0};
    } else {
      nodes = {lo - 1, lo, hi};
      weights = {-h / 12.0, 8.0 * h / 12.0, 5.0 * h / 12.0};
    }
  } else {
    weights = composite_weights(intervals, h);
    if (from_high) std::reverse(weights.begin(), weights.end());
    for (std::size_t k = lo; k <= hi; ++k) nodes.push_back(k);
  }
  const auto rho = plan_.frequencies();
  for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
    const double s = times_[nodes[idx]];
    const auto col = spectra_.col(static_cast<Eigen::Index>(nodes[idx]));
    for (Eigen::Index k = 0; k < modes; ++k) out(k) += weights[idx] * multiplier(s, rho[static_cast<std::size_t>(k)]) * col(k);
  }
  return out;
}

Eigen::VectorXd DuhamelIntegrator::forward_spectrum(std::size_t j) const {
  if (j >= times_.size()) throw Error(ErrorKind::invalid_argument, kModule, "time index out of range");
  const std::size_t o = [&] {
    for (std::size_t k = 0; k < times_.size(); ++k)
      if (times_[k] == 0.0) return k;
    throw Error(ErrorKind::invalid_argument, kModule, "time grid does not contain t = 0");
  }();
  const double t = times_[j];
  const auto kernel = [t](double s, double rho) { return sin_over(t - s, rho); };
  if (j >= o) return integrate(o, j, kernel);
  return -integrate(j, o, kernel, true);
}

RadialField DuhamelIntegrator::forward(std::size_t j) const { return plan_.inverse(forward_spectrum(j)); }

std::vector<RadialField> DuhamelIntegrator::forward_all() const {
  Eigen::MatrixXd spectra(static_cast<Eigen::Index>(plan_.modes()), static_cast<Eigen::Index>(times_.size()));
  for (std::size_t j = 0; j < times_.size(); ++j) spectra.col(static_cast<Eigen::Index>(j)) = forward_spectrum(j);
  return plan_.inverse_columns(spectra);
}

RadialField DuhamelIntegrator::tail(std::size_t j, bool past) const {
  if (j >= times_.size()) {
    throw Error(ErrorKind::invalid_argument, "scattering_stability", "tail time lies beyond the trajectory horizon");
  }
  const double t = times_[j];
  if (past) return plan_.inverse(integrate(0, j, [t](double s, double rho) { return sin_over(t - s, rho); }, true));
  return plan_.inverse(integrate(j, times_.size() - 1, [t](double s, double rho) { return sin_over(s - t, rho); }));
}

}  // namespace wavelab
