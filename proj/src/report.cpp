#include "wavelab/report.hpp"

#include <algorithm>
#include <cmath>

namespace wavelab {

bool EstimateReport::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

nlohmann::json to_json(const EstimateReport& report) {
  nlohmann::json j;
  j["inputs"] = report.inputs;
  auto& samples = j["samples"] = nlohmann::json::array();
  for (const auto& s : report.samples) samples.push_back({{"t", s.t}, {"measured", s.measured}, {"bound", s.bound}});
  j["measured_constant"] = report.measured_constant;
  j["fitted_slope"] = report.fitted_slope ? nlohmann::json(*report.fitted_slope) : nlohmann::json();
  j["slope_window"] = {report.window_lo, report.window_hi};
  j["values"] = report.values;
  j["flags"] = report.flags;
  j["verdict"] = report.verdict;
  return j;
}

std::optional<double> fit_loglog_slope(std::span<const double> t, std::span<const double> y, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < std::min(t.size(), y.size()); ++i) {
    if (t[i] < lo || t[i] > hi || !(t[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(t[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 2) return std::nullopt;
  const double m = static_cast<double>(count);
  const double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) return std::nullopt;
  return (m * sxy - sx * sy) / denom;
}

}  // namespace wavelab
