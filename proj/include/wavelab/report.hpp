#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace wavelab {

struct EstimateSample {
  double t = 0.0;
  double measured = 0.0;
  double bound = 0.0;
};

// Measured counterpart of an inequality with a non-constructive constant:
// what was computed, against what bound, and the log-log trend.
struct EstimateReport {
  nlohmann::json inputs = nlohmann::json::object();
  std::vector<EstimateSample> samples;
  double measured_constant = 0.0;
  std::optional<double> fitted_slope;
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::map<std::string, double> values;
  std::vector<std::string> flags;
  std::string verdict = "informational";

  bool has_flag(const std::string& flag) const;
};

nlohmann::json to_json(const EstimateReport& report);

// Unweighted least-squares slope of log(y) against log(t) over the points with
// lo <= t <= hi and y > 0. Needs at least two such points.
std::optional<double> fit_loglog_slope(std::span<const double> t, std::span<const double> y, double lo, double hi);

}  // namespace wavelab
