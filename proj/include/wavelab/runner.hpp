#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavelab/config.hpp"

namespace wavelab {

// Exit codes of the command-line tool.
constexpr int kExitPass = 0;
constexpr int kExitAuditFailure = 1;
constexpr int kExitError = 2;

struct RunResult {
  int exit_code = kExitPass;
  nlohmann::json report = nlohmann::json::object();
  // Scalar results used as sweep columns.
  nlohmann::json summary = nlohmann::json::object();
  // (file name, CSV text); names are relative to the output directory.
  std::vector<std::pair<std::string, std::string>> tables;
};

// The subcommands: params, norms, dispersive, yamazaki, solve, scatter,
// stability, sweep.
const std::vector<std::string>& subcommands();

// Validates, runs and never throws: errors become exit code 1 (admissibility,
// non-contraction, no convergence) or 2 (everything else) with an "error"
// block in the report. `workers` only affects sweep scheduling.
RunResult run(const std::string& command, const ExperimentConfig& config, unsigned workers = 1);

// Writes <prefix><command>.json and the tables under config.output.dir.
void write_artifacts(const RunResult& result, const OutputConfig& output, const std::string& command);

// Shortest round-trip decimal form; "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

nlohmann::json to_json(const ModelParams& p);

}  // namespace wavelab
