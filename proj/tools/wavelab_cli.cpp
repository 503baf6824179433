// wavelab: config-driven audits and solver runs.
//
//   wavelab <subcommand> [--config PATH] [--out DIR] [--seed INT] [--workers INT]
//
// Writes <prefix><subcommand>.json and the CSV tables to the output directory
// and prints the JSON report. Exit 0 on pass, 1 on audit failure, 2 on a
// configuration or runtime error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wavelab/error.hpp"
#include "wavelab/runner.hpp"

int main(int argc, char** argv) {
  using namespace wavelab;
  CLI::App app{"Numerical lab for semilinear wave equations with Hardy potentials"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  app.add_option("subcommand", command, "params | norms | dispersive | yamazaki | solve | scatter | stability | sweep")
      ->required()
      ->check(CLI::IsMember(subcommands()));
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--seed", seed, "seed for randomized corpora (overrides seed)");
  app.add_option("--workers", workers, "sweep worker threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!config.experiment.empty() && config.experiment != command) {
      std::cerr << "note: config experiment '" << config.experiment << "' differs from subcommand '" << command
                << "'\n";
    }
    if (seed) config.seed = *seed;
    if (!out_dir.empty()) config.output.dir = out_dir;
    const RunResult result = run(command, config, workers);
    write_artifacts(result, config.output, command);
    std::cout << result.report.dump(2) << '\n';
    if (result.report.contains("error")) std::cerr << "error: " << result.report["error"]["message"].get<std::string>() << '\n';
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
