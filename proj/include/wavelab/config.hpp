#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wavelab/exponents.hpp"
#include "wavelab/profiles.hpp"

namespace wavelab {

struct GridConfig {
  int dimension = 5;
  double r_max = 16.0;
  std::size_t nodes = 256;
};

struct SpectralConfig {
  std::optional<std::size_t> freq_nodes;  // default: grid nodes
  std::optional<double> rho_max;          // default: pi N / (2 r_max)
};

struct ModelConfig {
  double q = 3.0;
  double b = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  ParamMode mode = ParamMode::theorem;
};

struct DataConfig {
  ProfileSpec u0;
  ProfileSpec u1{"zero"};
  // Rescale (u0, u1) so the linear evolution's sup weak-L^{r0} norm equals this.
  std::optional<double> scale_to_linear_sup;
};

// Comparison data for `stability`: identical, zero, or its own block.
struct TildeConfig {
  enum class Kind { same, zero, data } kind = Kind::zero;
  DataConfig data;
};

struct TimeConfig {
  double t_max = 8.0;
  std::size_t time_nodes = 64;  // uniform intervals on [0, t_max]
  bool symmetric = false;
};

struct NormRequest {
  std::string id;
  ProfileSpec field;
  double p = 2.0;
  double z = 2.0;  // "inf" in the config for the weak norm
};

struct AuditConfig {
  // dispersive
  std::string mode = "lorentz";  // or "lp"
  double l1 = 1.25, l2 = 2.5, z = 1.0, p = 4.0;
  double t_min = 1.0, t_max = 64.0;
  std::size_t samples = 25;  // log-spaced in [t_min, t_max]
  std::optional<std::pair<double, double>> window;
  double slope_tol = 0.1;
  // yamazaki
  std::optional<double> d1, d2;  // default: (r0', s') of the model
  double horizon = 64.0;
  bool allow_out_of_region = false;
  std::size_t steps_per_horizon = 256;
  double tail_tol = 0.05;
  // solve / scatter / stability
  double tol = 1e-10;
  int max_iter = 100;
  std::optional<double> ball_radius;
  double residual_tol = 1e-6;
  double h = 0.5;
  double defect_tol = 1e-4;
  double decay_ratio = 0.1;
  double exponent_tol = 0.05;
  double constant_tol = 0.1;
  bool check_doubling = false;
  std::size_t snapshot_every = 1;
  // norms
  std::vector<NormRequest> norms;
  std::size_t random_fields = 0;  // seeded random fields appended to `norms`
  double norm_rel_tol = 0.01;
};

struct SweepConfig {
  std::string experiment = "params";
  // Parameter name ("q", "model.q", "grid.nodes", ...) -> values.
  std::map<std::string, std::vector<double>> ranges;
};

struct OutputConfig {
  std::string dir = ".";
  std::string prefix;
};

struct ExperimentConfig {
  std::string experiment;
  GridConfig grid;
  SpectralConfig spectral;
  ModelConfig model;
  DataConfig data;
  TildeConfig data_tilde;
  TimeConfig time;
  AuditConfig audit;
  SweepConfig sweep;
  std::uint64_t seed = 0;
  OutputConfig output;
};

// Parses and validates every block. Throws Error(config) naming the key.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Range checks that need no numerics (grid sizes, b in [0,2), q > 1, ...).
void validate(const ExperimentConfig& c);

// Sets a sweep parameter on a config; returns false for an unknown name.
bool set_parameter(ExperimentConfig& c, const std::string& name, double value);

}  // namespace wavelab
