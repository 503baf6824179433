#include "wavelab/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "wavelab/error.hpp"

namespace wavelab {

namespace {
constexpr const char* kModule = "cli_runner";
using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::config, kModule, msg); }

// Reads the keys of one object block and rejects anything it was not asked for.
class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("'" + path_ + "' must be an object");
  }
  ~Block() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail("unknown key '" + where(key) + "'");
    }
  }

  const json* get(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = get(key)) out = as_number(*v, key);
  }
  void number(const std::string& key, std::optional<double>& out) {
    if (const json* v = get(key)) out = as_number(*v, key);
  }
  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const json* v = get(key)) out = static_cast<Int>(as_integer(*v, key));
  }
  void integer(const std::string& key, std::optional<std::size_t>& out) {
    if (const json* v = get(key)) out = static_cast<std::size_t>(as_integer(*v, key));
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = get(key)) {
      if (!v->is_boolean()) fail("'" + where(key) + "' must be true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = get(key)) {
      if (!v->is_string()) fail("'" + where(key) + "' must be a string");
      out = v->get<std::string>();
    }
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  // Numbers, or the strings "inf" / "infinity".
  double as_number(const json& v, const std::string& key) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
    fail("'" + where(key) + "' must be a number");
  }
  long long as_integer(const json& v, const std::string& key) const {
    if (!v.is_number_integer() || v.get<long long>() < 0) fail("'" + where(key) + "' must be a nonnegative integer");
    return v.get<long long>();
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ProfileSpec parse_profile(const json& j, const std::string& path) {
  ProfileSpec p;
  Block b(j, path);
  b.string("profile", p.name);
  b.number("amplitude", p.amplitude);
  b.number("width", p.width);
  b.number("center", p.center);
  b.number("exponent", p.exponent);
  return p;
}

DataConfig parse_data(const json& j, const std::string& path) {
  DataConfig d;
  Block b(j, path);
  // Flat shorthand: profile / amplitude / width / center describe u0.
  b.string("profile", d.u0.name);
  b.number("amplitude", d.u0.amplitude);
  b.number("width", d.u0.width);
  b.number("center", d.u0.center);
  if (const json* v = b.get("u0")) d.u0 = parse_profile(*v, path + ".u0");
  if (const json* v = b.get("u1")) d.u1 = parse_profile(*v, path + ".u1");
  b.number("scale_to_linear_sup", d.scale_to_linear_sup);
  return d;
}

void check_profile(const ProfileSpec& p, const std::string& path) {
  if (!is_known_profile(p.name)) fail("'" + path + ".profile' names an unknown profile '" + p.name + "'");
  if (!std::isfinite(p.amplitude)) fail("'" + path + ".amplitude' must be finite");
  if (p.name != "zero" && p.name != "power" && !(p.width > 0.0 && std::isfinite(p.width))) {
    fail("'" + path + ".width' must be positive");
  }
}
}  // namespace

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig c;
  Block top(j, "");
  top.string("experiment", c.experiment);
  if (const json* v = top.get("seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      fail("'seed' must be a nonnegative integer");
    }
    c.seed = v->get<std::uint64_t>();
  }
  if (const json* v = top.get("grid")) {
    Block b(*v, "grid");
    b.integer("dimension", c.grid.dimension);
    b.number("r_max", c.grid.r_max);
    b.integer("nodes", c.grid.nodes);
  }
  if (const json* v = top.get("spectral")) {
    Block b(*v, "spectral");
    b.integer("freq_nodes", c.spectral.freq_nodes);
    b.number("rho_max", c.spectral.rho_max);
  }
  if (const json* v = top.get("model")) {
    Block b(*v, "model");
    b.number("q", c.model.q);
    b.number("b", c.model.b);
    b.number("c1", c.model.c1);
    b.number("c2", c.model.c2);
    std::string mode = "theorem";
    b.string("mode", mode);
    if (mode == "theorem") c.model.mode = ParamMode::theorem;
    else if (mode == "audit") c.model.mode = ParamMode::audit;
    else fail("'model.mode' must be \"theorem\" or \"audit\"");
  }
  if (const json* v = top.get("data")) c.data = parse_data(*v, "data");
  if (const json* v = top.get("data_tilde")) {
    if (*v == "same") {
      c.data_tilde.kind = TildeConfig::Kind::same;
    } else if (*v == "zero") {
      c.data_tilde.kind = TildeConfig::Kind::zero;
    } else {
      c.data_tilde.kind = TildeConfig::Kind::data;
      c.data_tilde.data = parse_data(*v, "data_tilde");
    }
  }
  if (const json* v = top.get("time")) {
    Block b(*v, "time");
    b.number("t_max", c.time.t_max);
    b.integer("time_nodes", c.time.time_nodes);
    b.boolean("symmetric", c.time.symmetric);
  }
  if (const json* v = top.get("audit")) {
    auto& a = c.audit;
    Block b(*v, "audit");
    b.string("mode", a.mode);
    b.number("l1", a.l1);
    b.number("l2", a.l2);
    b.number("z", a.z);
    b.number("p", a.p);
    b.number("t_min", a.t_min);
    b.number("t_max", a.t_max);
    b.integer("samples", a.samples);
    if (const json* w = b.get("window")) {
      if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number() || !(*w)[1].is_number()) {
        fail("'audit.window' must be [lo, hi]");
      }
      a.window = std::make_pair((*w)[0].get<double>(), (*w)[1].get<double>());
    }
    b.number("slope_tol", a.slope_tol);
    b.number("d1", a.d1);
    b.number("d2", a.d2);
    b.number("horizon", a.horizon);
    b.boolean("allow_out_of_region", a.allow_out_of_region);
    b.integer("steps_per_horizon", a.steps_per_horizon);
    b.number("tail_tol", a.tail_tol);
    b.number("tol", a.tol);
    b.integer("max_iter", a.max_iter);
    b.number("ball_radius", a.ball_radius);
    b.number("residual_tol", a.residual_tol);
    b.number("h", a.h);
    b.number("defect_tol", a.defect_tol);
    b.number("decay_ratio", a.decay_ratio);
    b.number("exponent_tol", a.exponent_tol);
    b.number("constant_tol", a.constant_tol);
    b.boolean("check_doubling", a.check_doubling);
    b.integer("snapshot_every", a.snapshot_every);
    b.integer("random_fields", a.random_fields);
    b.number("norm_rel_tol", a.norm_rel_tol);
    if (const json* list = b.get("norms")) {
      if (!list->is_array()) fail("'audit.norms' must be an array");
      for (std::size_t k = 0; k < list->size(); ++k) {
        const std::string path = "audit.norms[" + std::to_string(k) + "]";
        NormRequest r;
        Block nb((*list)[k], path);
        nb.string("id", r.id);
        if (const json* f = nb.get("field")) r.field = parse_profile(*f, path + ".field");
        nb.number("p", r.p);
        nb.number("z", r.z);
        if (r.id.empty()) r.id = "field" + std::to_string(k);
        a.norms.push_back(std::move(r));
      }
    }
  }
  if (const json* v = top.get("sweep")) {
    Block b(*v, "sweep");
    b.string("experiment", c.sweep.experiment);
    if (const json* r = b.get("ranges")) {
      if (!r->is_object()) fail("'sweep.ranges' must be an object");
      for (const auto& [key, values] : r->items()) {
        if (!values.is_array()) fail("'sweep.ranges." + key + "' must be an array");
        std::vector<double> list;
        for (const auto& x : values) {
          if (!x.is_number() || !std::isfinite(x.get<double>())) fail("'sweep.ranges." + key + "' must hold finite numbers");
          list.push_back(x.get<double>());
        }
        c.sweep.ranges[key] = std::move(list);
      }
    }
  }
  if (const json* v = top.get("output")) {
    Block b(*v, "output");
    b.string("dir", c.output.dir);
    b.string("prefix", c.output.prefix);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void validate(const ExperimentConfig& c) {
  const int n = c.grid.dimension;
  if (n < 3 || n % 2 == 0) fail("grid.dimension must be odd and >= 3");
  if (!(c.grid.r_max > 0.0) || !std::isfinite(c.grid.r_max)) fail("grid.r_max must be positive");
  if (c.grid.nodes < 2) fail("grid.nodes must be at least 2");
  if (c.spectral.freq_nodes && *c.spectral.freq_nodes < 1) fail("spectral.freq_nodes must be positive");
  if (c.spectral.rho_max && !(*c.spectral.rho_max > 0.0)) fail("spectral.rho_max must be positive");
  if (!(c.model.q > 1.0) || !std::isfinite(c.model.q)) fail("model.q must exceed 1");
  if (!(c.model.b >= 0.0 && c.model.b < 2.0)) fail("model.b must lie in [0, 2)");
  if (!std::isfinite(c.model.c1) || !std::isfinite(c.model.c2)) fail("model.c1 and model.c2 must be finite");
  check_profile(c.data.u0, "data.u0");
  check_profile(c.data.u1, "data.u1");
  if (c.data.scale_to_linear_sup && !(*c.data.scale_to_linear_sup > 0.0)) {
    fail("data.scale_to_linear_sup must be positive");
  }
  if (c.data_tilde.kind == TildeConfig::Kind::data) {
    check_profile(c.data_tilde.data.u0, "data_tilde.u0");
    check_profile(c.data_tilde.data.u1, "data_tilde.u1");
  }
  if (!(c.time.t_max > 0.0) || !std::isfinite(c.time.t_max)) fail("time.t_max must be positive");
  if (c.time.time_nodes < 1) fail("time.time_nodes must be at least 1");
  const auto& a = c.audit;
  if (a.mode != "lorentz" && a.mode != "lp") fail("audit.mode must be \"lorentz\" or \"lp\"");
  if (!(a.t_min > 0.0 && a.t_max > a.t_min)) fail("audit.t_min/t_max must satisfy 0 < t_min < t_max");
  if (a.samples < 2) fail("audit.samples must be at least 2");
  if (a.window && !(a.window->first > 0.0 && a.window->second > a.window->first)) {
    fail("audit.window must satisfy 0 < lo < hi");
  }
  if (!(a.horizon > 0.0)) fail("audit.horizon must be positive");
  if (a.steps_per_horizon < 2) fail("audit.steps_per_horizon must be at least 2");
  if (!(a.tol > 0.0)) fail("audit.tol must be positive");
  if (a.max_iter < 1) fail("audit.max_iter must be at least 1");
  if (a.ball_radius && !(*a.ball_radius > 0.0)) fail("audit.ball_radius must be positive");
  if (!(a.h > 0.0 && a.h < 1.0)) fail("audit.h must lie in (0, 1)");
  if (a.snapshot_every < 1) fail("audit.snapshot_every must be at least 1");
  for (const auto& r : a.norms) {
    check_profile(r.field, "audit.norms." + r.id + ".field");
    if (!(r.p > 0.0) || !(r.z > 0.0)) fail("audit.norms." + r.id + ": p and z must be positive");
  }
  for (const auto& [key, values] : c.sweep.ranges) {
    if (values.empty()) fail("sweep.ranges." + key + " is empty");
  }
}

bool set_parameter(ExperimentConfig& c, const std::string& name, double v) {
  const auto integral = [&](auto& slot) {
    if (v < 0.0 || v != std::floor(v)) fail("sweep parameter '" + name + "' needs nonnegative integers");
    slot = static_cast<std::remove_reference_t<decltype(slot)>>(v);
  };
  if (name == "q" || name == "model.q") c.model.q = v;
  else if (name == "b" || name == "model.b") c.model.b = v;
  else if (name == "c1" || name == "model.c1") c.model.c1 = v;
  else if (name == "c2" || name == "model.c2") c.model.c2 = v;
  else if (name == "dimension" || name == "grid.dimension") integral(c.grid.dimension);
  else if (name == "r_max" || name == "grid.r_max") c.grid.r_max = v;
  else if (name == "nodes" || name == "grid.nodes") integral(c.grid.nodes);
  else if (name == "t_max" || name == "time.t_max") c.time.t_max = v;
  else if (name == "time_nodes" || name == "time.time_nodes") integral(c.time.time_nodes);
  else if (name == "h" || name == "audit.h") c.audit.h = v;
  else if (name == "amplitude" || name == "data.u0.amplitude") c.data.u0.amplitude = v;
  else if (name == "width" || name == "data.u0.width") c.data.u0.width = v;
  else if (name == "scale_to_linear_sup" || name == "data.scale_to_linear_sup") c.data.scale_to_linear_sup = v;
  else return false;
  return true;
}

}  // namespace wavelab
