#include "wavelab/profiles.hpp"

#include <array>
#include <cmath>

#include "wavelab/error.hpp"

namespace wavelab {

namespace {
constexpr std::array<const char*, 6> kNames = {"gaussian", "bump", "two_bump", "indicator", "power", "zero"};

double bump(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}
}  // namespace

bool is_known_profile(const std::string& name) {
  for (const char* n : kNames)
    if (name == n) return true;
  return false;
}

RadialFunction make_profile(const ProfileSpec& s) {
  if (!is_known_profile(s.name)) throw Error(ErrorKind::config, "profiles", "unknown profile '" + s.name + "'");
  if (!(s.width > 0.0) && s.name != "power" && s.name != "zero") {
    throw Error(ErrorKind::config, "profiles", "profile width must be positive");
  }
  const double a = s.amplitude, w = s.width;
  if (s.name == "gaussian") return [a, w](double r) { return a * std::exp(-(r / w) * (r / w)); };
  if (s.name == "bump") return [a, w](double r) { return a * bump(r / w); };
  if (s.name == "two_bump") {
    const double c = s.center > 0.0 ? s.center : 2.0 * w;
    return [a, w, c](double r) { return a * (bump(r / w) + 0.5 * bump((r - c) / (0.5 * w))); };
  }
  if (s.name == "indicator") return [a, w](double r) { return r < w ? a : 0.0; };
  if (s.name == "power") return [a, e = s.exponent](double r) { return a * std::pow(r, -e); };
  return [](double) { return 0.0; };
}

RadialField sample_profile(const ProfileSpec& spec, const GridPtr& grid) {
  if (spec.name == "zero") return RadialField(grid);
  return sample(make_profile(spec), grid);
}

}  // namespace wavelab
