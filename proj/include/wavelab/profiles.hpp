#pragma once

#include <string>

#include "wavelab/radial_grid.hpp"

namespace wavelab {

// Named radial test profiles used by the CLI and the audits.
//   gaussian  A exp(-(r/w)^2)
//   bump      A exp(1 - 1/(1 - (r/w)^2)) on r < w, smooth and compactly supported
//   two_bump  bump(r; w) + 0.5 bump(r - c; w/2) with c = center (default 2w)
//   indicator A on r < w
//   power     A r^{-alpha}, alpha = exponent
//   zero
struct ProfileSpec {
  std::string name = "gaussian";
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  double exponent = 0.0;
};

bool is_known_profile(const std::string& name);
RadialFunction make_profile(const ProfileSpec& spec);
RadialField sample_profile(const ProfileSpec& spec, const GridPtr& grid);

}  // namespace wavelab
