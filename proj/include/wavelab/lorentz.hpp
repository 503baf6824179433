#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "wavelab/radial_grid.hpp"

namespace wavelab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Index (p, z) of the Lorentz space L^{(p,z)}; z = inf is weak-L^p.
struct LorentzIndex {
  double p;
  double z;

  static LorentzIndex weak(double p) { return {p, kInf}; }
  static LorentzIndex strong(double p) { return {p, p}; }

  bool valid() const noexcept;
  // Throws ErrorKind::index when !valid().
  void validate() const;
};

// Decreasing rearrangement of |f| as a step function in measure:
// f* = levels[k] on (breakpoints[k], breakpoints[k+1]].
struct RearrangementProfile {
  std::vector<double> breakpoints;
  std::vector<double> levels;

  double total_measure() const { return breakpoints.empty() ? 0.0 : breakpoints.back(); }
};

// d_f(lambda) = measure of {|f| > lambda}.
double distribution_function(const RadialField& f, double lambda);

RearrangementProfile rearrange(const RadialField& f);

// Lorentz quasi-norm in the normalisation (int_0^inf (t^{1/p} f*(t))^z dt/t)^{1/z};
// z = inf gives sup_t t^{1/p} f*(t). Each step is integrated in closed form.
double lorentz_norm(const RearrangementProfile& profile, LorentzIndex idx);
double lorentz_norm(const RadialField& f, LorentzIndex idx);

inline double weak_norm(const RadialField& f, double p) { return lorentz_norm(f, LorentzIndex::weak(p)); }

// Closed-form norm of c * 1_E: |c| (p/z)^{1/z} |E|^{1/p}.
double indicator_norm(double amplitude, double measure, LorentzIndex idx);

// When every nonzero |f_i| takes the same value, returns that value and the
// measure of the support; otherwise nullopt.
struct IndicatorShape {
  double amplitude;
  double measure;
};
std::optional<IndicatorShape> as_indicator(const RadialField& f);

struct HolderAudit {
  double product_norm = 0.0;  // ||fg||_{(p3,r3)}
  double f_norm = 0.0;        // ||f||_{(p1,r1)}
  double g_norm = 0.0;        // ||g||_{(p2,r2)}
  double ratio = 0.0;
  bool zero_over_zero = false;
};

// Ratio ||fg||_{(p3,r3)} / (||f||_{(p1,r1)} ||g||_{(p2,r2)}). Requires
// 1/p3 = 1/p1 + 1/p2 and 1/r1 + 1/r2 >= 1/r3 (admissibility error otherwise).
HolderAudit audit_holder(const RadialField& f, const RadialField& g, LorentzIndex first,
                         LorentzIndex second, LorentzIndex product);

struct InclusionAudit {
  double p = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double norm_z1 = 0.0;
  double norm_z2 = 0.0;
  double ratio = 0.0;  // norm_z1 / norm_z2, 0 for the zero field
  bool zero_over_zero = false;
  // Relative growth of each norm between the inner half of the grid and the
  // full grid; large values mean the norm is still picking up mass at r_max.
  double growth_z1 = 0.0;
  double growth_z2 = 0.0;
  bool truncation_growing = false;
  // Populated for (scaled) indicator fields.
  std::optional<double> closed_form_z1;
  std::optional<double> closed_form_z2;
  double closed_form_rel_err = 0.0;
};

InclusionAudit audit_inclusion(const RadialField& f, double p, double z1, double z2);

}  // namespace wavelab
