#include "wavelab/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wavelab/error.hpp"

namespace wavelab {

namespace {

constexpr const char* kModule = "lorentz_norms";

// x^a - y^a for x = y + w without cancellation when w << y.
double power_increment(double y, double w, double a) {
  if (w <= 0.0) return 0.0;
  if (y <= 0.0) return std::pow(w, a);
  return std::pow(y, a) * std::expm1(a * std::log1p(w / y));
}

struct SortedCells {
  std::vector<double> levels;
  std::vector<double> widths;
};

SortedCells sort_cells(const RadialField& f) {
  const auto mu = f.grid()->cell_measures();
  std::vector<std::size_t> order(f.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(f[a]) > std::abs(f[b]); });
  SortedCells out;
  out.levels.reserve(order.size());
  out.widths.reserve(order.size());
  for (std::size_t i : order) {
    out.levels.push_back(std::abs(f[i]));
    out.widths.push_back(mu[i]);
  }
  return out;
}

double norm_from_steps(const std::vector<double>& levels, const std::vector<double>& widths, LorentzIndex idx) {
  idx.validate();
  if (levels.empty()) return 0.0;
  if (std::isinf(idx.p)) return levels.front();

  double t = 0.0;
  if (std::isinf(idx.z)) {
    double sup = 0.0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
      t += widths[k];
      if (levels[k] == 0.0) break;
      sup = std::max(sup, std::pow(t, 1.0 / idx.p) * levels[k]);
    }
    return sup;
  }

  // int_{t0}^{t1} (t^{1/p} c)^z dt/t = c^z (p/z) (t1^{z/p} - t0^{z/p})
  const double a = idx.z / idx.p;
  const double scale = levels.front();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] == 0.0) break;
    const double increment = (idx.z == idx.p) ? widths[k] : power_increment(t, widths[k], a);
    sum += std::pow(levels[k] / scale, idx.z) * increment;
    t += widths[k];
  }
  return scale * std::pow(sum / a, 1.0 / idx.z);
}

}  // namespace

bool LorentzIndex::valid() const noexcept {
  if (std::isnan(p) || std::isnan(z)) return false;
  if (!(p > 1.0) || !(z >= 1.0)) return false;
  if (std::isinf(p) && !std::isinf(z)) return false;
  return true;
}

void LorentzIndex::validate() const {
  if (!valid()) {
    std::ostringstream msg;
    msg << "invalid Lorentz index (p=" << p << ", z=" << z
        << "); need p > 1, z >= 1, and z = inf when p = inf";
    throw Error(ErrorKind::index, kModule, msg.str());
  }
}

double distribution_function(const RadialField& f, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::invalid_argument, kModule, "level must be nonnegative");
  const auto mu = f.grid()->cell_measures();
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::abs(f[i]) > lambda) d += mu[i];
  return d;
}

RearrangementProfile rearrange(const RadialField& f) {
  const SortedCells cells = sort_cells(f);
  RearrangementProfile profile;
  profile.levels = cells.levels;
  profile.breakpoints.resize(cells.widths.size() + 1);
  profile.breakpoints[0] = 0.0;
  for (std::size_t k = 0; k < cells.widths.size(); ++k)
    profile.breakpoints[k + 1] = profile.breakpoints[k] + cells.widths[k];
  return profile;
}

double lorentz_norm(const RearrangementProfile& profile, LorentzIndex idx) {
  std::vector<double> widths(profile.levels.size());
  for (std::size_t k = 0; k < widths.size(); ++k)
    widths[k] = profile.breakpoints[k + 1] - profile.breakpoints[k];
  return norm_from_steps(profile.levels, widths, idx);
}

double lorentz_norm(const RadialField& f, LorentzIndex idx) {
  idx.validate();
  const SortedCells cells = sort_cells(f);
  return norm_from_steps(cells.levels, cells.widths, idx);
}

double indicator_norm(double amplitude, double measure, LorentzIndex idx) {
  idx.validate();
  if (amplitude == 0.0 || measure == 0.0) return 0.0;
  if (std::isinf(idx.p)) return std::abs(amplitude);
  const double shape = std::isinf(idx.z) ? 1.0 : std::pow(idx.p / idx.z, 1.0 / idx.z);
  return std::abs(amplitude) * shape * std::pow(measure, 1.0 / idx.p);
}

std::optional<IndicatorShape> as_indicator(const RadialField& f) {
  const auto mu = f.grid()->cell_measures();
  double level = 0.0;
  double measure = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::abs(f[i]);
    if (v == 0.0) continue;
    if (level == 0.0) {
      level = v;
    } else if (std::abs(v - level) > 1e-14 * level) {
      return std::nullopt;
    }
    measure += mu[i];
  }
  if (level == 0.0) return std::nullopt;
  return IndicatorShape{level, measure};
}

HolderAudit audit_holder(const RadialField& f, const RadialField& g, LorentzIndex first,
                         LorentzIndex second, LorentzIndex product) {
  first.validate();
  second.validate();
  product.validate();
  f.require_same_grid(g, kModule);
  const double lhs = 1.0 / product.p;
  const double rhs = 1.0 / first.p + 1.0 / second.p;
  if (std::abs(lhs - rhs) > 1e-12) {
    std::ostringstream msg;
    msg << "Holder exponents violate 1/p3 = 1/p1 + 1/p2 (" << lhs << " vs " << rhs << ")";
    throw Error(ErrorKind::admissibility, kModule, msg.str());
  }
  if (1.0 / first.z + 1.0 / second.z < 1.0 / product.z - 1e-12) {
    throw Error(ErrorKind::admissibility, kModule, "Holder secondary indices violate 1/r1 + 1/r2 >= 1/r3");
  }
  HolderAudit audit;
  audit.product_norm = lorentz_norm(multiply(f, g), product);
  audit.f_norm = lorentz_norm(f, first);
  audit.g_norm = lorentz_norm(g, second);
  const double denom = audit.f_norm * audit.g_norm;
  if (denom == 0.0) {
    audit.zero_over_zero = audit.product_norm == 0.0;
    audit.ratio = audit.zero_over_zero ? 0.0 : kInf;
  } else {
    audit.ratio = audit.product_norm / denom;
  }
  return audit;
}

InclusionAudit audit_inclusion(const RadialField& f, double p, double z1, double z2) {
  if (!(z1 >= 1.0) || !(z2 >= z1)) {
    std::ostringstream msg;
    msg << "inclusion audit needs 1 <= z1 <= z2, got z1=" << z1 << ", z2=" << z2;
    throw Error(ErrorKind::invalid_argument, kModule, msg.str());
  }
  const LorentzIndex i1{p, z1};
  const LorentzIndex i2{p, z2};
  InclusionAudit audit;
  audit.p = p;
  audit.z1 = z1;
  audit.z2 = z2;
  audit.norm_z1 = lorentz_norm(f, i1);
  audit.norm_z2 = lorentz_norm(f, i2);
  if (audit.norm_z2 == 0.0) {
    audit.zero_over_zero = audit.norm_z1 == 0.0;
    audit.ratio = audit.zero_over_zero ? 0.0 : kInf;
  } else {
    audit.ratio = audit.norm_z1 / audit.norm_z2;
  }

  RadialField inner = f;
  const auto r = f.grid()->nodes();
  const double half = 0.5 * f.grid()->r_max();
  for (std::size_t i = 0; i < inner.size(); ++i)
    if (r[i] > half) inner[i] = 0.0;
  const auto growth = [](double full, double part) { return part > 0.0 ? full / part - 1.0 : 0.0; };
  audit.growth_z1 = growth(audit.norm_z1, lorentz_norm(inner, i1));
  audit.growth_z2 = growth(audit.norm_z2, lorentz_norm(inner, i2));
  audit.truncation_growing = audit.growth_z1 > 1e-3 || audit.growth_z2 > 1e-3;

  if (const auto shape = as_indicator(f)) {
    audit.closed_form_z1 = indicator_norm(shape->amplitude, shape->measure, i1);
    audit.closed_form_z2 = indicator_norm(shape->amplitude, shape->measure, i2);
    audit.closed_form_rel_err =
        std::max(std::abs(audit.norm_z1 / *audit.closed_form_z1 - 1.0), std::abs(audit.norm_z2 / *audit.closed_form_z2 - 1.0));
  }
  return audit;
}

}  // namespace wavelab
