#include "wavelab/exponents.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "wavelab/error.hpp"

namespace wavelab {

namespace {

constexpr const char* kModule = "exponent_geometry";
constexpr double kTol = 1e-12;

double cross(ExponentPoint o, ExponentPoint a, ExponentPoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance(ExponentPoint a, ExponentPoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

void require_dimension(int n) {
  if (n < 3 || n % 2 == 0) {
    std::ostringstream msg;
    msg << "dimension must be odd and >= 3, got " << n;
    throw Error(ErrorKind::invalid_dimension, kModule, msg.str());
  }
}

bool in_triangle(ExponentPoint pt, ExponentPoint a, ExponentPoint b, ExponentPoint c, Closure closure) {
  const double area = cross(a, b, c);
  if (std::abs(area) < kTol) throw Error(ErrorKind::geometry, kModule, "degenerate triangle");
  // Signed distances of pt to each edge, oriented so the interior is positive.
  const double sign = area > 0.0 ? 1.0 : -1.0;
  const std::array<double, 3> d = {
      sign * cross(a, b, pt) / distance(a, b),
      sign * cross(b, c, pt) / distance(b, c),
      sign * cross(c, a, pt) / distance(c, a),
  };
  for (double v : d) {
    if (closure == Closure::closed && v < -kTol) return false;
    if (closure == Closure::open && v <= kTol) return false;
  }
  return true;
}

bool in_segment(ExponentPoint pt, ExponentPoint a, ExponentPoint b, Closure closure) {
  const double len = distance(a, b);
  if (len < kTol) throw Error(ErrorKind::geometry, kModule, "degenerate segment");
  if (std::abs(cross(a, b, pt)) / len > kTol) return false;
  const double along = ((pt.x - a.x) * (b.x - a.x) + (pt.y - a.y) * (b.y - a.y)) / len;
  if (closure == Closure::closed) return along >= -kTol && along <= len + kTol;
  return along > kTol && along < len - kTol;
}

}  // namespace

Vertex parse_vertex(std::string_view name) {
  if (name == "P1") return Vertex::P1;
  if (name == "P2") return Vertex::P2;
  if (name == "P3") return Vertex::P3;
  if (name == "P4") return Vertex::P4;
  if (name == "P5") return Vertex::P5;
  if (name == "A1") return Vertex::A1;
  if (name == "A2") return Vertex::A2;
  throw Error(ErrorKind::invalid_argument, kModule, "unknown vertex name '" + std::string(name) + "'");
}

ExponentPoint vertex(Vertex v, int n) {
  require_dimension(n);
  const double nd = n;
  switch (v) {
    case Vertex::P1: return {0.5 + 1.0 / (nd + 1.0), 0.5 - 1.0 / (nd + 1.0)};
    case Vertex::P2: return {0.5 - 1.0 / (nd - 1.0), 0.5 - 1.0 / (nd - 1.0)};
    case Vertex::P3: return {0.5 + 1.0 / (nd - 1.0), 0.5 + 1.0 / (nd - 1.0)};
    case Vertex::P4: return {1.0, (nd - 1.0) / (2.0 * nd)};
    case Vertex::P5: return {1.0, 1.0};
    case Vertex::A1: {
      const double x = (nd + 1.0) / (2.0 * (nd - 1.0));
      return {x, x - 2.0 / nd};
    }
    case Vertex::A2: return {1.0, (nd - 2.0) / nd};
  }
  throw Error(ErrorKind::invalid_argument, kModule, "unknown vertex");
}

ExponentPoint vertex(std::string_view name, int n) { return vertex(parse_vertex(name), n); }

bool in_region(ExponentPoint pt, Region region, Closure closure, int n) {
  switch (region) {
    case Region::triangle_p1p2p3:
      return in_triangle(pt, vertex(Vertex::P1, n), vertex(Vertex::P2, n), vertex(Vertex::P3, n), closure);
    case Region::triangle_p2p4p5:
      return in_triangle(pt, vertex(Vertex::P2, n), vertex(Vertex::P4, n), vertex(Vertex::P5, n), closure);
    case Region::segment_a1a2:
      return in_segment(pt, vertex(Vertex::A1, n), vertex(Vertex::A2, n), closure);
  }
  return false;
}

bool on_segment(ExponentPoint pt, ExponentPoint a, ExponentPoint b) {
  return in_segment(pt, a, b, Closure::closed);
}

double threshold_power(int n) {
  const double nd = n;
  const double denom = nd * (nd - 3.0);
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return (nd * nd + nd - 4.0) / denom;
}

ModelParams derive_params(int n, double q, double b, double c1, double c2, ParamMode mode) {
  require_dimension(n);
  if (!(q > 1.0) || !std::isfinite(q)) {
    std::ostringstream msg;
    msg << "nonlinearity power q must exceed 1, got " << q;
    throw Error(ErrorKind::invalid_parameter, kModule, msg.str());
  }
  if (!(b >= 0.0 && b < 2.0)) {
    std::ostringstream msg;
    msg << "potential power b must lie in the range (0,2) (or equal 0), got " << b;
    throw Error(ErrorKind::invalid_parameter, kModule, msg.str());
  }
  if (!std::isfinite(c1) || !std::isfinite(c2))
    throw Error(ErrorKind::invalid_parameter, kModule, "potential strengths must be finite");

  ModelParams mp;
  mp.n = n;
  mp.q = q;
  mp.b = b;
  mp.c1 = c1;
  mp.c2 = c2;
  if (n == 3) {
    if (mode == ParamMode::theorem)
      throw Error(ErrorKind::invalid_dimension, kModule, "theorem mode needs odd n >= 5; n = 3 is audit-only");
    mp.warnings.push_back("n = 3 is outside the well-posedness range; audit mode only");
  }

  const double nd = n;
  mp.p = (2.0 * q - b) / (2.0 - b);
  mp.r0 = nd * (mp.p - 1.0) / 2.0;
  mp.s = mp.r0 / mp.p;
  mp.r0_dual = mp.r0 / (mp.r0 - 1.0);
  mp.s_dual = mp.s / (mp.s - 1.0);
  mp.threshold = threshold_power(n);

  const double gap = mp.p - mp.threshold;
  mp.boundary = std::isfinite(mp.threshold) && std::abs(gap) <= 1e-12 * mp.threshold;
  mp.threshold_ok = mp.boundary || gap > 0.0;

  mp.r0_identity_residual = std::abs(mp.r0 - nd * (q - 1.0) / (2.0 - b));
  mp.s_identity_residual = std::abs((1.0 / mp.r0 + 2.0 / nd) - (b / nd + q / mp.r0));
  if (mp.s > 1.0) mp.d1d2_residual = nd / mp.r0_dual - nd / mp.s_dual - 2.0;

  mp.derived_point = {1.0 - 2.0 / (nd * (mp.p - 1.0)), 1.0 - 2.0 * mp.p / (nd * (mp.p - 1.0))};
  mp.dual_point_residual = std::hypot(mp.derived_point.x - (1.0 - 1.0 / mp.r0),
                                      mp.derived_point.y - (1.0 - 1.0 / mp.s));
  if (n >= 5) {
    mp.on_open_segment = in_region(mp.derived_point, Region::segment_a1a2, Closure::open, n);
    mp.in_radial_triangle = in_region(mp.derived_point, Region::triangle_p2p4p5, Closure::closed, n);
  }

  if (!mp.threshold_ok) {
    std::ostringstream msg;
    msg << "p = " << mp.p << " is below the admissibility threshold (n^2+n-4)/(n(n-3)) = " << mp.threshold;
    if (mode == ParamMode::theorem) throw Error(ErrorKind::admissibility, kModule, msg.str());
    mp.warnings.push_back(msg.str());
  }
  if (mp.boundary) {
    mp.warnings.push_back("p equals the threshold; the derived point degenerates to the endpoint A1");
  }
  if (!(mp.s > 1.0)) mp.warnings.push_back("s = r0/p <= 1; dual exponent s' undefined");
  return mp;
}

double dispersive_exponent(double l1, double l2, int n) {
  if (!(l1 > 1.0) || !(l2 > 1.0))
    throw Error(ErrorKind::invalid_argument, kModule, "dispersive exponents need l1, l2 > 1");
  return -n * (1.0 / l1 - 1.0 / l2) + 1.0;
}

double yamazaki_exponent(double d1, double d2, int n) {
  if (!(d1 > 1.0) || !(d2 > 1.0))
    throw Error(ErrorKind::invalid_argument, kModule, "Yamazaki exponents need d1, d2 > 1");
  return n * (1.0 / d1 - 1.0 / d2) - 2.0;
}

}  // namespace wavelab
