#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wavelab {

// (1/l1, 1/l2) in the unit square.
struct ExponentPoint {
  double x = 0.0;
  double y = 0.0;
};

enum class Vertex { P1, P2, P3, P4, P5, A1, A2 };

Vertex parse_vertex(std::string_view name);
ExponentPoint vertex(Vertex v, int n);
ExponentPoint vertex(std::string_view name, int n);

enum class Region { triangle_p1p2p3, triangle_p2p4p5, segment_a1a2 };
enum class Closure { open, closed };

// Membership with a 1e-12 boundary band. Throws a geometry error when the
// region's vertices coincide.
bool in_region(ExponentPoint pt, Region region, Closure closure, int n);

// True when pt lies on the segment [a, b] (closed) to within 1e-12.
bool on_segment(ExponentPoint pt, ExponentPoint a, ExponentPoint b);

// p = (2q - b)/(2 - b) must meet this from above.
double threshold_power(int n);

enum class ParamMode { theorem, audit };

struct ModelParams {
  int n = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  double b = 0.0;
  double q = 0.0;

  double p = 0.0;
  double r0 = 0.0;
  double s = 0.0;
  double r0_dual = 0.0;
  double s_dual = 0.0;

  double threshold = 0.0;
  bool threshold_ok = false;
  bool boundary = false;

  // Cross-checks between the two closed forms of r0 and of 1/s, and the
  // residual of n/r0' - n/s' - 2.
  double r0_identity_residual = 0.0;
  double s_identity_residual = 0.0;
  double d1d2_residual = 0.0;

  ExponentPoint derived_point;     // (1 - 2/(n(p-1)), 1 - 2p/(n(p-1)))
  double dual_point_residual = 0.0;  // distance to (1/r0', 1/s')
  bool on_open_segment = false;
  bool in_radial_triangle = false;

  std::vector<std::string> warnings;
};

// Throws invalid_parameter for q <= 1 or b outside [0, 2), invalid_dimension
// for even n (or n = 3 in theorem mode), and admissibility when p is below
// the threshold in theorem mode. Audit mode records the failure as a flag.
ModelParams derive_params(int n, double q, double b, double c1, double c2,
                          ParamMode mode = ParamMode::theorem);

// Decay power -n(1/l1 - 1/l2) + 1 of the dispersive estimate.
double dispersive_exponent(double l1, double l2, int n);

// Weight power n(1/d1 - 1/d2) - 2 in the time-integrated estimate.
double yamazaki_exponent(double d1, double d2, int n);

}  // namespace wavelab
