#include "wavelab/error.hpp"

namespace wavelab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::sampling: return "sampling";
    case ErrorKind::index: return "index";
    case ErrorKind::admissibility: return "admissibility";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::plan_construction: return "plan-construction";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::non_contraction: return "non-contraction";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace wavelab
