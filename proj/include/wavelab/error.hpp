#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

enum class ErrorKind {
  invalid_dimension,
  invalid_argument,
  invalid_parameter,
  sampling,
  index,
  admissibility,
  geometry,
  plan_construction,
  grid_mismatch,
  overflow,
  non_contraction,
  no_convergence,
  precondition,
  config,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries the module that detected it so
// CLI messages can name both the broken invariant and where it was checked.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error("[" + module + "] " + message),
        kind_(kind),
        module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

}  // namespace wavelab
