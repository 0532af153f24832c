#pragma once

#include <stdexcept>
#include <string>

namespace mpt {

enum class ErrorKind {
  InvalidInput,
  InvalidRotation,
  InvalidMode,
  Domain,
  Singularity,
  IndexOutOfRange,
  NoDominantMode,
  PoleProximity,
  NumericRange,
  RootBracket,
  ResidueSpacing,
  NoFit,
  Convergence,
  Schema,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mpt
