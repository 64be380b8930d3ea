#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace germforge {

enum class ErrorKind {
  DivisionByZero,
  PoleAtParameter,
  ZeroPolynomial,
  IncompatibleAmbient,
  NonPolynomialParameter,
  ZeroMatrix,
  InhomogeneousGenerator,
  InhomogeneousGerm,
  NotFinite,
  NotEquidimensional,
  SocleFailure,
  IndexOutOfRange,
  NotEnoughDirections,
  OutOfDomain,
  NotBoundary,
  BlockMismatch,
  DegenerateControl,
  PoleOnRequest,
  RegionAtPole,
  StepRejected,
  SyntaxError,
  UnknownSymbol,
  ConstantTermNonzero,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for every failure the engine reports; callers
// dispatch on kind() rather than on a class hierarchy.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace germforge
