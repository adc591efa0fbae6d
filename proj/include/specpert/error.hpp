#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specpert {

enum class ErrorKind {
  AsymmetricInput,
  NonSquare,
  DimensionMismatch,
  ConvergenceFailure,
  EmptySpectrum,
  NegativeEigenvalue,
  ZeroOperator,
  InvalidSpike,
  GapUndefined,
  InvalidCluster,
  SpikeIndexOutOfRange,
  RequiresUnitNoise,
  EmptyBatch,
  NegativeInner,
  DegenerateTopEigenvalues,
  NonpositiveB,
  ZeroDenominator,
  NotPSD,
  DomainViolation,
  InvalidArgument,
  Parse,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. The kind is stable and is what tests
// and the CLI dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace specpert
