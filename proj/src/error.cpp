#include "specpert/error.hpp"

namespace specpert {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::EmptySpectrum: return "EmptySpectrum";
    case ErrorKind::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorKind::ZeroOperator: return "ZeroOperator";
    case ErrorKind::InvalidSpike: return "InvalidSpike";
    case ErrorKind::GapUndefined: return "GapUndefined";
    case ErrorKind::InvalidCluster: return "InvalidCluster";
    case ErrorKind::SpikeIndexOutOfRange: return "SpikeIndexOutOfRange";
    case ErrorKind::RequiresUnitNoise: return "RequiresUnitNoise";
    case ErrorKind::EmptyBatch: return "EmptyBatch";
    case ErrorKind::NegativeInner: return "NegativeInner";
    case ErrorKind::DegenerateTopEigenvalues: return "DegenerateTopEigenvalues";
    case ErrorKind::NonpositiveB: return "NonpositiveB";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace specpert
