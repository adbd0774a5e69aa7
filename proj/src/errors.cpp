#include "mahler/errors.hpp"

namespace mahler {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Input: return "InputError";
    case ErrorKind::PoleAtOrigin: return "PoleAtOrigin";
    case ErrorKind::AmbiguousInitialVector: return "AmbiguousInitialVector";
    case ErrorKind::InconsistentInitialVector: return "InconsistentInitialVector";
    case ErrorKind::DegreeBudgetExceeded: return "DegreeBudgetExceeded";
    case ErrorKind::SizeBudgetExceeded: return "SizeBudgetExceeded";
    case ErrorKind::NotRegularAt: return "NotRegularAt";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::StabilizationFailed: return "StabilizationFailed";
    case ErrorKind::InsufficientOrder: return "InsufficientOrder";
    case ErrorKind::MissingCoeffBound: return "MissingCoeffBound";
    case ErrorKind::RhoAlphaNotContracting: return "RhoAlphaNotContracting";
    case ErrorKind::NoLiftAtDegree: return "NoLiftAtDegree";
    case ErrorKind::RankNotStabilized: return "RankNotStabilized";
    case ErrorKind::EmptyKernel: return "EmptyKernel";
    case ErrorKind::PreconditionTauNotARelation: return "PreconditionTauNotARelation";
    case ErrorKind::BadPrime: return "BadPrime";
  }
  return "Unknown";
}

bool is_math_negative(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotRegularAt:
    case ErrorKind::NoLiftAtDegree:
    case ErrorKind::StabilizationFailed:
    case ErrorKind::RankNotStabilized:
    case ErrorKind::EmptyKernel:
    case ErrorKind::PreconditionTauNotARelation:
      return true;
    default:
      return false;
  }
}

}  // namespace mahler
