#pragma once

#include <stdexcept>
#include <string>

namespace mahler {

enum class ErrorKind {
  Input,
  PoleAtOrigin,
  AmbiguousInitialVector,
  InconsistentInitialVector,
  DegreeBudgetExceeded,
  SizeBudgetExceeded,
  NotRegularAt,
  AlphaOutOfRange,
  StabilizationFailed,
  InsufficientOrder,
  MissingCoeffBound,
  RhoAlphaNotContracting,
  NoLiftAtDegree,
  RankNotStabilized,
  EmptyKernel,
  PreconditionTauNotARelation,
  BadPrime,
};

const char* kind_name(ErrorKind k);

// True for failures that are negative mathematical answers (CLI exit 1)
// rather than bad input (exit 2).
bool is_math_negative(ErrorKind k);

class MahlerError : public std::runtime_error {
 public:
  MahlerError(ErrorKind kind, const std::string& what, long param = -1)
      : std::runtime_error(what), kind_(kind), param_(param) {}
  ErrorKind kind() const { return kind_; }
  long param() const { return param_; }

 private:
  ErrorKind kind_;
  long param_;
};

}  // namespace mahler
