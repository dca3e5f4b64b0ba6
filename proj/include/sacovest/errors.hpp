#pragma once

#include <stdexcept>
#include <string>

namespace sacovest {

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SACOVEST_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(what) {}  \
  }

// numerics
SACOVEST_DEFINE_ERROR(SingularMatrix);
SACOVEST_DEFINE_ERROR(NotPositiveDefinite);
SACOVEST_DEFINE_ERROR(NonConvergence);
SACOVEST_DEFINE_ERROR(NonFiniteInput);
SACOVEST_DEFINE_ERROR(DimensionMismatch);

// problems
SACOVEST_DEFINE_ERROR(InvalidBounds);
SACOVEST_DEFINE_ERROR(InfeasibleInput);
SACOVEST_DEFINE_ERROR(StrictComplementarityViolated);

// engine
SACOVEST_DEFINE_ERROR(NumericalDivergence);

// covest
SACOVEST_DEFINE_ERROR(EmptyState);
SACOVEST_DEFINE_ERROR(EmptySequence);

// inference
SACOVEST_DEFINE_ERROR(OutOfDomain);
SACOVEST_DEFINE_ERROR(DegenerateDirection);
SACOVEST_DEFINE_ERROR(InvalidReps);
SACOVEST_DEFINE_ERROR(InsufficientPoints);
SACOVEST_DEFINE_ERROR(NonPositiveValue);
SACOVEST_DEFINE_ERROR(NotOrthonormal);

// cli
SACOVEST_DEFINE_ERROR(ValidationError);
SACOVEST_DEFINE_ERROR(ParseError);
SACOVEST_DEFINE_ERROR(IoError);

#undef SACOVEST_DEFINE_ERROR

}  // namespace sacovest
