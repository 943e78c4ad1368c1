#pragma once

#include <stdexcept>
#include <string>

namespace clwn {

// Base class for all library errors.  ConfigError maps to CLI exit code 2,
// every NumericalAbort subtype to exit code 3.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "Error"; }
};

class ConfigError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "ConfigError"; }
};

class NumericalAbort : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "NumericalAbort"; }
};

#define CLWN_DEFINE_ABORT(NAME)                                                \
  class NAME : public NumericalAbort {                                         \
  public:                                                                      \
    using NumericalAbort::NumericalAbort;                                      \
    const char* kind() const noexcept override { return #NAME; }               \
  }

CLWN_DEFINE_ABORT(CapacityExceeded);
CLWN_DEFINE_ABORT(NearLimitSet);
CLWN_DEFINE_ABORT(PoleEncountered);
CLWN_DEFINE_ABORT(ZeroDenominator);
CLWN_DEFINE_ABORT(OrientationMismatch);
CLWN_DEFINE_ABORT(DegenerateTriple);
CLWN_DEFINE_ABORT(SingularSystem);
CLWN_DEFINE_ABORT(StepUnderflow);
CLWN_DEFINE_ABORT(TripleCollision);
CLWN_DEFINE_ABORT(GuardTripped);
CLWN_DEFINE_ABORT(DenominatorVanishes);
CLWN_DEFINE_ABORT(SeedSwallowed);

#undef CLWN_DEFINE_ABORT

}  // namespace clwn
