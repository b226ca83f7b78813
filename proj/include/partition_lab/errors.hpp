#pragma once

#include <stdexcept>
#include <string>

namespace plab {

enum class ErrorCode {
  InvalidArgument = 1,
  DegenerateDomain,
  InvalidShape,
  NoConvergence,
  InvalidEigenfunction,
  NotApplicable,
  NotStrong,
  DegenerateTiling,
  TooManyParts,
  ReseedRequired,
  UnknownBound,
  InvalidConfig,
  Io,
  HardAssertion,
};

const char* to_string(ErrorCode code);

// Single exception type for the core library; the C API maps `code()` onto
// its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace plab
