#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mkcf {

/// Failure classes raised by the library. The CLI maps each class onto a
/// distinct exit status, so new kinds must be added to `exit_code_for` too.
enum class ErrorKind {
  kInvalidDimension,
  kDimensionMismatch,
  kSymmetryViolation,
  kOracleScale,
  kInvalidArgument,
  kConditioning,
  kDegenerateKernel,
  kNumerical,
  kOutOfFrame,
  kUnsupportedFeature,
  kPrecondition,
  kSequence,
  kParse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace mkcf
