#include "mkcf/errors.hpp"

namespace mkcf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kDimensionMismatch: return "dimension-mismatch";
    case ErrorKind::kSymmetryViolation: return "symmetry-violation";
    case ErrorKind::kOracleScale: return "oracle-scale";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kConditioning: return "conditioning";
    case ErrorKind::kDegenerateKernel: return "degenerate-kernel";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kOutOfFrame: return "out-of-frame";
    case ErrorKind::kUnsupportedFeature: return "unsupported-feature";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kSequence: return "sequence";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void raise(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace mkcf
