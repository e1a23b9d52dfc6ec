#include "holopush/error.hpp"

namespace holopush {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::InconsistentHessian: return "InconsistentHessian";
    case ErrorKind::Argument: return "ArgumentError";
    case ErrorKind::DegenerateGradient: return "DegenerateGradient";
    case ErrorKind::BranchDegeneracy: return "BranchDegeneracy";
    case ErrorKind::DiscTooSmall: return "DiscTooSmall";
    case ErrorKind::Tangency: return "TangencyError";
    case ErrorKind::Configuration: return "ConfigurationError";
    case ErrorKind::Frame: return "FrameError";
    case ErrorKind::Fit: return "FitError";
    case ErrorKind::CollarViolation: return "CollarViolation";
    case ErrorKind::Divisor: return "DivisorError";
    case ErrorKind::Nonconvergence: return "NonconvergenceError";
    case ErrorKind::Reindexing: return "ReindexingError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace holopush
