#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holopush {

enum class ErrorKind {
  Domain,
  InconsistentHessian,
  Argument,
  DegenerateGradient,
  BranchDegeneracy,
  DiscTooSmall,
  Tangency,
  Configuration,
  Frame,
  Fit,
  CollarViolation,
  Divisor,
  Nonconvergence,
  Reindexing,
  Schema,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the pipeline carries a kind and a dotted stage tag such as
// "curve_detect.collar" so that reports can point at the stage that aborted.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& what)
      : std::runtime_error(what), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

}  // namespace holopush
