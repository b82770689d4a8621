#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace plap {

enum class ErrorCode {
  CriticalPoint,
  NonFinite,
  NonPositive,
  StencilFailure,
  CenterSingularity,
  QuadratureFailure,
  DomainError,
  MissingAlpha,
  DegenerateFit,
  Unbounded,
  StepFailure,
  InvalidInput,
  NoConvergence,
  InterpolationDomain,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace plap
