#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mvlsw {

enum class ErrorCode {
  UnsupportedFilter,
  SingularInnerProductMatrix,
  NoConvergence,
  NotPositiveDefinite,
  IndefiniteMatrix,
  NonDyadicLength,
  KernelTooWide,
  DegenerateKernel,
  ZeroDiagonal,
  IndexOutOfRange,
  KernelMismatch,
  DimensionMismatch,
  DomainError,
  ReplicateFailed,
  IndefiniteSpectrum,
  ParseError,
  NonPositiveValue,
  InfoMismatch,
  IoError,
  UsageError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI prints `error: <Code>: <message>` on a single line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mvlsw
