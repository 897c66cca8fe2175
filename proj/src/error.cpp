#include "mvlsw/error.hpp"

namespace mvlsw {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedFilter: return "UnsupportedFilter";
    case ErrorCode::SingularInnerProductMatrix: return "SingularInnerProductMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::IndefiniteMatrix: return "IndefiniteMatrix";
    case ErrorCode::NonDyadicLength: return "NonDyadicLength";
    case ErrorCode::KernelTooWide: return "KernelTooWide";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::ZeroDiagonal: return "ZeroDiagonal";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::KernelMismatch: return "KernelMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ReplicateFailed: return "ReplicateFailed";
    case ErrorCode::IndefiniteSpectrum: return "IndefiniteSpectrum";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::InfoMismatch: return "InfoMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

}  // namespace mvlsw
