#include "mvlsw/array.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mvlsw/error.hpp"

namespace mvlsw {

std::string_view to_string(KernelName name) {
  switch (name) {
    case KernelName::Daniell: return "daniell";
    case KernelName::ModifiedDaniell: return "modified-daniell";
  }
  return "daniell";
}

KernelName parse_kernel_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "daniell") return KernelName::Daniell;
  if (lower == "modified-daniell" || lower == "modified.daniell") return KernelName::ModifiedDaniell;
  throw Error(ErrorCode::DomainError, "unknown kernel '" + std::string(name) + "'");
}

SmoothingKernel::SmoothingKernel(KernelName name, int half_width) : name_(name), half_width_(half_width) {
  if (half_width < 1) throw Error(ErrorCode::DomainError, "kernel half-width must be at least 1");
  const auto n = static_cast<std::size_t>(2 * half_width + 1);
  if (name == KernelName::Daniell) {
    weights_.assign(n, 1.0 / static_cast<double>(n));
  } else {
    weights_.assign(n, 1.0 / (2.0 * half_width));
    weights_.front() = weights_.back() = 1.0 / (4.0 * half_width);
  }
}

int SmoothingSpec::half_width(int level) const {
  if (half_widths.empty()) throw Error(ErrorCode::DimensionMismatch, "smoothing spec has no half-width");
  if (half_widths.size() == 1) return half_widths.front();
  if (level < 0 || static_cast<std::size_t>(level) >= half_widths.size())
    throw Error(ErrorCode::DimensionMismatch,
                "per-level smoothing spec has no entry for level index " + std::to_string(level));
  return half_widths[static_cast<std::size_t>(level)];
}

TimeSeriesMatrix::TimeSeriesMatrix(std::size_t length, std::size_t channels, std::vector<double> values,
                                   std::vector<std::string> channel_names, std::vector<double> sample_times)
    : length_(length),
      channels_(channels),
      values_(std::move(values)),
      channel_names_(std::move(channel_names)),
      sample_times_(std::move(sample_times)) {
  if (length < 4 || !is_dyadic(length))
    throw Error(ErrorCode::NonDyadicLength,
                "series length " + std::to_string(length) + " is not 2^J with J >= 2");
  if (channels == 0) throw Error(ErrorCode::DimensionMismatch, "series has no channels");
  if (values_.size() != length * channels)
    throw Error(ErrorCode::DimensionMismatch, "series value count does not match T x P");
  if (!channel_names_.empty() && channel_names_.size() != channels)
    throw Error(ErrorCode::DimensionMismatch, "channel name count does not match P");
  if (!sample_times_.empty() && sample_times_.size() != length)
    throw Error(ErrorCode::DimensionMismatch, "sample time count does not match T");
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCode::DomainError, "series contains non-finite values");
}

std::vector<double> TimeSeriesMatrix::channel(std::size_t p) const {
  std::vector<double> out(length_);
  for (std::size_t t = 0; t < length_; ++t) out[t] = values_[t * channels_ + p];
  return out;
}

std::string_view to_string(ArrayKind kind) {
  switch (kind) {
    case ArrayKind::Spectrum: return "spectrum";
    case ArrayKind::Periodogram: return "periodogram";
    case ArrayKind::Coherence: return "coherence";
    case ArrayKind::PartialCoherence: return "partial-coherence";
    case ArrayKind::Variance: return "variance";
  }
  return "spectrum";
}

ArrayKind parse_array_kind(std::string_view name) {
  for (ArrayKind k : {ArrayKind::Spectrum, ArrayKind::Periodogram, ArrayKind::Coherence,
                      ArrayKind::PartialCoherence, ArrayKind::Variance})
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::ParseError, "unknown array kind '" + std::string(name) + "'");
}

MvLswArray::MvLswArray(std::size_t channels, std::size_t levels, std::size_t length, ArrayKind kind,
                       ArrayMeta meta)
    : channels_(channels),
      levels_(levels),
      length_(length),
      kind_(kind),
      meta_(std::move(meta)),
      data_(channels * channels * levels * length, 0.0) {
  if (channels == 0 || levels == 0 || length == 0)
    throw Error(ErrorCode::DimensionMismatch, "array dimensions must be positive");
}

double MvLswArray::at(std::size_t p, std::size_t q, std::size_t j, std::size_t k) const {
  if (p >= channels_ || q >= channels_ || j >= levels_ || k >= length_)
    throw Error(ErrorCode::IndexOutOfRange, "array index out of range");
  return (*this)(p, q, j, k);
}

void MvLswArray::set_series(std::size_t p, std::size_t q, std::size_t j, std::span<const double> values) {
  if (values.size() != length_) throw Error(ErrorCode::DimensionMismatch, "series length mismatch");
  std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(offset(p, q, j)));
  if (p != q) std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(offset(q, p, j)));
}

SymMatrix MvLswArray::slice(std::size_t j, std::size_t k) const {
  SymMatrix m(channels_);
  for (std::size_t p = 0; p < channels_; ++p)
    for (std::size_t q = p; q < channels_; ++q) m.set(p, q, (*this)(p, q, j, k));
  return m;
}

void MvLswArray::set_slice(std::size_t j, std::size_t k, const SymMatrix& m) {
  if (m.dim() != channels_) throw Error(ErrorCode::DimensionMismatch, "slice dimension mismatch");
  for (std::size_t p = 0; p < channels_; ++p)
    for (std::size_t q = p; q < channels_; ++q) set(p, q, j, k, m(p, q));
}

}  // namespace mvlsw
