#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mvlsw/kernel.hpp"
#include "mvlsw/matops.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// T x P observations with T = 2^J, J >= 2, all values finite.
/// Values are stored row-major: value(t, p) = values[t * P + p].
class TimeSeriesMatrix {
 public:
  TimeSeriesMatrix(std::size_t length, std::size_t channels, std::vector<double> values,
                   std::vector<std::string> channel_names = {}, std::vector<double> sample_times = {});

  std::size_t length() const noexcept { return length_; }
  std::size_t channels() const noexcept { return channels_; }
  int levels() const noexcept { return dyadic_log2(length_); }

  double operator()(std::size_t t, std::size_t p) const { return values_[t * channels_ + p]; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double> channel(std::size_t p) const;

  const std::vector<std::string>& channel_names() const noexcept { return channel_names_; }
  const std::vector<double>& sample_times() const noexcept { return sample_times_; }

 private:
  std::size_t length_;
  std::size_t channels_;
  std::vector<double> values_;
  std::vector<std::string> channel_names_;
  std::vector<double> sample_times_;
};

enum class ArrayKind { Spectrum, Periodogram, Coherence, PartialCoherence, Variance };

std::string_view to_string(ArrayKind kind);
ArrayKind parse_array_kind(std::string_view name);

struct ArrayMeta {
  WaveletFamily family = WaveletFamily::DaubExPhase;
  int filter_number = 1;
  std::optional<SmoothingSpec> smoothing;
  bool bias_corrected = false;
  std::optional<double> regularization_tol;
  std::optional<double> min_eigenvalue;      // over all (j, k) slices, after regularization
  std::optional<double> raw_min_eigenvalue;  // same, before regularization
  std::optional<double> gcv;
  std::vector<std::string> channel_names;

  friend bool operator==(const ArrayMeta&, const ArrayMeta&) = default;
};

/// P x P x J x T array symmetric in its two channel axes. Element writes go
/// through set(), set_series() or set_slice(), which keep both triangles equal.
class MvLswArray {
 public:
  MvLswArray() = default;
  MvLswArray(std::size_t channels, std::size_t levels, std::size_t length, ArrayKind kind, ArrayMeta meta = {});

  std::size_t channels() const noexcept { return channels_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t length() const noexcept { return length_; }
  ArrayKind kind() const noexcept { return kind_; }
  void set_kind(ArrayKind kind) noexcept { kind_ = kind; }
  const ArrayMeta& meta() const noexcept { return meta_; }
  ArrayMeta& meta() noexcept { return meta_; }

  double operator()(std::size_t p, std::size_t q, std::size_t j, std::size_t k) const {
    return data_[offset(p, q, j) + k];
  }
  double at(std::size_t p, std::size_t q, std::size_t j, std::size_t k) const;
  void set(std::size_t p, std::size_t q, std::size_t j, std::size_t k, double v) {
    data_[offset(p, q, j) + k] = v;
    data_[offset(q, p, j) + k] = v;
  }

  /// Values over k = 0..T-1 for a channel pair and level.
  std::span<const double> series(std::size_t p, std::size_t q, std::size_t j) const {
    return {data_.data() + offset(p, q, j), length_};
  }
  void set_series(std::size_t p, std::size_t q, std::size_t j, std::span<const double> values);

  SymMatrix slice(std::size_t j, std::size_t k) const;
  void set_slice(std::size_t j, std::size_t k, const SymMatrix& m);

  std::span<const double> data() const noexcept { return data_; }
  bool same_shape(const MvLswArray& other) const noexcept {
    return channels_ == other.channels_ && levels_ == other.levels_ && length_ == other.length_;
  }

  friend bool operator==(const MvLswArray&, const MvLswArray&) = default;

 private:
  std::size_t offset(std::size_t p, std::size_t q, std::size_t j) const noexcept {
    return ((p * channels_ + q) * levels_ + j) * length_;
  }

  std::size_t channels_ = 0;
  std::size_t levels_ = 0;
  std::size_t length_ = 0;
  ArrayKind kind_ = ArrayKind::Spectrum;
  ArrayMeta meta_;
  std::vector<double> data_;
};

}  // namespace mvlsw
