#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mvlsw/array.hpp"
#include "mvlsw/kernel.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// Non-decimated wavelet coefficients d[p][j][k], stored P x J x T.
class WaveletCoefficients {
 public:
  WaveletCoefficients(std::size_t channels, std::size_t levels, std::size_t length)
      : channels_(channels), levels_(levels), length_(length), data_(channels * levels * length, 0.0) {}

  std::size_t channels() const noexcept { return channels_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t length() const noexcept { return length_; }

  double operator()(std::size_t p, std::size_t j, std::size_t k) const { return data_[(p * levels_ + j) * length_ + k]; }
  double& operator()(std::size_t p, std::size_t j, std::size_t k) { return data_[(p * levels_ + j) * length_ + k]; }
  std::span<const double> level(std::size_t p, std::size_t j) const {
    return {data_.data() + (p * levels_ + j) * length_, length_};
  }
  std::span<double> level(std::size_t p, std::size_t j) { return {data_.data() + (p * levels_ + j) * length_, length_}; }

 private:
  std::size_t channels_, levels_, length_;
  std::vector<double> data_;
};

/// d_{j,k}^{(p)} = sum_t X_t^{(p)} psi_j(t - k) with t - k taken modulo T.
/// The system must have exactly log2(T) levels.
WaveletCoefficients ndwt_coefficients(const TimeSeriesMatrix& x, const DiscreteWaveletSystem& system);

/// I_{j,k} = d_{j,k} d_{j,k}^T.
MvLswArray raw_periodogram(const WaveletCoefficients& d, ArrayMeta meta = {});

/// Circular moving average in k with the kernel of each level. Throws
/// KernelTooWide when a half-width is not below T/2.
MvLswArray smooth_periodogram(const MvLswArray& periodogram, const SmoothingSpec& smoothing);
MvLswArray smooth_periodogram(const MvLswArray& periodogram, const SmoothingKernel& kernel);

/// S_j = sum_l (A^{-1})_{j,l} I~_l at every (p, q, k).
MvLswArray bias_correct(const MvLswArray& smoothed, const AutoCorrProducts& products);

/// Leave-one-out GCV for the linear smoother:
///   sum_j [ (J T P^2)^{-1} sum_{p,q,k} (I - I~)^2 ] / (1 - w_j(0))^2
/// which reduces to the single-kernel form when all levels share a kernel.
double gcv_score(const MvLswArray& raw, const MvLswArray& smoothed, const SmoothingSpec& smoothing);

struct EstimateOptions {
  WaveletFamily family = WaveletFamily::DaubExPhase;
  int filter_number = 1;
  KernelName kernel = KernelName::Daniell;
  /// One value for all levels or one per level; values are floored. Empty
  /// selects floor(sqrt(T)).
  std::vector<double> kernel_params;
  bool bias_correct = true;
  /// Eigenvalue floor applied to every slice; nullopt skips regularization.
  std::optional<double> tol = 1e-10;
};

SmoothingSpec make_smoothing_spec(KernelName name, std::span<const double> params, std::size_t length);

/// Full estimator: NDWT -> raw periodogram -> smoothing -> optional bias
/// correction -> optional regularization of each P x P slice.
MvLswArray mv_ews(const TimeSeriesMatrix& x, const EstimateOptions& options);
/// Same, reusing inner products built for the matching filter and length.
MvLswArray mv_ews(const TimeSeriesMatrix& x, const EstimateOptions& options, const AutoCorrProducts& products);

/// rho_j(k) = D S_j(k) D with D = diag(S^{(p,p)}_j(k)^{-1/2}).
MvLswArray coherence(const MvLswArray& spectrum);

/// Gamma_j(k) = -H G H with G = S_j(k)^{-1}, H = diag(G^{(p,p)}^{-1/2}).
MvLswArray partial_coherence(const MvLswArray& spectrum);

}  // namespace mvlsw
