#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "mvlsw/matops.hpp"

namespace mvlsw {

// Level convention used throughout the library: level index 0 is the finest
// scale ("level 1" in the usual 1-based notation) and index J-1 the coarsest.

enum class WaveletFamily { DaubExPhase };

std::string_view to_string(WaveletFamily family);
WaveletFamily parse_wavelet_family(std::string_view name);

struct WaveletFilter {
  WaveletFamily family = WaveletFamily::DaubExPhase;
  int number = 1;  // vanishing moments
  std::vector<double> lowpass;
  std::vector<double> highpass;  // highpass[k] = (-1)^k lowpass[L-1-k]

  std::size_t length() const noexcept { return lowpass.size(); }
};

/// Extremal-phase Daubechies filter with `number` vanishing moments
/// (number 1 is Haar). Throws UnsupportedFilter outside 1..10.
WaveletFilter make_filter(WaveletFamily family, int number);

/// Raw lowpass table entry, exposed for table validation.
std::span<const double> daubechies_lowpass(int number);

/// Non-decimated discrete wavelets psi_j for j = 0..J-1, each stored on its
/// support starting at offset 0. psi_0 is the highpass filter; psi_{j+1} is
/// psi_j upsampled by two and convolved with the lowpass filter. Every psi_j
/// has unit Euclidean norm.
class DiscreteWaveletSystem {
 public:
  DiscreteWaveletSystem(WaveletFilter filter, int levels);

  const WaveletFilter& filter() const noexcept { return filter_; }
  int levels() const noexcept { return static_cast<int>(psi_.size()); }
  std::span<const double> psi(int j) const { return psi_.at(static_cast<std::size_t>(j)); }

  /// psi_j folded onto a circle of length T: entry n holds the sum of
  /// psi_j(m) over m = n (mod T).
  std::vector<double> periodized_psi(int j, std::size_t length) const;

 private:
  WaveletFilter filter_;
  std::vector<std::vector<double>> psi_;
};

DiscreteWaveletSystem build_wavelet_system(const WaveletFilter& filter, int levels);

/// Finite sequence on integer lags [first_lag, first_lag + values.size()).
struct LaggedSequence {
  long first_lag = 0;
  std::vector<double> values;

  long last_lag() const noexcept { return first_lag + static_cast<long>(values.size()) - 1; }
  double at(long lag) const noexcept {
    const long i = lag - first_lag;
    return (i < 0 || i >= static_cast<long>(values.size())) ? 0.0 : values[static_cast<std::size_t>(i)];
  }
};

/// Cross-level autocorrelation wavelet Psi_{j,l}(tau) = sum_n psi_j(n) psi_l(n - tau),
/// which equals sum_k psi_{j,k}(0) psi_{l,k+tau}(0) for psi_{j,k}(t) = psi_j(t - k).
double autocorr_wavelet(const DiscreteWaveletSystem& system, int j, int l, long tau);

/// Psi_{j,l} over its whole support [-(len_l - 1), len_j - 1].
LaggedSequence autocorr_wavelet_sequence(const DiscreteWaveletSystem& system, int j, int l);

enum class InnerProductMethod { Automatic, Direct, Fft };

struct InnerProductOptions {
  long max_lag = -1;  // -1 means the full range [-T, T]
  InnerProductMethod method = InnerProductMethod::Automatic;
};

/// B_{j,l,h}(lambda) = sum_tau Psi_{j,h}(tau) Psi_{l,h}(tau - lambda) for
/// lambda in [-max_lag, max_lag], plus A_{j,l} = B_{j,j,l}(0) and its inverse.
/// Storage is dense, (2 max_lag + 1) J^3 doubles.
class AutoCorrProducts {
 public:
  AutoCorrProducts() = default;

  int levels() const noexcept { return levels_; }
  long max_lag() const noexcept { return max_lag_; }
  std::size_t length() const noexcept { return length_; }
  const WaveletFilter& filter() const noexcept { return filter_; }

  /// Throws IndexOutOfRange for |lag| > max_lag or levels outside [0, J).
  double B(long lag, int j, int l, int h) const;

  const Matrix& A() const noexcept { return a_; }
  const Matrix& A_inverse() const noexcept { return a_inv_; }

 private:
  friend AutoCorrProducts autocorr_inner_products(const DiscreteWaveletSystem&, std::size_t,
                                                  const InnerProductOptions&);
  std::size_t index(long lag, int j, int l, int h) const noexcept {
    const auto J = static_cast<std::size_t>(levels_);
    return ((static_cast<std::size_t>(lag + max_lag_) * J + static_cast<std::size_t>(j)) * J +
            static_cast<std::size_t>(l)) * J + static_cast<std::size_t>(h);
  }

  WaveletFilter filter_;
  int levels_ = 0;
  long max_lag_ = 0;
  std::size_t length_ = 0;
  std::vector<double> b_;
  Matrix a_;
  Matrix a_inv_;
};

/// Requires T dyadic with 1 <= system.levels() <= log2(T) and T <= 2^14.
/// Throws SingularInnerProductMatrix when the reciprocal condition number of
/// A falls below 1e-14.
AutoCorrProducts autocorr_inner_products(const DiscreteWaveletSystem& system, std::size_t length,
                                         const InnerProductOptions& options = {});

bool is_dyadic(std::size_t n) noexcept;
int dyadic_log2(std::size_t n) noexcept;

}  // namespace mvlsw
