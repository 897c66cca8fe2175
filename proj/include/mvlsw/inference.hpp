#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mvlsw/array.hpp"
#include "mvlsw/kernel.hpp"
#include "mvlsw/rng.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

/// Asymptotic covariance of two periodogram elements for channel pair (p, q):
///   [sum_h B_{j,l,h}(m-k) S_h^{(p,q)}(c)]^2 + prod_{r in {p,q}} sum_h B_{j,l,h}(m-k) S_h^{(r,r)}(c)
/// with the rescaled midpoint (k+m)/(2T) mapped to c = floor((k+m)/2).
/// The O(1/T) remainder is dropped. Throws IndexOutOfRange for indices
/// outside the array or a lag beyond the products' range.
double periodogram_covariance(const MvLswArray& spectrum, const AutoCorrProducts& products, std::size_t p,
                              std::size_t q, int j, int l, long k, long m);

/// Plug-in variance of every estimate element,
///   Var S_{j,k}^{(p,q)} = sum_{l1,l2} sum_{m1,m2} A^-1_{j,l1} A^-1_{j,l2} w(m1-k) w(m2-k) Cov(I_{l1,m1}, I_{l2,m2}),
/// with m1, m2 in [k-M, k+M] wrapped modulo T and negative totals clamped
/// to zero. The kernel is read from the spectrum's metadata; an explicit
/// kernel that disagrees with it throws KernelMismatch. The products need
/// max_lag >= 2 max(M).
MvLswArray var_ews(const MvLswArray& spectrum, const AutoCorrProducts& products,
                   const std::optional<SmoothingSpec>& smoothing = std::nullopt);

/// Variance of a single element, same formula as var_ews.
double var_ews_at(const MvLswArray& spectrum, const AutoCorrProducts& products, const SmoothingSpec& smoothing,
                  std::size_t p, std::size_t q, int j, std::size_t k);

enum class IntervalMethod { Analytic, Bootstrap };

struct IntervalPair {
  MvLswArray lower;
  MvLswArray upper;
  double alpha = 0.05;
  IntervalMethod method = IntervalMethod::Analytic;
};

/// Inverse standard normal CDF (Acklam's rational approximation refined by a
/// Halley step). Throws DomainError outside (0, 1).
double gauss_quantile(double u);

/// Point-wise interval S -/+ z_{1-alpha/2} sqrt(Var).
IntervalPair apx_ci(const MvLswArray& spectrum, const MvLswArray& variance, double alpha);

struct BootstrapResult {
  MvLswArray median;
  IntervalPair interval;
};

/// Simulates `reps` series from the spectrum, re-estimates each with the
/// settings recorded in its metadata and returns element-wise empirical
/// quantiles alpha/2, 0.5, 1-alpha/2 (linear interpolation between order
/// statistics). Replicate r uses seed derive_seed(seed, r).
BootstrapResult bootstrap_interval(const MvLswArray& spectrum, int reps, double alpha, std::uint64_t seed,
                                   const InnovationSpec& innovation = {});

}  // namespace mvlsw
