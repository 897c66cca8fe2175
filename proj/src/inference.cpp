#include "mvlsw/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "mvlsw/error.hpp"
#include "mvlsw/parallel.hpp"
#include "mvlsw/simulate.hpp"
#include "mvlsw/spectrum.hpp"

namespace mvlsw {

namespace {

long floor_div2(long v) { return v >= 0 ? v / 2 : -((1 - v) / 2); }

std::size_t wrap(long v, std::size_t n) {
  const long m = static_cast<long>(n);
  return static_cast<std::size_t>(((v % m) + m) % m);
}

void check_products(const MvLswArray& spectrum, const AutoCorrProducts& products) {
  if (products.length() != spectrum.length() || static_cast<std::size_t>(products.levels()) != spectrum.levels())
    throw Error(ErrorCode::DimensionMismatch, "inner products do not match the spectrum dimensions");
}

// Covariance of I_{l1,.} and I_{l2,.} at lag lambda (second minus first
// location) and midpoint location c, for channel pair (p, q).
double covariance_term(const MvLswArray& s, const AutoCorrProducts& products, std::size_t p, std::size_t q, int l1,
                       int l2, long lambda, std::size_t c) {
  double gpq = 0.0, gpp = 0.0, gqq = 0.0;
  for (int h = 0; h < products.levels(); ++h) {
    const double b = products.B(lambda, l1, l2, h);
    const auto hu = static_cast<std::size_t>(h);
    gpq += b * s(p, q, hu, c);
    gpp += b * s(p, p, hu, c);
    gqq += b * s(q, q, hu, c);
  }
  return gpq * gpq + gpp * gqq;
}

SmoothingSpec resolve_smoothing(const MvLswArray& spectrum, const std::optional<SmoothingSpec>& explicit_spec) {
  const auto& recorded = spectrum.meta().smoothing;
  if (explicit_spec && recorded && !(*explicit_spec == *recorded))
    throw Error(ErrorCode::KernelMismatch, "kernel differs from the one recorded with the estimate");
  if (explicit_spec) return *explicit_spec;
  if (recorded) return *recorded;
  throw Error(ErrorCode::DomainError, "no smoothing kernel given and none recorded with the spectrum");
}

void check_kernel_widths(const SmoothingSpec& smoothing, const MvLswArray& spectrum, const AutoCorrProducts& products) {
  for (std::size_t l = 0; l < spectrum.levels(); ++l) {
    const int M = smoothing.half_width(static_cast<int>(l));
    if (2 * static_cast<std::size_t>(M) >= spectrum.length())
      throw Error(ErrorCode::KernelTooWide, "kernel half-width must be below T/2");
    if (2L * M > products.max_lag())
      throw Error(ErrorCode::IndexOutOfRange, "inner products cover lags up to " +
                                                  std::to_string(products.max_lag()) + ", variance needs " +
                                                  std::to_string(2 * M));
  }
}

}  // namespace

double periodogram_covariance(const MvLswArray& spectrum, const AutoCorrProducts& products, std::size_t p,
                              std::size_t q, int j, int l, long k, long m) {
  check_products(spectrum, products);
  const long T = static_cast<long>(spectrum.length());
  if (p >= spectrum.channels() || q >= spectrum.channels() || j < 0 || l < 0 || j >= products.levels() ||
      l >= products.levels() || k < 0 || m < 0 || k >= T || m >= T)
    throw Error(ErrorCode::IndexOutOfRange, "periodogram covariance index out of range");
  return covariance_term(spectrum, products, p, q, j, l, m - k, static_cast<std::size_t>((k + m) / 2));
}

double var_ews_at(const MvLswArray& spectrum, const AutoCorrProducts& products, const SmoothingSpec& smoothing,
                  std::size_t p, std::size_t q, int j, std::size_t k) {
  check_products(spectrum, products);
  check_kernel_widths(smoothing, spectrum, products);
  if (p >= spectrum.channels() || q >= spectrum.channels() || j < 0 || j >= products.levels() ||
      k >= spectrum.length())
    throw Error(ErrorCode::IndexOutOfRange, "variance index out of range");
  const Matrix& ainv = products.A_inverse();
  const int J = products.levels();
  const std::size_t T = spectrum.length();
  double total = 0.0;
  for (int l1 = 0; l1 < J; ++l1) {
    const SmoothingKernel w1 = smoothing.kernel(l1);
    for (int l2 = 0; l2 < J; ++l2) {
      const SmoothingKernel w2 = smoothing.kernel(l2);
      double inner = 0.0;
      for (int a = -w1.half_width(); a <= w1.half_width(); ++a)
        for (int b = -w2.half_width(); b <= w2.half_width(); ++b) {
          const std::size_t c = wrap(static_cast<long>(k) + floor_div2(a + b), T);
          inner += w1.weight(a) * w2.weight(b) * covariance_term(spectrum, products, p, q, l1, l2, b - a, c);
        }
      total += ainv(static_cast<std::size_t>(j), static_cast<std::size_t>(l1)) *
               ainv(static_cast<std::size_t>(j), static_cast<std::size_t>(l2)) * inner;
    }
  }
  return std::max(total, 0.0);
}

MvLswArray var_ews(const MvLswArray& spectrum, const AutoCorrProducts& products,
                   const std::optional<SmoothingSpec>& smoothing) {
  check_products(spectrum, products);
  const SmoothingSpec spec = resolve_smoothing(spectrum, smoothing);
  check_kernel_widths(spec, spectrum, products);

  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  const Matrix& ainv = products.A_inverse();
  MvLswArray out(P, J, T, ArrayKind::Variance, spectrum.meta());
  out.meta().smoothing = spec;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p; q < P; ++q) pairs.emplace_back(p, q);

  std::vector<SmoothingKernel> kernels;
  for (std::size_t l = 0; l < J; ++l) kernels.push_back(spec.kernel(static_cast<int>(l)));

  parallel_for(pairs.size(), [&](std::size_t pair_index) {
    const auto [p, q] = pairs[pair_index];
    // kterm[(l1 * J + l2) * T + k] = sum_{a,b} w1(a) w2(b) Cov_{l1,l2}(b - a, k + floor((a+b)/2))
    std::vector<double> kterm(J * J * T, 0.0);
    std::vector<double> table;
    std::vector<double> bh(J);
    std::vector<std::size_t> active;
    std::vector<double> prefix(2 * T + 1);
    std::vector<std::span<const double>> spq, spp, sqq;
    for (std::size_t h = 0; h < J; ++h) {
      spq.push_back(spectrum.series(p, q, h));
      spp.push_back(spectrum.series(p, p, h));
      sqq.push_back(spectrum.series(q, q, h));
    }
    for (std::size_t l1 = 0; l1 < J; ++l1)
      for (std::size_t l2 = l1; l2 < J; ++l2) {
        const SmoothingKernel& w1 = kernels[l1];
        const SmoothingKernel& w2 = kernels[l2];
        const int M1 = w1.half_width(), M2 = w2.half_width();
        const int L = M1 + M2;
        table.assign(static_cast<std::size_t>(2 * L + 1) * T, 0.0);
        for (int lambda = -L; lambda <= L; ++lambda) {
          active.clear();
          for (std::size_t h = 0; h < J; ++h) {
            bh[h] = products.B(lambda, static_cast<int>(l1), static_cast<int>(l2), static_cast<int>(h));
            if (bh[h] != 0.0) active.push_back(h);
          }
          double* row = &table[static_cast<std::size_t>(lambda + L) * T];
          if (active.empty()) continue;
          for (std::size_t c = 0; c < T; ++c) {
            double gpq = 0.0, gpp = 0.0, gqq = 0.0;
            for (std::size_t h : active) {
              gpq += bh[h] * spq[h][c];
              gpp += bh[h] * spp[h][c];
              gqq += bh[h] * sqq[h][c];
            }
            row[c] = gpq * gpq + gpp * gqq;
          }
        }
        // For fixed lag b - a = lambda the midpoint shift is a + floor(lambda/2),
        // so the (a, b) double sum is a window sum along c. Both kernels are
        // flat away from their ends: the flat part goes through prefix sums and
        // the few off-level weights are added separately.
        double* dst = &kterm[(l1 * J + l2) * T];
        const double flat = w1.weight(0) * w2.weight(0);
        for (int lambda = -L; lambda <= L; ++lambda) {
          const double* row = &table[static_cast<std::size_t>(lambda + L) * T];
          const int a_lo = std::max(-M1, -M2 - lambda), a_hi = std::min(M1, M2 - lambda);
          if (a_lo > a_hi) continue;
          const long h = floor_div2(lambda);
          const auto len = static_cast<std::size_t>(a_hi - a_lo + 1);
          prefix[0] = 0.0;
          for (std::size_t i = 0; i < 2 * T; ++i) prefix[i + 1] = prefix[i] + row[i < T ? i : i - T];
          for (std::size_t k = 0; k < T; ++k) {
            const std::size_t start = wrap(static_cast<long>(k) + a_lo + h, T);
            dst[k] += flat * (prefix[start + len] - prefix[start]);
          }
          for (int a = a_lo; a <= a_hi; ++a) {
            const double extra = w1.weight(a) * w2.weight(a + lambda) - flat;
            if (extra == 0.0) continue;
            const std::size_t shift = wrap(a + h, T);
            for (std::size_t k = 0; k < T; ++k) {
              const std::size_t c = k + shift;
              dst[k] += extra * row[c < T ? c : c - T];
            }
          }
        }
        if (l2 != l1) std::copy(dst, dst + T, &kterm[(l2 * J + l1) * T]);
      }

    std::vector<double> buf(T);
    for (std::size_t j = 0; j < J; ++j) {
      std::fill(buf.begin(), buf.end(), 0.0);
      for (std::size_t l1 = 0; l1 < J; ++l1)
        for (std::size_t l2 = 0; l2 < J; ++l2) {
          const double c = ainv(j, l1) * ainv(j, l2);
          const double* src = &kterm[(l1 * J + l2) * T];
          for (std::size_t k = 0; k < T; ++k) buf[k] += c * src[k];
        }
      for (double& v : buf) v = std::max(v, 0.0);
      out.set_series(p, q, j, buf);
    }
  });
  return out;
}

double gauss_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::DomainError, "quantile level must lie in (0, 1)");
  if (u > 0.5) return -gauss_quantile(1.0 - u);

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (u < p_low) {
    const double r = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else {
    const double r = u - 0.5;
    const double s = r * r;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  }
  // Halley refinement on the CDF.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - u;
  const double h = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - h / (1.0 + 0.5 * x * h);
}

namespace {

ArrayMeta bound_meta(const ArrayMeta& source) {
  ArrayMeta m = source;
  m.regularization_tol.reset();
  m.min_eigenvalue.reset();
  m.raw_min_eigenvalue.reset();
  return m;
}

}  // namespace

IntervalPair apx_ci(const MvLswArray& spectrum, const MvLswArray& variance, double alpha) {
  if (!spectrum.same_shape(variance))
    throw Error(ErrorCode::DimensionMismatch, "spectrum and variance differ in shape");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
  const double z = gauss_quantile(1.0 - alpha / 2.0);
  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  IntervalPair out{MvLswArray(P, J, T, spectrum.kind(), bound_meta(spectrum.meta())),
                   MvLswArray(P, J, T, spectrum.kind(), bound_meta(spectrum.meta())), alpha,
                   IntervalMethod::Analytic};
  std::vector<double> lo(T), hi(T);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p; q < P; ++q)
      for (std::size_t j = 0; j < J; ++j) {
        const auto s = spectrum.series(p, q, j);
        const auto v = variance.series(p, q, j);
        for (std::size_t k = 0; k < T; ++k) {
          const double half = z * std::sqrt(std::max(v[k], 0.0));
          lo[k] = s[k] - half;
          hi[k] = s[k] + half;
        }
        out.lower.set_series(p, q, j, lo);
        out.upper.set_series(p, q, j, hi);
      }
  return out;
}

namespace {

// Linear interpolation between order statistics (R's default quantile type).
double sorted_quantile(const std::vector<double>& sorted, double prob) {
  const double h = static_cast<double>(sorted.size() - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

BootstrapResult bootstrap_interval(const MvLswArray& spectrum, int reps, double alpha, std::uint64_t seed,
                                   const InnovationSpec& innovation) {
  if (reps < 2) throw Error(ErrorCode::DomainError, "bootstrap needs at least two replicates");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
  if (spectrum.kind() != ArrayKind::Spectrum) throw Error(ErrorCode::DomainError, "bootstrap needs a spectrum");
  const ArrayMeta& meta = spectrum.meta();
  if (!meta.smoothing)
    throw Error(ErrorCode::DomainError, "spectrum carries no estimation settings to re-estimate with");

  EstimateOptions options;
  options.family = meta.family;
  options.filter_number = meta.filter_number;
  options.kernel = meta.smoothing->name;
  for (int m : meta.smoothing->half_widths) options.kernel_params.push_back(m);
  options.bias_correct = meta.bias_corrected;
  options.tol = meta.regularization_tol;

  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  const auto system = build_wavelet_system(make_filter(meta.family, meta.filter_number), static_cast<int>(J));
  const auto products = autocorr_inner_products(system, T, {.max_lag = 0});

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p; q < P; ++q) pairs.emplace_back(p, q);
  const std::size_t per_rep = pairs.size() * J * T;
  const auto R = static_cast<std::size_t>(reps);
  std::vector<double> samples(per_rep * R);  // [element][replicate]

  parallel_for(R, [&](std::size_t r) {
    MvLswArray est;
    try {
      const TimeSeriesMatrix x = rmvlsw(spectrum, InnovationSource{innovation, derive_seed(seed, r)});
      est = mv_ews(x, options, products);
    } catch (const Error& e) {
      throw Error(ErrorCode::ReplicateFailed, "replicate " + std::to_string(r) + ": " + e.what());
    }
    std::size_t e = 0;
    for (const auto& [p, q] : pairs)
      for (std::size_t j = 0; j < J; ++j) {
        const auto s = est.series(p, q, j);
        for (std::size_t k = 0; k < T; ++k, ++e) samples[e * R + r] = s[k];
      }
  });

  const ArrayMeta out_meta = bound_meta(meta);
  BootstrapResult out{MvLswArray(P, J, T, ArrayKind::Spectrum, out_meta),
                      IntervalPair{MvLswArray(P, J, T, ArrayKind::Spectrum, out_meta),
                                   MvLswArray(P, J, T, ArrayKind::Spectrum, out_meta), alpha,
                                   IntervalMethod::Bootstrap}};
  std::vector<double> column(R);
  std::size_t e = 0;
  for (const auto& [p, q] : pairs)
    for (std::size_t j = 0; j < J; ++j)
      for (std::size_t k = 0; k < T; ++k, ++e) {
        std::copy_n(&samples[e * R], R, column.begin());
        std::sort(column.begin(), column.end());
        out.interval.lower.set(p, q, j, k, sorted_quantile(column, alpha / 2.0));
        out.median.set(p, q, j, k, sorted_quantile(column, 0.5));
        out.interval.upper.set(p, q, j, k, sorted_quantile(column, 1.0 - alpha / 2.0));
      }
  return out;
}

}  // namespace mvlsw
