#include "mvlsw/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mvlsw/error.hpp"
#include "mvlsw/parallel.hpp"

namespace mvlsw {

WaveletCoefficients ndwt_coefficients(const TimeSeriesMatrix& x, const DiscreteWaveletSystem& system) {
  const std::size_t T = x.length();
  const std::size_t P = x.channels();
  const int J = x.levels();
  if (system.levels() != J)
    throw Error(ErrorCode::DimensionMismatch, "wavelet system has " + std::to_string(system.levels()) +
                                                  " levels, series needs " + std::to_string(J));
  WaveletCoefficients d(P, static_cast<std::size_t>(J), T);
  for (int j = 0; j < J; ++j) {
    const auto w = system.periodized_psi(j, T);
    const std::size_t support = std::min(system.psi(j).size(), T);
    for (std::size_t p = 0; p < P; ++p) {
      const auto xp = x.channel(p);
      auto out = d.level(p, static_cast<std::size_t>(j));
      for (std::size_t k = 0; k < T; ++k) {
        double s = 0.0;
        for (std::size_t n = 0; n < support; ++n) s += w[n] * xp[(k + n) % T];
        out[k] = s;
      }
    }
  }
  return d;
}

MvLswArray raw_periodogram(const WaveletCoefficients& d, ArrayMeta meta) {
  const std::size_t P = d.channels(), J = d.levels(), T = d.length();
  MvLswArray out(P, J, T, ArrayKind::Periodogram, std::move(meta));
  std::vector<double> buf(T);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p; q < P; ++q)
      for (std::size_t j = 0; j < J; ++j) {
        const auto a = d.level(p, j);
        const auto b = d.level(q, j);
        for (std::size_t k = 0; k < T; ++k) buf[k] = a[k] * b[k];
        out.set_series(p, q, j, buf);
      }
  return out;
}

MvLswArray smooth_periodogram(const MvLswArray& periodogram, const SmoothingSpec& smoothing) {
  const std::size_t P = periodogram.channels(), J = periodogram.levels(), T = periodogram.length();
  MvLswArray out(P, J, T, periodogram.kind(), periodogram.meta());
  out.meta().smoothing = smoothing;
  std::vector<double> buf(T);
  for (std::size_t j = 0; j < J; ++j) {
    const SmoothingKernel kernel = smoothing.kernel(static_cast<int>(j));
    const int M = kernel.half_width();
    if (2 * static_cast<std::size_t>(M) >= T)
      throw Error(ErrorCode::KernelTooWide,
                  "kernel half-width " + std::to_string(M) + " must be below T/2 = " + std::to_string(T / 2));
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = p; q < P; ++q) {
        const auto in = periodogram.series(p, q, j);
        for (std::size_t k = 0; k < T; ++k) {
          double s = 0.0;
          for (int m = -M; m <= M; ++m)
            s += kernel.weight(m) * in[(k + T + static_cast<std::size_t>(m + M) - static_cast<std::size_t>(M)) % T];
          buf[k] = s;
        }
        out.set_series(p, q, j, buf);
      }
  }
  return out;
}

MvLswArray smooth_periodogram(const MvLswArray& periodogram, const SmoothingKernel& kernel) {
  return smooth_periodogram(periodogram, SmoothingSpec{kernel.name(), {kernel.half_width()}});
}

MvLswArray bias_correct(const MvLswArray& smoothed, const AutoCorrProducts& products) {
  const std::size_t P = smoothed.channels(), J = smoothed.levels(), T = smoothed.length();
  if (static_cast<std::size_t>(products.levels()) != J)
    throw Error(ErrorCode::DimensionMismatch, "inner products and periodogram disagree on the number of levels");
  const Matrix& ainv = products.A_inverse();
  MvLswArray out(P, J, T, smoothed.kind(), smoothed.meta());
  out.meta().bias_corrected = true;
  std::vector<double> buf(T);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = p; q < P; ++q)
      for (std::size_t j = 0; j < J; ++j) {
        std::fill(buf.begin(), buf.end(), 0.0);
        for (std::size_t l = 0; l < J; ++l) {
          const double c = ainv(j, l);
          const auto in = smoothed.series(p, q, l);
          for (std::size_t k = 0; k < T; ++k) buf[k] += c * in[k];
        }
        out.set_series(p, q, j, buf);
      }
  return out;
}

double gcv_score(const MvLswArray& raw, const MvLswArray& smoothed, const SmoothingSpec& smoothing) {
  if (!raw.same_shape(smoothed)) throw Error(ErrorCode::DimensionMismatch, "GCV inputs differ in shape");
  const std::size_t P = raw.channels(), J = raw.levels(), T = raw.length();
  const double n = static_cast<double>(J * T * P * P);
  double total = 0.0;
  for (std::size_t j = 0; j < J; ++j) {
    const double w0 = smoothing.kernel(static_cast<int>(j)).weight(0);
    if (w0 >= 1.0) throw Error(ErrorCode::DegenerateKernel, "kernel centre weight must be below one");
    double rss = 0.0;
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = 0; q < P; ++q) {
        const auto a = raw.series(p, q, j);
        const auto b = smoothed.series(p, q, j);
        for (std::size_t k = 0; k < T; ++k) rss += (a[k] - b[k]) * (a[k] - b[k]);
      }
    total += rss / n / ((1.0 - w0) * (1.0 - w0));
  }
  return total;
}

SmoothingSpec make_smoothing_spec(KernelName name, std::span<const double> params, std::size_t length) {
  SmoothingSpec spec{name, {}};
  if (params.empty()) {
    spec.half_widths.push_back(static_cast<int>(std::floor(std::sqrt(static_cast<double>(length)))));
    return spec;
  }
  for (double v : params) {
    if (!std::isfinite(v) || v < 1.0) throw Error(ErrorCode::DomainError, "kernel parameter must be >= 1");
    spec.half_widths.push_back(static_cast<int>(std::floor(v)));
  }
  return spec;
}

namespace {

void check_options(const TimeSeriesMatrix& x, const EstimateOptions& options, const AutoCorrProducts& products) {
  if (products.length() != x.length() || products.levels() != x.levels() || products.filter().number != options.filter_number ||
      products.filter().family != options.family)
    throw Error(ErrorCode::DimensionMismatch, "inner products were built for a different filter or length");
  if (options.tol && !(*options.tol > 0.0))
    throw Error(ErrorCode::DomainError, "regularization tolerance must be positive");
  if (!options.kernel_params.empty() && options.kernel_params.size() != 1 &&
      options.kernel_params.size() != static_cast<std::size_t>(x.levels()))
    throw Error(ErrorCode::DimensionMismatch, "per-level kernel parameters must have one entry per level");
}

}  // namespace

MvLswArray mv_ews(const TimeSeriesMatrix& x, const EstimateOptions& options) {
  const auto system = build_wavelet_system(make_filter(options.family, options.filter_number), x.levels());
  const auto products = autocorr_inner_products(system, x.length(), {.max_lag = 0});
  return mv_ews(x, options, products);
}

MvLswArray mv_ews(const TimeSeriesMatrix& x, const EstimateOptions& options, const AutoCorrProducts& products) {
  check_options(x, options, products);
  const auto system = build_wavelet_system(products.filter(), x.levels());
  const SmoothingSpec smoothing = make_smoothing_spec(options.kernel, options.kernel_params, x.length());

  ArrayMeta meta;
  meta.family = options.family;
  meta.filter_number = options.filter_number;
  meta.channel_names = x.channel_names();

  const MvLswArray raw = raw_periodogram(ndwt_coefficients(x, system), meta);
  MvLswArray est = smooth_periodogram(raw, smoothing);
  const double gcv = gcv_score(raw, est, smoothing);
  if (options.bias_correct) est = bias_correct(est, products);
  est.set_kind(ArrayKind::Spectrum);

  const std::size_t J = est.levels(), T = est.length();
  std::vector<double> before(J, std::numeric_limits<double>::infinity());
  std::vector<double> after(J, std::numeric_limits<double>::infinity());
  parallel_for(J, [&](std::size_t j) {
    for (std::size_t k = 0; k < T; ++k) {
      const SymMatrix slice = est.slice(j, k);
      double lo = 0.0, hi = 0.0;
      if (options.tol) {
        const SymMatrix reg = regularize(slice, *options.tol, &lo, &hi);
        if (lo < *options.tol) est.set_slice(j, k, reg);
      } else {
        lo = hi = min_eigenvalue(slice);
      }
      before[j] = std::min(before[j], lo);
      after[j] = std::min(after[j], hi);
    }
  });

  ArrayMeta& m = est.meta();
  m.smoothing = smoothing;
  m.bias_corrected = options.bias_correct;
  m.regularization_tol = options.tol;
  m.raw_min_eigenvalue = *std::min_element(before.begin(), before.end());
  m.min_eigenvalue = *std::min_element(after.begin(), after.end());
  m.gcv = gcv;
  return est;
}

MvLswArray coherence(const MvLswArray& spectrum) {
  if (spectrum.kind() != ArrayKind::Spectrum)
    throw Error(ErrorCode::DomainError, "coherence needs a spectrum, got " + std::string(to_string(spectrum.kind())));
  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  MvLswArray out(P, J, T, ArrayKind::Coherence, spectrum.meta());
  std::vector<double> scale(P);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < T; ++k) {
      for (std::size_t p = 0; p < P; ++p) {
        const double s = spectrum(p, p, j, k);
        if (!(s > 0.0))
          throw Error(ErrorCode::ZeroDiagonal, "non-positive auto-spectrum at channel " + std::to_string(p + 1) +
                                                   ", level " + std::to_string(j + 1) + ", location " +
                                                   std::to_string(k));
        scale[p] = 1.0 / std::sqrt(s);
      }
      for (std::size_t p = 0; p < P; ++p) {
        out.set(p, p, j, k, 1.0);
        for (std::size_t q = p + 1; q < P; ++q)
          out.set(p, q, j, k, std::clamp(scale[p] * spectrum(p, q, j, k) * scale[q], -1.0, 1.0));
      }
    }
  return out;
}

MvLswArray partial_coherence(const MvLswArray& spectrum) {
  if (spectrum.kind() != ArrayKind::Spectrum)
    throw Error(ErrorCode::DomainError,
                "partial coherence needs a spectrum, got " + std::string(to_string(spectrum.kind())));
  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  MvLswArray out(P, J, T, ArrayKind::PartialCoherence, spectrum.meta());
  std::vector<double> scale(P);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < T; ++k) {
      SymMatrix g;
      try {
        g = sym_inverse(spectrum.slice(j, k));
      } catch (const Error& e) {
        throw Error(ErrorCode::NotPositiveDefinite, "spectrum slice at level " + std::to_string(j + 1) +
                                                        ", location " + std::to_string(k) + ": " + e.what());
      }
      for (std::size_t p = 0; p < P; ++p) scale[p] = 1.0 / std::sqrt(g(p, p));
      for (std::size_t p = 0; p < P; ++p) {
        out.set(p, p, j, k, -1.0);
        for (std::size_t q = p + 1; q < P; ++q)
          out.set(p, q, j, k, std::clamp(-scale[p] * g(p, q) * scale[q], -1.0, 1.0));
      }
    }
  return out;
}

}  // namespace mvlsw
