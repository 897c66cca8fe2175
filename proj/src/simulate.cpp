#include "mvlsw/simulate.hpp"

#include <algorithm>
#include <string>

#include "mvlsw/error.hpp"
#include "mvlsw/parallel.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

TransferField spectrum_to_transfer(const MvLswArray& spectrum) {
  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  TransferField field(P, J, T);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < T; ++k) {
      const SymMatrix slice = spectrum.slice(j, k);
      if (slice.max_abs() == 0.0) continue;
      try {
        field(j, k) = cholesky_lower(slice);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        try {
          field(j, k) = psd_sqrt(slice);
        } catch (const Error& inner) {
          throw Error(ErrorCode::IndefiniteSpectrum, "spectrum slice at level " + std::to_string(j + 1) +
                                                         ", location " + std::to_string(k) +
                                                         " is indefinite: " + inner.what());
        }
      }
    }
  return field;
}

TimeSeriesMatrix rmvlsw(const MvLswArray& spectrum, const InnovationSource& innovations) {
  const std::size_t P = spectrum.channels(), J = spectrum.levels(), T = spectrum.length();
  if (!is_dyadic(T) || static_cast<std::size_t>(dyadic_log2(T)) != J)
    throw Error(ErrorCode::NonDyadicLength, "spectrum length must be 2^J with J levels");
  const TransferField field = spectrum_to_transfer(spectrum);
  const auto system = build_wavelet_system(make_filter(spectrum.meta().family, spectrum.meta().filter_number),
                                           static_cast<int>(J));

  // Per-level contributions are summed in level order afterwards, so the
  // result does not depend on how levels are scheduled.
  std::vector<std::vector<double>> contributions(J);
  parallel_for(J, [&](std::size_t j) {
    auto gen = innovations.stream(j);
    const auto w = system.periodized_psi(static_cast<int>(j), T);
    const std::size_t support = std::min(system.psi(static_cast<int>(j)).size(), T);
    std::vector<double> x(T * P, 0.0);
    std::vector<double> z(P), y(P);
    for (std::size_t k = 0; k < T; ++k) {
      for (auto& v : z) v = gen();
      const Matrix& v = field(j, k);
      for (std::size_t p = 0; p < P; ++p) {
        double s = 0.0;
        for (std::size_t r = 0; r < P; ++r) s += v(r, p) * z[r];
        y[p] = s;
      }
      for (std::size_t n = 0; n < support; ++n) {
        const double wn = w[n];
        double* row = &x[((k + n) % T) * P];
        for (std::size_t p = 0; p < P; ++p) row[p] += y[p] * wn;
      }
    }
    contributions[j] = std::move(x);
  });

  std::vector<double> values(T * P, 0.0);
  for (const auto& c : contributions)
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += c[i];
  return TimeSeriesMatrix(T, P, std::move(values), spectrum.meta().channel_names);
}

MvLswArray build_eq3_fixture(std::size_t length) {
  if (length < 8 || !is_dyadic(length))
    throw Error(ErrorCode::NonDyadicLength, "fixture length must be a power of two >= 8");
  ArrayMeta meta;
  meta.family = WaveletFamily::DaubExPhase;
  meta.filter_number = 1;
  meta.channel_names = {"X1", "X2", "X3"};
  const std::size_t J = static_cast<std::size_t>(dyadic_log2(length));
  MvLswArray s(3, J, length, ArrayKind::Spectrum, meta);
  const double denom = static_cast<double>(length - 1);
  for (std::size_t k = 0; k < length; ++k) {
    const double u = static_cast<double>(k) / denom;
    s.set(0, 0, 1, k, 4.0 + 16.0 * u);
    s.set(1, 1, 1, k, 6.0);
    s.set(2, 2, 1, k, 20.0 - 14.0 * u);
    s.set(0, 1, 1, k, 2.0 + 8.0 * u);
    s.set(0, 2, 1, k, 2.0 + 8.0 * u);
    s.set(1, 2, 1, k, 1.0 + 4.0 * u);
  }
  return s;
}

}  // namespace mvlsw
