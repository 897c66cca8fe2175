#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "detail/neumaier.hpp"
#include "mvlsw/error.hpp"
#include "mvlsw/parallel.hpp"
#include "mvlsw/wavelet.hpp"

namespace mvlsw {

namespace {

constexpr std::size_t kMaxLength = std::size_t{1} << 14;
constexpr double kMinRcond = 1e-14;

struct Triple {
  int j, l, h;
};

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

// Owns one r2c and one c2r plan of length n; execution through the new-array
// interface is thread-safe, planning is serialised.
class FftPlans {
 public:
  explicit FftPlans(std::size_t n) : n_(n) {
    std::vector<double> real(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    std::lock_guard lock(fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()), flags);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(spec.data()),
                                     real.data(), flags);
  }
  ~FftPlans() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  std::vector<std::complex<double>> forward(std::span<const double> x) const {
    std::vector<double> in(n_, 0.0);
    std::copy(x.begin(), x.end(), in.begin());
    std::vector<std::complex<double>> out(n_ / 2 + 1);
    fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }

  // Consumes `spec`.
  std::vector<double> backward(std::vector<std::complex<double>>& spec) const {
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
    return out;
  }

 private:
  std::size_t n_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace

double AutoCorrProducts::B(long lag, int j, int l, int h) const {
  if (lag < -max_lag_ || lag > max_lag_)
    throw Error(ErrorCode::IndexOutOfRange,
                "lag " + std::to_string(lag) + " outside [-" + std::to_string(max_lag_) + ", " +
                    std::to_string(max_lag_) + "]");
  if (j < 0 || l < 0 || h < 0 || j >= levels_ || l >= levels_ || h >= levels_)
    throw Error(ErrorCode::IndexOutOfRange, "level index outside [0, J)");
  return b_[index(lag, j, l, h)];
}

AutoCorrProducts autocorr_inner_products(const DiscreteWaveletSystem& system, std::size_t length,
                                         const InnerProductOptions& options) {
  if (length < 2 || !is_dyadic(length))
    throw Error(ErrorCode::NonDyadicLength, "length " + std::to_string(length) + " is not a power of two");
  if (length > kMaxLength)
    throw Error(ErrorCode::DomainError, "inner products are limited to T <= 16384 (dense O(T J^3) storage)");
  const int max_levels = dyadic_log2(length);
  if (system.levels() < 1 || system.levels() > max_levels)
    throw Error(ErrorCode::DimensionMismatch, "wavelet system has " + std::to_string(system.levels()) +
                                                  " levels, expected 1..log2(T) = " + std::to_string(max_levels));
  const int J = system.levels();
  const long T = static_cast<long>(length);
  const long max_lag = options.max_lag < 0 ? T : std::min(options.max_lag, T);

  AutoCorrProducts out;
  out.filter_ = system.filter();
  out.levels_ = J;
  out.max_lag_ = max_lag;
  out.length_ = length;
  const auto Ju = static_cast<std::size_t>(J);
  out.b_.assign(static_cast<std::size_t>(2 * max_lag + 1) * Ju * Ju * Ju, 0.0);

  std::vector<long> len(Ju);
  for (int j = 0; j < J; ++j) len[static_cast<std::size_t>(j)] = static_cast<long>(system.psi(j).size());
  auto lag_window = [&](const Triple& t) {
    // Support of B_{j,l,h}: [-(len_h + len_l - 2), len_j + len_h - 2].
    const long lo = -(len[static_cast<std::size_t>(t.h)] + len[static_cast<std::size_t>(t.l)] - 2);
    const long hi = len[static_cast<std::size_t>(t.j)] + len[static_cast<std::size_t>(t.h)] - 2;
    return std::pair{std::max(lo, t.j == t.l ? 0L : -max_lag), std::min(hi, max_lag)};
  };

  std::vector<Triple> triples;
  for (int j = 0; j < J; ++j)
    for (int l = j; l < J; ++l)
      for (int h = 0; h < J; ++h) triples.push_back({j, l, h});

  long max_width = 0;
  double direct_cost = 0.0;
  for (const auto& t : triples) {
    const auto [lo, hi] = lag_window(t);
    const long width = len[static_cast<std::size_t>(t.j)] + len[static_cast<std::size_t>(t.l)] +
                       2 * len[static_cast<std::size_t>(t.h)] - 3;
    max_width = std::max(max_width, width);
    const long overlap = std::min(len[static_cast<std::size_t>(t.j)], len[static_cast<std::size_t>(t.l)]) +
                         len[static_cast<std::size_t>(t.h)] - 1;
    if (hi >= lo) direct_cost += static_cast<double>(hi - lo + 1) * static_cast<double>(overlap);
  }
  std::size_t fft_length = 1;
  while (fft_length < static_cast<std::size_t>(max_width)) fft_length <<= 1;
  const double fft_cost = 4.0 * static_cast<double>(triples.size() + Ju) * static_cast<double>(fft_length) *
                          std::log2(static_cast<double>(fft_length));

  InnerProductMethod method = options.method;
  if (method == InnerProductMethod::Automatic)
    method = direct_cost <= fft_cost ? InnerProductMethod::Direct : InnerProductMethod::Fft;

  auto store = [&](long lag, const Triple& t, double v) {
    out.b_[out.index(lag, t.j, t.l, t.h)] = v;
    out.b_[out.index(-lag, t.l, t.j, t.h)] = v;
  };

  std::vector<LaggedSequence> psi_auto(Ju * Ju);
  for (int j = 0; j < J; ++j)
    for (int h = 0; h < J; ++h)
      psi_auto[static_cast<std::size_t>(j) * Ju + static_cast<std::size_t>(h)] = autocorr_wavelet_sequence(system, j, h);
  auto direct_sum = [&](const Triple& t, long lag) {
    const auto& a = psi_auto[static_cast<std::size_t>(t.j) * Ju + static_cast<std::size_t>(t.h)];
    const auto& b = psi_auto[static_cast<std::size_t>(t.l) * Ju + static_cast<std::size_t>(t.h)];
    const long tau_lo = std::max(a.first_lag, b.first_lag + lag);
    const long tau_hi = std::min(a.last_lag(), b.last_lag() + lag);
    detail::NeumaierSum s;
    for (long tau = tau_lo; tau <= tau_hi; ++tau)
      s.add(a.values[static_cast<std::size_t>(tau - a.first_lag)] *
            b.values[static_cast<std::size_t>(tau - lag - b.first_lag)]);
    return s.value();
  };

  if (method == InnerProductMethod::Direct) {
    parallel_for(triples.size(), [&](std::size_t i) {
      const Triple& t = triples[i];
      const auto [lo, hi] = lag_window(t);
      for (long lag = lo; lag <= hi; ++lag) store(lag, t, direct_sum(t, lag));
    });
  } else {
    // B_hat = psi_hat_j conj(psi_hat_l) |psi_hat_h|^2; lag lambda sits at index lambda mod N.
    const FftPlans plans(fft_length);
    std::vector<std::vector<std::complex<double>>> spectra(Ju);
    for (int j = 0; j < J; ++j) spectra[static_cast<std::size_t>(j)] = plans.forward(system.psi(j));
    const double inv_n = 1.0 / static_cast<double>(fft_length);
    const long n = static_cast<long>(fft_length);
    parallel_for(triples.size(), [&](std::size_t i) {
      const Triple& t = triples[i];
      const auto& pj = spectra[static_cast<std::size_t>(t.j)];
      const auto& pl = spectra[static_cast<std::size_t>(t.l)];
      const auto& ph = spectra[static_cast<std::size_t>(t.h)];
      std::vector<std::complex<double>> prod(pj.size());
      for (std::size_t f = 0; f < prod.size(); ++f) prod[f] = pj[f] * std::conj(pl[f]) * std::norm(ph[f]);
      const auto r = plans.backward(prod);
      const auto [lo, hi] = lag_window(t);
      for (long lag = lo; lag <= hi; ++lag) store(lag, t, r[static_cast<std::size_t>(((lag % n) + n) % n)] * inv_n);
      // Lag zero feeds A and its inverse, so it is always summed directly.
      store(0, t, direct_sum(t, 0));
    });
  }

  out.a_ = Matrix(Ju, Ju);
  for (int j = 0; j < J; ++j)
    for (int l = 0; l < J; ++l)
      out.a_(static_cast<std::size_t>(j), static_cast<std::size_t>(l)) = out.b_[out.index(0, j, j, l)];
  double rcond = 0.0;
  out.a_inv_ = lu_inverse(out.a_, rcond);
  if (rcond < kMinRcond)
    throw Error(ErrorCode::SingularInnerProductMatrix,
                "inner product matrix is numerically singular (rcond " + std::to_string(rcond) + ")");
  return out;
}

}  // namespace mvlsw
