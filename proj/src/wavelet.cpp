#include "mvlsw/wavelet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "detail/neumaier.hpp"
#include "mvlsw/error.hpp"

namespace mvlsw {

std::string_view to_string(WaveletFamily family) {
  switch (family) {
    case WaveletFamily::DaubExPhase: return "DaubExPhase";
  }
  return "DaubExPhase";
}

WaveletFamily parse_wavelet_family(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "daubexphase") return WaveletFamily::DaubExPhase;
  throw Error(ErrorCode::UnsupportedFilter, "unknown wavelet family '" + std::string(name) + "'");
}

bool is_dyadic(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

int dyadic_log2(std::size_t n) noexcept {
  int j = 0;
  while ((std::size_t{1} << j) < n) ++j;
  return j;
}

namespace {

void validate_filter(const WaveletFilter& f) {
  const auto& h = f.lowpass;
  const std::size_t n = h.size();
  double sum = 0.0, squares = 0.0;
  for (double v : h) {
    sum += v;
    squares += v * v;
  }
  bool ok = std::abs(sum - std::sqrt(2.0)) <= 1e-12 && std::abs(squares - 1.0) <= 1e-12;
  for (std::size_t shift = 2; ok && shift < n; shift += 2) {
    double dot = 0.0;
    for (std::size_t k = 0; k + shift < n; ++k) dot += h[k] * h[k + shift];
    ok = std::abs(dot) <= 1e-12;
  }
  if (!ok)
    throw Error(ErrorCode::UnsupportedFilter,
                "built-in filter table failed validation for number " + std::to_string(f.number));
}

}  // namespace

WaveletFilter make_filter(WaveletFamily family, int number) {
  const auto table = daubechies_lowpass(number);
  WaveletFilter f;
  f.family = family;
  f.number = number;
  f.lowpass.assign(table.begin(), table.end());
  const std::size_t n = f.lowpass.size();
  f.highpass.resize(n);
  for (std::size_t k = 0; k < n; ++k) f.highpass[k] = (k % 2 == 0 ? 1.0 : -1.0) * f.lowpass[n - 1 - k];
  validate_filter(f);
  return f;
}

DiscreteWaveletSystem::DiscreteWaveletSystem(WaveletFilter filter, int levels) : filter_(std::move(filter)) {
  if (levels < 1) throw Error(ErrorCode::DomainError, "wavelet system needs at least one level");
  const auto& h = filter_.lowpass;
  psi_.reserve(static_cast<std::size_t>(levels));
  psi_.push_back(filter_.highpass);
  for (int j = 1; j < levels; ++j) {
    const auto& prev = psi_.back();
    // psi_{j+1}[n] = sum_k h[n - 2k] psi_j[k]
    std::vector<double> next(2 * prev.size() + h.size() - 2, 0.0);
    for (std::size_t k = 0; k < prev.size(); ++k)
      for (std::size_t i = 0; i < h.size(); ++i) next[2 * k + i] += h[i] * prev[k];
    psi_.push_back(std::move(next));
  }
}

std::vector<double> DiscreteWaveletSystem::periodized_psi(int j, std::size_t length) const {
  std::vector<double> out(length, 0.0);
  const auto w = psi(j);
  for (std::size_t n = 0; n < w.size(); ++n) out[n % length] += w[n];
  return out;
}

DiscreteWaveletSystem build_wavelet_system(const WaveletFilter& filter, int levels) {
  return DiscreteWaveletSystem(filter, levels);
}

LaggedSequence autocorr_wavelet_sequence(const DiscreteWaveletSystem& system, int j, int l) {
  const auto a = system.psi(j);
  const auto b = system.psi(l);
  LaggedSequence out;
  out.first_lag = -(static_cast<long>(b.size()) - 1);
  out.values.resize(a.size() + b.size() - 1);
  for (long tau = out.first_lag; tau <= static_cast<long>(a.size()) - 1; ++tau) {
    // n ranges over [max(0, tau), min(len_a, len_b + tau) - 1]
    const long lo = std::max(0L, tau);
    const long hi = std::min(static_cast<long>(a.size()), static_cast<long>(b.size()) + tau);
    detail::NeumaierSum s;
    for (long n = lo; n < hi; ++n) s.add(a[static_cast<std::size_t>(n)] * b[static_cast<std::size_t>(n - tau)]);
    out.values[static_cast<std::size_t>(tau - out.first_lag)] = s.value();
  }
  return out;
}

double autocorr_wavelet(const DiscreteWaveletSystem& system, int j, int l, long tau) {
  if (j < 0 || l < 0 || j >= system.levels() || l >= system.levels())
    throw Error(ErrorCode::IndexOutOfRange, "level outside the wavelet system");
  const auto a = system.psi(j);
  const auto b = system.psi(l);
  const long lo = std::max(0L, tau);
  const long hi = std::min(static_cast<long>(a.size()), static_cast<long>(b.size()) + tau);
  detail::NeumaierSum s;
  for (long n = lo; n < hi; ++n) s.add(a[static_cast<std::size_t>(n)] * b[static_cast<std::size_t>(n - tau)]);
  return s.value();
}

}  // namespace mvlsw
