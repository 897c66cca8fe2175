#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "mvlsw/error.hpp"
#include "mvlsw/inference.hpp"
#include "mvlsw/simulate.hpp"
#include "variance_oracle.hpp"

using namespace mvlsw;
using oracle::random_spectrum;
using oracle::variance_oracle;

namespace {

AutoCorrProducts products_for(int filter_number, int J, std::size_t T, long max_lag) {
  return autocorr_inner_products(build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, filter_number), J), T,
                                 {.max_lag = max_lag});
}

}  // namespace

TEST_CASE("variance matches the literal quadruple loop") {
  const std::size_t P = 2, T = 32;
  for (int number : {1, 2}) {
    for (auto name : {KernelName::Daniell, KernelName::ModifiedDaniell}) {
      const SmoothingSpec spec{name, {2}};
      const auto s = random_spectrum(P, 3, T, 40 + static_cast<std::uint64_t>(number), number, spec);
      const auto acp = products_for(number, 3, T, 4);
      const auto v = var_ews(s, acp);
      CHECK(v.kind() == ArrayKind::Variance);
      double err = 0.0, err_at = 0.0;
      for (std::size_t p = 0; p < P; ++p)
        for (std::size_t q = p; q < P; ++q)
          for (int j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < T; ++k) {
              const double want = variance_oracle(s, number, spec.kernel(j), p, q, j, static_cast<long>(k));
              err = std::max(err, std::abs(v(p, q, static_cast<std::size_t>(j), k) - want));
              if (k % 5 == 0) err_at = std::max(err_at, std::abs(var_ews_at(s, acp, spec, p, q, j, k) - want));
              CHECK(v(q, p, static_cast<std::size_t>(j), k) == v(p, q, static_cast<std::size_t>(j), k));
            }
      CAPTURE(number);
      CHECK(err < 1e-8);
      CHECK(err_at < 1e-8);
    }
  }
}

TEST_CASE("per-level kernel widths enter the variance") {
  const SmoothingSpec spec{KernelName::Daniell, {1, 2, 3}};
  const auto s = random_spectrum(2, 3, 32, 8, 1, spec);
  const auto acp = products_for(1, 3, 32, 6);
  const auto v = var_ews(s, acp);
  for (std::size_t k : {0, 7, 31})
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(v(0, 1, static_cast<std::size_t>(j), k) - var_ews_at(s, acp, spec, 1, 0, j, k)) <
            1e-10 * std::max(1.0, v(0, 1, static_cast<std::size_t>(j), k)));
}

TEST_CASE("periodogram covariance") {
  const std::size_t T = 16;
  const auto acp = products_for(2, 4, T, 16);
  MvLswArray zero(2, 4, T, ArrayKind::Spectrum);
  CHECK(periodogram_covariance(zero, acp, 0, 1, 1, 2, 3, 7) == 0.0);

  // Power s at a single level h0.
  MvLswArray one(1, 4, T, ArrayKind::Spectrum);
  const double sv = 2.5;
  for (std::size_t k = 0; k < T; ++k) one.set(0, 0, 2, k, sv);
  for (int j = 0; j < 4; ++j) {
    const double b = acp.B(0, j, j, 2);
    CHECK(periodogram_covariance(one, acp, 0, 0, j, j, 5, 5) == doctest::Approx(2 * b * b * sv * sv).epsilon(1e-14));
  }

  const auto s = random_spectrum(3, 4, T, 17, 2, {KernelName::Daniell, {1}});
  for (int j = 0; j < 4; ++j)
    for (int l = 0; l < 4; ++l)
      for (long k = 0; k < 16; k += 3)
        for (long m = 0; m < 16; m += 5) {
          const double a = periodogram_covariance(s, acp, 0, 2, j, l, k, m);
          const double b = periodogram_covariance(s, acp, 0, 2, l, j, m, k);
          CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
        }
  for (int j = 0; j < 4; ++j)
    for (long k = 0; k < 16; ++k) CHECK(periodogram_covariance(s, acp, 1, 1, j, j, k, k) >= 0.0);
  CHECK_THROWS_AS(periodogram_covariance(s, acp, 3, 0, 0, 0, 0, 0), Error);
  CHECK_THROWS_AS(periodogram_covariance(s, acp, 0, 0, 0, 0, 0, 16), Error);
}

TEST_CASE("variance argument checks") {
  const SmoothingSpec spec{KernelName::Daniell, {2}};
  const auto s = random_spectrum(2, 3, 32, 1, 1, spec);
  const auto zero = var_ews(MvLswArray(2, 3, 32, ArrayKind::Spectrum, s.meta()), products_for(1, 3, 32, 4));
  for (double v : zero.data()) CHECK(v == 0.0);

  try {
    var_ews(s, products_for(1, 3, 32, 4), SmoothingSpec{KernelName::Daniell, {3}});
    FAIL("expected KernelMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KernelMismatch);
  }
  try {
    var_ews(s, products_for(1, 3, 32, 3));
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndexOutOfRange);
  }
  MvLswArray bare(2, 3, 32, ArrayKind::Spectrum);
  CHECK_THROWS_AS(var_ews(bare, products_for(1, 3, 32, 4)), Error);
  CHECK_NOTHROW(var_ews(bare, products_for(1, 3, 32, 4), spec));
  CHECK_THROWS_AS(var_ews(s, products_for(1, 4, 32, 4)), Error);
}

TEST_CASE("normal quantiles") {
  CHECK(gauss_quantile(0.5) == 0.0);
  CHECK(std::abs(gauss_quantile(0.975) - 1.959963984540054) < 1e-12);
  CHECK(std::abs(gauss_quantile(0.995) - 2.5758293035489004) < 1e-12);
  CHECK(std::abs(gauss_quantile(0.9) - 1.2815515655446004) < 1e-12);
  CHECK(std::abs(gauss_quantile(0.01) + 2.3263478740408408) < 1e-12);
  CHECK(std::abs(gauss_quantile(1e-10) + 6.361340902404056) < 1e-9);
  for (double u : {0.001, 0.02, 0.2, 0.4, 0.49}) CHECK(std::abs(gauss_quantile(u) + gauss_quantile(1 - u)) < 1e-12);
  for (double u : {0.0, 1.0, -0.5, std::nan("")}) CHECK_THROWS_AS(gauss_quantile(u), Error);
}

TEST_CASE("approximate intervals") {
  const SmoothingSpec spec{KernelName::Daniell, {2}};
  const auto s = random_spectrum(3, 3, 32, 2, 1, spec);
  const MvLswArray zero_var(3, 3, 32, ArrayKind::Variance);
  const auto same = apx_ci(s, zero_var, 0.05);
  CHECK(same.lower == s);
  CHECK(same.upper == s);
  CHECK(same.method == IntervalMethod::Analytic);

  MvLswArray zs(1, 1, 4, ArrayKind::Spectrum), unit(1, 1, 4, ArrayKind::Variance);
  for (std::size_t k = 0; k < 4; ++k) unit.set(0, 0, 0, k, 1.0);
  const auto b = apx_ci(zs, unit, 0.05);
  CHECK(b.lower(0, 0, 0, 2) == doctest::Approx(-1.959964).epsilon(1e-6));
  CHECK(b.upper(0, 0, 0, 2) == doctest::Approx(1.959964).epsilon(1e-6));

  const auto v = var_ews(s, products_for(1, 3, 32, 4));
  const auto narrow = apx_ci(s, v, 0.05), wide = apx_ci(s, v, 0.01);
  for (std::size_t i = 0; i < s.data().size(); ++i) {
    CHECK(wide.lower.data()[i] <= narrow.lower.data()[i]);
    CHECK(wide.upper.data()[i] >= narrow.upper.data()[i]);
  }
  CHECK_THROWS_AS(apx_ci(s, zs, 0.05), Error);
  CHECK_THROWS_AS(apx_ci(s, v, 1.5), Error);
}

TEST_CASE("intervals follow a channel permutation") {
  const SmoothingSpec spec{KernelName::ModifiedDaniell, {2}};
  const auto s = random_spectrum(3, 3, 32, 6, 2, spec);
  const std::vector<std::size_t> perm{1, 2, 0};
  MvLswArray t(3, 3, 32, ArrayKind::Spectrum, s.meta());
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 32; ++k) t.set(p, q, j, k, s(perm[p], perm[q], j, k));
  const auto acp = products_for(2, 3, 32, 4);
  const auto a = apx_ci(s, var_ews(s, acp), 0.05);
  const auto b = apx_ci(t, var_ews(t, acp), 0.05);
  double err = 0.0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 32; ++k) {
          err = std::max(err, std::abs(b.lower(p, q, j, k) - a.lower(perm[p], perm[q], j, k)));
          err = std::max(err, std::abs(b.upper(p, q, j, k) - a.upper(perm[p], perm[q], j, k)));
        }
  CHECK(err < 1e-12);
}

TEST_CASE("bootstrap of a zero spectrum") {
  ArrayMeta meta;
  meta.smoothing = SmoothingSpec{KernelName::Daniell, {1}};
  const MvLswArray zero(2, 4, 16, ArrayKind::Spectrum, meta);
  const auto r = bootstrap_interval(zero, 2, 0.05, 3);
  for (double v : r.median.data()) CHECK(v == 0.0);
  for (double v : r.interval.lower.data()) CHECK(v == 0.0);
  for (double v : r.interval.upper.data()) CHECK(v == 0.0);
  CHECK(r.interval.method == IntervalMethod::Bootstrap);
}

TEST_CASE("bootstrap ordering and determinism") {
  auto s = build_eq3_fixture(64);
  s.meta().smoothing = SmoothingSpec{KernelName::Daniell, {4}};
  s.meta().bias_corrected = true;
  s.meta().regularization_tol = 1e-10;

  setenv("MVLSW_THREADS", "1", 1);
  const auto a = bootstrap_interval(s, 20, 0.1, 42);
  setenv("MVLSW_THREADS", "3", 1);
  const auto b = bootstrap_interval(s, 20, 0.1, 42);
  unsetenv("MVLSW_THREADS");
  CHECK(a.median == b.median);
  CHECK(a.interval.lower == b.interval.lower);
  CHECK(a.interval.upper == b.interval.upper);
  for (std::size_t i = 0; i < a.median.data().size(); ++i) {
    CHECK(a.interval.lower.data()[i] <= a.median.data()[i]);
    CHECK(a.median.data()[i] <= a.interval.upper.data()[i]);
  }
  const auto c = bootstrap_interval(s, 20, 0.1, 43);
  CHECK_FALSE(c.median == a.median);

  const auto t = bootstrap_interval(s, 4, 0.1, 42, InnovationSpec{InnovationDistribution::StudentT, 6.0});
  CHECK_FALSE(t.median == a.median);

  CHECK_THROWS_AS(bootstrap_interval(s, 1, 0.1, 1), Error);
  CHECK_THROWS_AS(bootstrap_interval(s, 10, 0.0, 1), Error);
  auto bare = build_eq3_fixture(64);
  CHECK_THROWS_AS(bootstrap_interval(bare, 10, 0.1, 1), Error);
}
