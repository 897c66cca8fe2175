#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mvlsw/error.hpp"
#include "mvlsw/wavelet.hpp"
#include "oracles.hpp"

using namespace mvlsw;

namespace {

const double kRoot2 = std::sqrt(2.0);

oracle::Vec taps(int number) {
  const auto f = make_filter(WaveletFamily::DaubExPhase, number);
  return {f.lowpass.begin(), f.lowpass.end()};
}

}  // namespace

TEST_CASE("haar filter taps") {
  const auto f = make_filter(WaveletFamily::DaubExPhase, 1);
  REQUIRE(f.length() == 2);
  CHECK(f.lowpass[0] == doctest::Approx(1 / kRoot2).epsilon(1e-15));
  CHECK(f.lowpass[1] == doctest::Approx(1 / kRoot2).epsilon(1e-15));
  CHECK(f.highpass[0] == doctest::Approx(1 / kRoot2).epsilon(1e-15));
  CHECK(f.highpass[1] == doctest::Approx(-1 / kRoot2).epsilon(1e-15));
}

TEST_CASE("every tabulated filter satisfies the orthonormal filter conditions") {
  for (int n = 1; n <= 10; ++n) {
    CAPTURE(n);
    const auto f = make_filter(WaveletFamily::DaubExPhase, n);
    const auto& h = f.lowpass;
    REQUIRE(h.size() == static_cast<std::size_t>(2 * n));
    CHECK(std::abs(std::accumulate(h.begin(), h.end(), 0.0) - kRoot2) < 1e-14);
    for (std::size_t shift = 0; shift < h.size(); shift += 2) {
      double s = 0.0;
      for (std::size_t k = 0; k + shift < h.size(); ++k) s += h[k] * h[k + shift];
      CHECK(std::abs(s - (shift == 0 ? 1.0 : 0.0)) < 1e-14);
    }
    // Vanishing moments of the highpass filter, scaled by the size of k^m.
    for (int m = 0; m < n; ++m) {
      double s = 0.0, scale = 0.0;
      for (std::size_t k = 0; k < h.size(); ++k) {
        const double term = f.highpass[k] * std::pow(static_cast<double>(k), m);
        s += term;
        scale += std::abs(term);
      }
      CHECK(std::abs(s) <= 1e-12 * scale);
    }
    for (std::size_t k = 0; k < h.size(); ++k)
      CHECK(f.highpass[k] == (k % 2 ? -1.0 : 1.0) * h[h.size() - 1 - k]);
  }
}

TEST_CASE("seven vanishing moments give fourteen taps summing to sqrt 2") {
  const auto f = make_filter(WaveletFamily::DaubExPhase, 7);
  CHECK(f.length() == 14);
  CHECK(std::accumulate(f.lowpass.begin(), f.lowpass.end(), 0.0) == doctest::Approx(kRoot2).epsilon(1e-14));
}

TEST_CASE("unsupported filter numbers are rejected") {
  for (int n : {0, 11, -1}) {
    try {
      make_filter(WaveletFamily::DaubExPhase, n);
      FAIL("expected UnsupportedFilter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnsupportedFilter);
    }
  }
  CHECK_THROWS_AS(parse_wavelet_family("symmlet"), Error);
  CHECK(parse_wavelet_family("DaubExPhase") == WaveletFamily::DaubExPhase);
}

TEST_CASE("haar discrete wavelets") {
  const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 1), 6);
  const auto p1 = sys.psi(0);
  REQUIRE(p1.size() == 2);
  CHECK(p1[0] == doctest::Approx(1 / kRoot2).epsilon(1e-15));
  CHECK(p1[1] == doctest::Approx(-1 / kRoot2).epsilon(1e-15));
  const auto p2 = sys.psi(1);
  REQUIRE(p2.size() == 4);
  const double want[] = {0.5, 0.5, -0.5, -0.5};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(p2[static_cast<std::size_t>(i)] - want[i]) < 1e-15);
  for (int j = 0; j < 6; ++j) {
    const auto p = sys.psi(j);
    CHECK(p.size() == (std::size_t{2} << j));
    CHECK(std::count(p.begin(), p.end(), 0.0) == 0);
  }
}

TEST_CASE("discrete wavelets match the filter cascade and have unit norm") {
  for (int n : {1, 2, 3, 5, 10}) {
    const auto h = taps(n);
    const auto g = oracle::highpass(h);
    const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, n), 6);
    for (int j = 0; j < 6; ++j) {
      CAPTURE(n);
      CAPTURE(j);
      const auto want = oracle::wavelet(h, g, j + 1);
      const auto got = sys.psi(j);
      REQUIRE(got.size() == want.size());
      CHECK(got.size() == ((std::size_t{1} << (j + 1)) - 1) * (h.size() - 1) + 1);
      double err = 0.0, norm = 0.0;
      for (std::size_t i = 0; i < want.size(); ++i) {
        err = std::max(err, std::abs(got[i] - want[i]));
        norm += got[i] * got[i];
      }
      CHECK(err < 1e-13);
      CHECK(std::abs(norm - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("periodized wavelet folds the support") {
  const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 2), 4);
  const auto p = sys.psi(3);  // length 46
  const auto w = sys.periodized_psi(3, 16);
  for (std::size_t n = 0; n < 16; ++n) {
    double s = 0.0;
    for (std::size_t m = n; m < p.size(); m += 16) s += p[m];
    CHECK(std::abs(w[n] - s) < 1e-15);
  }
}

TEST_CASE("autocorrelation wavelet values") {
  const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 1), 3);
  CHECK(autocorr_wavelet(sys, 0, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(autocorr_wavelet(sys, 0, 0, 1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(autocorr_wavelet(sys, 0, 0, -1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(autocorr_wavelet(sys, 0, 0, 5) == 0.0);
}

TEST_CASE("autocorrelation wavelet matches the direct double sum") {
  for (int n : {1, 2, 4}) {
    const auto h = taps(n);
    const auto g = oracle::highpass(h);
    const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, n), 5);
    double err = 0.0;
    for (int j = 0; j < 5; ++j)
      for (int l = 0; l < 5; ++l) {
        const auto pj = oracle::wavelet(h, g, j + 1), pl = oracle::wavelet(h, g, l + 1);
        const auto seq = autocorr_wavelet_sequence(sys, j, l);
        CHECK(seq.first_lag == -static_cast<long>(pl.size() - 1));
        CHECK(seq.last_lag() == static_cast<long>(pj.size() - 1));
        for (long tau = -64; tau <= 64; ++tau) {
          const double want = oracle::cross_autocorr(pj, pl, tau);
          err = std::max(err, std::abs(autocorr_wavelet(sys, j, l, tau) - want));
          err = std::max(err, std::abs(seq.at(tau) - want));
        }
      }
    CAPTURE(n);
    CHECK(err < 1e-12);
  }
}

TEST_CASE("inner products match the brute-force triple sum") {
  for (int n : {1, 2}) {
    for (auto method : {InnerProductMethod::Direct, InnerProductMethod::Fft, InnerProductMethod::Automatic}) {
      const std::size_t T = 16;
      const int J = 4;
      const auto h = taps(n);
      const auto g = oracle::highpass(h);
      std::vector<oracle::Vec> psi;
      for (int j = 1; j <= J; ++j) psi.push_back(oracle::wavelet(h, g, j));
      const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, n), J);
      const auto acp = autocorr_inner_products(sys, T, {.max_lag = -1, .method = method});
      REQUIRE(acp.max_lag() == 16);
      double err = 0.0;
      for (long lag = -16; lag <= 16; ++lag)
        for (int j = 0; j < J; ++j)
          for (int l = 0; l < J; ++l)
            for (int hh = 0; hh < J; ++hh) {
              const double want = oracle::triple_product(psi[static_cast<std::size_t>(j)],
                                                         psi[static_cast<std::size_t>(l)],
                                                         psi[static_cast<std::size_t>(hh)], lag);
              err = std::max(err, std::abs(acp.B(lag, j, l, hh) - want));
            }
      CAPTURE(n);
      CHECK(err < 1e-10);
      for (int j = 0; j < J; ++j)
        for (int l = 0; l < J; ++l)
          CHECK(std::abs(acp.A()(static_cast<std::size_t>(j), static_cast<std::size_t>(l)) -
                         oracle::triple_product(psi[static_cast<std::size_t>(j)], psi[static_cast<std::size_t>(j)],
                                                psi[static_cast<std::size_t>(l)], 0)) < 1e-10);
    }
  }
}

TEST_CASE("inner product identities") {
  const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 3), 6);
  const auto acp = autocorr_inner_products(sys, 64);
  for (int j = 0; j < 6; ++j)
    for (int l = 0; l < 6; ++l) {
      CHECK(acp.B(0, j, j, l) == acp.A()(static_cast<std::size_t>(j), static_cast<std::size_t>(l)));
      for (int hh = 0; hh < 6; ++hh)
        for (long lag = -64; lag <= 64; lag += 7) CHECK(std::abs(acp.B(lag, j, l, hh) - acp.B(-lag, l, j, hh)) < 1e-13);
    }
  // A^{-1} A = I
  const Matrix prod = acp.A_inverse() * acp.A();
  CHECK((prod - Matrix::identity(6)).max_abs() < 1e-9);
}

TEST_CASE("haar A matrix") {
  const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 1), 2);
  const auto acp = autocorr_inner_products(sys, 4);
  CHECK(std::abs(acp.A()(0, 0) - 1.5) < 1e-12);
  // Independent check of the whole 2 x 2 matrix.
  const auto h = taps(1);
  const auto g = oracle::highpass(h);
  const auto p1 = oracle::wavelet(h, g, 1), p2 = oracle::wavelet(h, g, 2);
  const oracle::Vec* p[] = {&p1, &p2};
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t l = 0; l < 2; ++l) {
      double s = 0.0;
      for (long tau = -8; tau <= 8; ++tau) {
        const double v = oracle::cross_autocorr(*p[j], *p[j], tau) * oracle::cross_autocorr(*p[l], *p[l], tau);
        s += v;
      }
      CHECK(std::abs(acp.A()(j, l) - s) < 1e-12);
    }
}

TEST_CASE("inner product argument checks") {
  const auto sys = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 1), 3);
  const auto acp = autocorr_inner_products(sys, 8, {.max_lag = 2});
  CHECK_THROWS_AS(acp.B(3, 0, 0, 0), Error);
  CHECK_THROWS_AS(acp.B(0, 3, 0, 0), Error);
  try {
    autocorr_inner_products(sys, 12);
    FAIL("expected NonDyadicLength");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonDyadicLength);
  }
  try {
    autocorr_inner_products(sys, 4);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  const auto big = build_wavelet_system(make_filter(WaveletFamily::DaubExPhase, 1), 15);
  try {
    autocorr_inner_products(big, std::size_t{1} << 15);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DomainError);
  }
}
