#pragma once

// Slow reference computations used to check the library. They work from the
// filter taps alone and share no code with the implementations under test.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;

inline Vec upsample(const Vec& x, std::size_t m) {
  Vec out((x.size() - 1) * m + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) out[i * m] = x[i];
  return out;
}

inline Vec convolve(const Vec& a, const Vec& b) {
  Vec out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

// psi at 1-based level j as h * h^(2) * ... * h^(2^{j-2}) * g^(2^{j-1}),
// x^(m) being x with m-1 zeros between taps.
inline Vec wavelet(const Vec& h, const Vec& g, int j) {
  Vec out{1.0};
  std::size_t m = 1;
  for (int i = 1; i < j; ++i, m *= 2) out = convolve(out, upsample(h, m));
  return convolve(out, upsample(g, m));
}

inline Vec highpass(const Vec& h) {
  Vec g(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) g[k] = (k % 2 ? -1.0 : 1.0) * h[h.size() - 1 - k];
  return g;
}

inline double at(const Vec& v, long n) {
  return (n < 0 || n >= static_cast<long>(v.size())) ? 0.0 : v[static_cast<std::size_t>(n)];
}

// Psi_{j,l}(tau) = sum_n psi_j(n) psi_l(n - tau)
inline double cross_autocorr(const Vec& pj, const Vec& pl, long tau) {
  double s = 0.0;
  for (long n = 0; n < static_cast<long>(pj.size()); ++n) s += pj[static_cast<std::size_t>(n)] * at(pl, n - tau);
  return s;
}

// B_{j,l,h}(lambda) = sum_tau Psi_{j,h}(tau) Psi_{l,h}(tau - lambda), summing
// tau over a range wide enough to cover every support.
inline double triple_product(const Vec& pj, const Vec& pl, const Vec& ph, long lambda) {
  const long span = static_cast<long>(pj.size() + pl.size() + ph.size()) + std::labs(lambda);
  double s = 0.0;
  for (long tau = -span; tau <= span; ++tau) s += cross_autocorr(pj, ph, tau) * cross_autocorr(pl, ph, tau - lambda);
  return s;
}

using Mat3 = double[3][3];

inline double det3(const Mat3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

// Inverse through the adjugate.
inline void inverse3(const Mat3& m, Mat3& out) {
  const double d = det3(m);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
      out[r][c] = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / d;
    }
}

}  // namespace oracle
