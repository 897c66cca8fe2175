#include "mvlsw/matops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mvlsw/error.hpp"

namespace mvlsw {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_lower_triangular() const {
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = r + 1; c < cols_; ++c)
      if ((*this)(r, c) != 0.0) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  Matrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double v = a(r, k);
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += v * b(k, c);
    }
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  Matrix out(a.rows_, a.cols_);
  for (std::size_t i = 0; i < a.values_.size(); ++i) out.values_[i] = a.values_[i] - b.values_[i];
  return out;
}

SymMatrix::SymMatrix(const Matrix& m) : m_(m.rows(), m.cols()) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "symmetric matrix must be square");
  for (std::size_t p = 0; p < m.rows(); ++p) {
    m_(p, p) = m(p, p);
    for (std::size_t q = p + 1; q < m.cols(); ++q) set(p, q, 0.5 * (m(p, q) + m(q, p)));
  }
}

namespace {

constexpr int kMaxSweeps = 100;

bool all_finite(const Matrix& m) {
  return std::all_of(m.values().begin(), m.values().end(), [](double v) { return std::isfinite(v); });
}

// Rebuilds Q diag(values) Q^T.
SymMatrix reconstruct(const Matrix& q, std::span<const double> values) {
  const std::size_t n = q.rows();
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += q(r, i) * values[i] * q(c, i);
      out(r, c) = s;
      out(c, r) = s;
    }
  return SymMatrix(out);
}

// Standard lower Cholesky factor L with L L^T = m.
Matrix cholesky_llt(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      throw Error(ErrorCode::NotPositiveDefinite,
                  "non-positive pivot " + std::to_string(d) + " at row " + std::to_string(j));
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "empty matrix");
  if (!all_finite(m.matrix())) throw Error(ErrorCode::NoConvergence, "non-finite matrix entries");

  Matrix a = m.matrix();
  Matrix v = Matrix::identity(n);

  double frob = 0.0;
  for (double x : a.values()) frob += x * x;

  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0 || off <= 1e-34 * frob) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
            std::abs(a(q, q)) + g == std::abs(a(q, q))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = a(p, r) = c * arp - s * arq;
          a(r, q) = a(q, r) = s * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorCode::NoConvergence, "Jacobi iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, i) = v(r, order[i]);
  }
  return out;
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values.back(); }

Matrix cholesky_lower(const SymMatrix& m) {
  const std::size_t n = m.dim();
  Matrix reversed(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reversed(i, j) = m(n - 1 - i, n - 1 - j);
  const Matrix l = cholesky_llt(reversed);
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) v(i, j) = l(n - 1 - j, n - 1 - i);
  return v;
}

Matrix psd_sqrt(const SymMatrix& m) {
  const std::size_t n = m.dim();
  const double scale = m.max_abs();
  if (scale == 0.0) return Matrix(n, n);
  const EigenDecomposition eig = sym_eigen(m);
  const double floor = -1e-10 * scale;
  Matrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda = eig.values[i];
    if (lambda < floor)
      throw Error(ErrorCode::IndefiniteMatrix, "eigenvalue " + std::to_string(lambda) + " below clamp threshold");
    const double root = std::sqrt(std::max(lambda, 0.0));
    for (std::size_t c = 0; c < n; ++c) v(i, c) = root * eig.vectors(c, i);
  }
  return v;
}

SymMatrix regularize(const SymMatrix& m, double tol, double* smallest_before, double* smallest_after) {
  if (!(tol > 0.0)) throw Error(ErrorCode::DomainError, "regularization tolerance must be positive");
  const EigenDecomposition eig = sym_eigen(m);
  const double before = eig.values.back();
  if (smallest_before) *smallest_before = before;
  if (before >= tol) {
    if (smallest_after) *smallest_after = before;
    return m;
  }

  // The rebuilt matrix carries rounding of order eps * ||M||, so the floor is
  // nudged upward until the re-measured minimum clears tol.
  double floor = tol;
  SymMatrix out;
  double after = before;
  const double step = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(eig.values.front()), tol);
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<double> clamped = eig.values;
    for (double& v : clamped) v = std::max(v, floor);
    out = reconstruct(eig.vectors, clamped);
    after = min_eigenvalue(out);
    if (after >= tol) break;
    floor += std::max(2.0 * (tol - after), step);
  }
  if (after < tol) throw Error(ErrorCode::NoConvergence, "regularization floor could not be reached");
  if (smallest_after) *smallest_after = after;
  return out;
}

SymMatrix sym_inverse(const SymMatrix& m) {
  const std::size_t n = m.dim();
  const Matrix l = cholesky_llt(m.matrix());
  // Forward substitution for L^{-1}.
  Matrix linv(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    linv(c, c) = 1.0 / l(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      double s = 0.0;
      for (std::size_t k = c; k < r; ++k) s -= l(r, k) * linv(k, c);
      linv(r, c) = s / l(r, r);
    }
  }
  return SymMatrix(linv.transpose() * linv);
}

Matrix lu_inverse(const Matrix& m, double& rcond) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw Error(ErrorCode::DimensionMismatch, "inverse requires a square matrix");
  Matrix lu = m;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rcond = 0.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    if (lu(pivot, col) == 0.0 || !std::isfinite(lu(pivot, col))) return {};
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu(pivot, c), lu(col, c));
      std::swap(perm[pivot], perm[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = lu(r, col) / lu(col, col);
      lu(r, col) = f;
      for (std::size_t c = col + 1; c < n; ++c) lu(r, c) -= f * lu(col, c);
    }
  }

  Matrix inv(n, n);
  std::vector<double> y(n);
  for (std::size_t e = 0; e < n; ++e) {
    // Solve L U x = P e_e.
    for (std::size_t r = 0; r < n; ++r) {
      double s = perm[r] == e ? 1.0 : 0.0;
      for (std::size_t k = 0; k < r; ++k) s -= lu(r, k) * y[k];
      y[r] = s;
    }
    for (std::size_t r = n; r-- > 0;) {
      double s = y[r];
      for (std::size_t k = r + 1; k < n; ++k) s -= lu(r, k) * inv(k, e);
      inv(r, e) = s / lu(r, r);
    }
  }

  auto norm1 = [n](const Matrix& a) {
    double best = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += std::abs(a(r, c));
      best = std::max(best, s);
    }
    return best;
  };
  const double denom = norm1(m) * norm1(inv);
  rcond = (denom > 0.0 && std::isfinite(denom)) ? 1.0 / denom : 0.0;
  return inv;
}

}  // namespace mvlsw
