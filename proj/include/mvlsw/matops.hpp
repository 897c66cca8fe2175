#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mvlsw {

/// Dense row-major real matrix. Sized for the channel-count regime (P < 64)
/// and for the J x J inner-product matrices.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<const double> values() const noexcept { return values_; }

  Matrix transpose() const;
  double max_abs() const;
  bool is_lower_triangular() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Square symmetric matrix. Construction from a general matrix stores
/// (M + M^T) / 2, so entries(p, q) == entries(q, p) holds bit-for-bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t dim) : m_(dim, dim) {}
  explicit SymMatrix(const Matrix& m);

  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
  static SymMatrix diagonal(std::span<const double> d) { return SymMatrix(Matrix::diagonal(d)); }

  std::size_t dim() const noexcept { return m_.rows(); }
  double operator()(std::size_t p, std::size_t q) const { return m_(p, q); }
  void set(std::size_t p, std::size_t q, double v) {
    m_(p, q) = v;
    m_(q, p) = v;
  }
  const Matrix& matrix() const noexcept { return m_; }
  double max_abs() const { return m_.max_abs(); }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  Matrix m_;
};

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column i pairs with values[i]
};

/// Cyclic Jacobi eigendecomposition. Throws NoConvergence on non-finite input
/// or when the off-diagonal mass does not vanish within the sweep budget.
EigenDecomposition sym_eigen(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);

/// Lower-triangular V with V^T V = M. Computed as E chol(E M E)^T E where E
/// is the exchange matrix. Throws NotPositiveDefinite on a non-positive pivot.
Matrix cholesky_lower(const SymMatrix& m);

/// V = Lambda^{1/2} Q^T with negative eigenvalues clamped to zero, so that
/// V^T V reproduces M. Throws IndefiniteMatrix when an eigenvalue is below
/// -1e-10 * max|M|.
Matrix psd_sqrt(const SymMatrix& m);

/// Eigenvalue-clamp regularization. Returns m unchanged when its smallest
/// eigenvalue is already >= tol. Otherwise eigenvalues below tol are lifted
/// and the matrix rebuilt; the rebuilt matrix is re-measured and the floor
/// raised until sym_eigen reports a minimum >= tol.
/// If smallest_before is given it receives the input's smallest eigenvalue,
/// smallest_after receives the output's.
SymMatrix regularize(const SymMatrix& m, double tol, double* smallest_before = nullptr,
                     double* smallest_after = nullptr);

/// Inverse of a positive definite matrix through its Cholesky factor.
SymMatrix sym_inverse(const SymMatrix& m);

/// General inverse by LU with partial pivoting. rcond receives
/// 1 / (||M||_1 ||M^-1||_1), or 0 if a pivot vanished (the returned matrix is
/// then empty).
Matrix lu_inverse(const Matrix& m, double& rcond);

}  // namespace mvlsw
