#include <doctest.h>

#include <cmath>
#include <random>

#include "mvlsw/error.hpp"
#include "mvlsw/matops.hpp"
#include "oracles.hpp"

using namespace mvlsw;

namespace {

SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    std::size_t c = 0;
    for (double v : row) m(r, c++) = v;
    ++r;
  }
  return SymMatrix(m);
}

SymMatrix eq3_at_zero() { return from_rows({{4, 2, 2}, {2, 6, 1}, {2, 1, 20}}); }

Matrix reconstruct(const EigenDecomposition& e) {
  return e.vectors * Matrix::diagonal(e.values) * e.vectors.transpose();
}

SymMatrix random_spd(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> z;
  Matrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = z(rng);
  Matrix m = a.transpose() * a;
  for (std::size_t i = 0; i < n; ++i) m(i, i) += 0.1;
  return SymMatrix(m);
}

}  // namespace

TEST_CASE("eigenvalues of simple matrices") {
  const auto e = sym_eigen(SymMatrix::identity(3));
  for (double v : e.values) CHECK(v == doctest::Approx(1.0));
  const double d[] = {4, 6, 20};
  const auto f = sym_eigen(SymMatrix::diagonal(d));
  CHECK(f.values[0] == 20.0);
  CHECK(f.values[1] == 6.0);
  CHECK(f.values[2] == 4.0);
}

TEST_CASE("eigendecomposition reconstructs the matrix") {
  const SymMatrix m = eq3_at_zero();
  const auto e = sym_eigen(m);
  CHECK((reconstruct(e) - m.matrix()).max_abs() < 1e-12);
  CHECK((e.vectors.transpose() * e.vectors - Matrix::identity(3)).max_abs() < 1e-13);
  CHECK(e.values[0] >= e.values[1]);
  CHECK(e.values[1] >= e.values[2]);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
    Matrix a(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) a(r, c) = z(rng);
    const SymMatrix s(a);
    const auto f = sym_eigen(s);
    CHECK((reconstruct(f) - s.matrix()).max_abs() < 1e-12 * std::max(1.0, s.max_abs()) * static_cast<double>(n));
  }
}

TEST_CASE("non-finite input does not converge") {
  Matrix a(2, 2);
  a(0, 0) = std::nan("");
  CHECK_THROWS_AS(sym_eigen(SymMatrix(a)), Error);
}

TEST_CASE("lower factor with VtV = M") {
  CHECK(cholesky_lower(SymMatrix::identity(4)) == Matrix::identity(4));
  const double d[] = {4, 9};
  const Matrix v = cholesky_lower(SymMatrix::diagonal(d));
  CHECK(v(0, 0) == 2.0);
  CHECK(v(1, 1) == 3.0);
  CHECK(v(0, 1) == 0.0);
  CHECK(v(1, 0) == 0.0);

  const SymMatrix m = eq3_at_zero();
  const Matrix w = cholesky_lower(m);
  CHECK(w.is_lower_triangular());
  CHECK((w.transpose() * w - m.matrix()).max_abs() < 1e-13);

  std::mt19937_64 rng(11);
  for (std::size_t n = 1; n <= 8; ++n) {
    const SymMatrix s = random_spd(rng, n);
    const Matrix f = cholesky_lower(s);
    CHECK(f.is_lower_triangular());
    CHECK((f.transpose() * f - s.matrix()).max_abs() <= 1e-10 * s.max_abs());
  }
  try {
    cholesky_lower(from_rows({{1, 2}, {2, 1}}));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotPositiveDefinite);
  }
}

TEST_CASE("psd square root") {
  const Matrix z = psd_sqrt(SymMatrix(3));
  CHECK(z.max_abs() == 0.0);
  const Matrix i = psd_sqrt(SymMatrix::identity(3));
  CHECK((i.transpose() * i - Matrix::identity(3)).max_abs() < 1e-14);

  const double v[] = {1.0, -2.0, 0.5, 3.0};
  Matrix outer(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) outer(r, c) = v[r] * v[c];
  const Matrix f = psd_sqrt(SymMatrix(outer));
  CHECK((f.transpose() * f - outer).max_abs() < 1e-12);

  try {
    psd_sqrt(from_rows({{1, 0}, {0, -1}}));
    FAIL("expected IndefiniteMatrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IndefiniteMatrix);
  }
}

TEST_CASE("regularization clamps small eigenvalues") {
  const SymMatrix id = SymMatrix::identity(3);
  CHECK(regularize(id, 1e-10) == id);

  const double d[] = {1.0, -0.5};
  double before = 0, after = 0;
  const SymMatrix r = regularize(SymMatrix::diagonal(d), 1e-10, &before, &after);
  CHECK(before == -0.5);
  CHECK(r(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(r(1, 1) - 1e-10) < 1e-15);
  CHECK(std::abs(r(0, 1)) < 1e-16);
  CHECK(after >= 1e-10);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int trial = 0; trial < 100; ++trial) {
    Matrix a(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = z(rng);
    const SymMatrix s(a);
    const SymMatrix once = regularize(s, 1e-10);
    CHECK(min_eigenvalue(once) >= 1e-10);
    const SymMatrix twice = regularize(once, 1e-10);
    CHECK((twice.matrix() - once.matrix()).max_abs() <= 1e-12);
  }
  CHECK_THROWS_AS(regularize(id, 0.0), Error);
}

TEST_CASE("symmetric inverse") {
  CHECK((sym_inverse(SymMatrix::identity(3)).matrix() - Matrix::identity(3)).max_abs() < 1e-15);
  const double d[] = {2, 4};
  const SymMatrix inv = sym_inverse(SymMatrix::diagonal(d));
  CHECK(inv(0, 0) == doctest::Approx(0.5));
  CHECK(inv(1, 1) == doctest::Approx(0.25));

  const SymMatrix m = eq3_at_zero();
  const SymMatrix mi = sym_inverse(m);
  CHECK((mi.matrix() * m.matrix() - Matrix::identity(3)).max_abs() < 1e-8);
  oracle::Mat3 a{{4, 2, 2}, {2, 6, 1}, {2, 1, 20}}, b;
  oracle::inverse3(a, b);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(mi(r, c) - b[r][c]) < 1e-14);
}

TEST_CASE("lu inverse and conditioning") {
  Matrix m(3, 3);
  const double v[9] = {0, 2, 1, 1, 0, 3, 4, 1, 0};
  for (std::size_t i = 0; i < 9; ++i) m(i / 3, i % 3) = v[i];
  double rcond = 0.0;
  const Matrix inv = lu_inverse(m, rcond);
  CHECK((inv * m - Matrix::identity(3)).max_abs() < 1e-14);
  CHECK(rcond > 0.05);

  Matrix s(2, 2);
  s(0, 0) = 1;
  s(0, 1) = 2;
  s(1, 0) = 2;
  s(1, 1) = 4;
  const Matrix none = lu_inverse(s, rcond);
  CHECK(rcond == 0.0);
  CHECK(none.rows() == 0);
}

TEST_CASE("symmetrizing construction") {
  Matrix a(2, 2);
  a(0, 1) = 1.0;
  a(1, 0) = 0.0;
  const SymMatrix s(a);
  CHECK(s(0, 1) == 0.5);
  CHECK(s(1, 0) == 0.5);
}
