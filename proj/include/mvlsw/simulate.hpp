#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvlsw/array.hpp"
#include "mvlsw/matops.hpp"
#include "mvlsw/rng.hpp"

namespace mvlsw {

/// Per-(j, k) factors V with V^T V = S_j(k). Lower-triangular wherever the
/// slice is positive definite; the eigen square root stands in otherwise.
class TransferField {
 public:
  TransferField(std::size_t channels, std::size_t levels, std::size_t length)
      : channels_(channels), levels_(levels), length_(length), v_(levels * length, Matrix(channels, channels)) {}

  std::size_t channels() const noexcept { return channels_; }
  std::size_t levels() const noexcept { return levels_; }
  std::size_t length() const noexcept { return length_; }

  const Matrix& operator()(std::size_t j, std::size_t k) const { return v_[j * length_ + k]; }
  Matrix& operator()(std::size_t j, std::size_t k) { return v_[j * length_ + k]; }

 private:
  std::size_t channels_, levels_, length_;
  std::vector<Matrix> v_;
};

/// Throws IndefiniteSpectrum naming the first offending (level, location).
TransferField spectrum_to_transfer(const MvLswArray& spectrum);

/// Seeded source of innovation streams. Level j (0 = finest) draws from
/// stream(j); within a level, z_{j,k} for k = 0..T-1 is drawn in order, P
/// components per location in channel order.
struct InnovationSource {
  InnovationSpec spec;
  std::uint64_t seed = 0;

  InnovationGenerator stream(std::uint64_t id) const { return InnovationGenerator(spec, derive_seed(seed, id)); }
};

/// X_t = sum_j sum_k V_j(k)^T z_{j,k} psi_j(t - k), t - k modulo T, for
/// j = 0..J-1 with J = log2(T). Multiplying by V^T makes the local
/// covariance at level j equal V^T V = S_j. The wavelet comes from the
/// spectrum's metadata.
TimeSeriesMatrix rmvlsw(const MvLswArray& spectrum, const InnovationSource& innovations);

/// Trivariate test spectrum with power only at level index 1 (the second
/// finest level). With u = k / (T - 1):
///   [ 4+16u  2+8u  2+8u   ]
///   [ 2+8u   6     1+4u   ]
///   [ 2+8u   1+4u  20-14u ]
/// Haar filter, channels X1..X3. Requires dyadic T >= 8.
MvLswArray build_eq3_fixture(std::size_t length);

}  // namespace mvlsw
