#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace mvlsw {

enum class KernelName { Daniell, ModifiedDaniell };

std::string_view to_string(KernelName name);
/// Accepts "daniell", "modified-daniell" and "modified.daniell".
KernelName parse_kernel_name(std::string_view name);

/// Symmetric weights w(m), m in [-M, M], summing to one.
///   daniell:          w(m) = 1 / (2M + 1)
///   modified-daniell: w(m) = 1 / (2M) for |m| < M, 1 / (4M) at |m| = M
class SmoothingKernel {
 public:
  SmoothingKernel(KernelName name, int half_width);

  KernelName name() const noexcept { return name_; }
  int half_width() const noexcept { return half_width_; }
  double weight(int m) const noexcept {
    return (m < -half_width_ || m > half_width_) ? 0.0 : weights_[static_cast<std::size_t>(m + half_width_)];
  }
  /// weights()[m + M] = w(m)
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  KernelName name_;
  int half_width_;
  std::vector<double> weights_;
};

/// Kernel choice for a whole estimate: a single half-width applied to every
/// level, or one half-width per level (index 0 = finest).
struct SmoothingSpec {
  KernelName name = KernelName::Daniell;
  std::vector<int> half_widths{1};

  bool per_level() const noexcept { return half_widths.size() > 1; }
  /// Throws DimensionMismatch if a per-level vector does not cover `level`.
  int half_width(int level) const;
  SmoothingKernel kernel(int level) const { return SmoothingKernel(name, half_width(level)); }

  friend bool operator==(const SmoothingSpec&, const SmoothingSpec&) = default;
};

}  // namespace mvlsw
