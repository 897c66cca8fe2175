#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mvlsw {

enum class InnovationDistribution { Gaussian, Uniform, StudentT };

std::string_view to_string(InnovationDistribution d);
/// Accepts gauss|gaussian|normal, uniform, t|student-t.
InnovationDistribution parse_innovation_distribution(std::string_view name);

/// Innovation law with zero mean and unit variance. Uniform draws are
/// sqrt(3)(2U - 1); Student-t draws are scaled by sqrt((dof - 2) / dof) and
/// need dof > 4.
struct InnovationSpec {
  InnovationDistribution distribution = InnovationDistribution::Gaussian;
  double dof = 5.0;
};

/// splitmix64 finaliser applied to (seed, stream); used to give every level
/// of a simulation and every bootstrap replicate its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// mt19937_64 with the variate transforms written out here (rather than the
/// std:: distributions, whose output is implementation-defined), so a seed
/// yields the same stream on every platform.
class InnovationGenerator {
 public:
  InnovationGenerator(InnovationSpec spec, std::uint64_t seed);

  double operator()();

  double uniform01();        // in (0, 1), 53-bit resolution
  double standard_normal();  // Marsaglia polar method

 private:
  double gamma(double shape);  // Marsaglia-Tsang, shape >= 1

  InnovationSpec spec_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mvlsw
