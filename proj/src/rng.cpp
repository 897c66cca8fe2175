#include "mvlsw/rng.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mvlsw/error.hpp"

namespace mvlsw {

std::string_view to_string(InnovationDistribution d) {
  switch (d) {
    case InnovationDistribution::Gaussian: return "gauss";
    case InnovationDistribution::Uniform: return "uniform";
    case InnovationDistribution::StudentT: return "t";
  }
  return "gauss";
}

InnovationDistribution parse_innovation_distribution(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "gauss" || lower == "gaussian" || lower == "normal") return InnovationDistribution::Gaussian;
  if (lower == "uniform") return InnovationDistribution::Uniform;
  if (lower == "t" || lower == "student-t") return InnovationDistribution::StudentT;
  throw Error(ErrorCode::DomainError, "unknown innovation distribution '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL));
}

InnovationGenerator::InnovationGenerator(InnovationSpec spec, std::uint64_t seed) : spec_(spec), engine_(seed) {
  if (spec_.distribution == InnovationDistribution::StudentT && !(spec_.dof > 4.0))
    throw Error(ErrorCode::DomainError, "Student-t innovations need more than 4 degrees of freedom");
}

double InnovationGenerator::uniform01() {
  double u;
  do {
    u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  } while (u == 0.0);
  return u;
}

double InnovationGenerator::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

double InnovationGenerator::gamma(double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double InnovationGenerator::operator()() {
  switch (spec_.distribution) {
    case InnovationDistribution::Gaussian:
      return standard_normal();
    case InnovationDistribution::Uniform:
      return std::sqrt(3.0) * (2.0 * uniform01() - 1.0);
    case InnovationDistribution::StudentT: {
      const double nu = spec_.dof;
      const double z = standard_normal();
      const double chi2 = 2.0 * gamma(0.5 * nu);
      return z / std::sqrt(chi2 / nu) * std::sqrt((nu - 2.0) / nu);
    }
  }
  return 0.0;
}

}  // namespace mvlsw
