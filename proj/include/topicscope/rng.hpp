#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace topicscope {

/// Portable seeded generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard library distributions are not portable, so every
/// variate here is derived from raw engine words with explicit arithmetic:
///   uniform01   -> top 53 bits of one word, scaled by 2^-53
///   index(n)    -> floor(uniform01 * n)
///   normal      -> Marsaglia polar method
///   gamma(a)    -> Marsaglia-Tsang, with the a < 1 boost done in log space
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  double normal() {
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
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // log of a Gamma(shape, 1) variate.
  double log_gamma_variate(double shape) {
    if (shape < 1.0) {
      // G(a) = G(a + 1) * U^(1/a)
      double u;
      do {
        u = uniform01();
      } while (u == 0.0);
      return log_gamma_variate(shape + 1.0) + std::log(u) / shape;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return std::log(d * v);
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return std::log(d * v);
    }
  }

  // Symmetric Dirichlet(concentration * 1_n) draw.
  Eigen::VectorXd dirichlet(Eigen::Index n, double concentration) {
    Eigen::VectorXd logs(n);
    for (Eigen::Index i = 0; i < n; ++i) logs[i] = log_gamma_variate(concentration);
    const double top = logs.maxCoeff();
    Eigen::VectorXd out = (logs.array() - top).exp().matrix();
    return out / out.sum();
  }

  // Draw from an unnormalized categorical given its running cumulative sums.
  std::size_t categorical_from_cumulative(const std::vector<double>& cumulative) {
    const double target = uniform01() * cumulative.back();
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && cumulative[k] <= target) ++k;
    return k;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace topicscope
