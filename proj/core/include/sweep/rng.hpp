#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace sweep {

/// Deterministic random source. mt19937_64 has a standardized sequence and
/// the double conversions below avoid std::uniform_real_distribution, whose
/// output is implementation-defined; the same seed gives the same stream on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (deterministic, unlike
  /// std::normal_distribution).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd uniform_vector(int d, double lo, double hi) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  /// Uniform in the closed ball of the given radius. Rejection from the
  /// bounding box in low dimension; the acceptance rate collapses past
  /// d ~ 12, so higher dimensions switch to the direction-radius method
  /// (same distribution, still seed-deterministic).
  Eigen::VectorXd in_ball(int d, double radius) {
    if (d <= 12) {
      for (;;) {
        Eigen::VectorXd v = uniform_vector(d, -1.0, 1.0);
        if (v.squaredNorm() <= 1.0) return radius * v;
      }
    }
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = gaussian();
    const double n = v.norm();
    if (n == 0.0) return Eigen::VectorXd::Zero(d);
    return radius * std::pow(uniform(), 1.0 / d) / n * v;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 mix; used to derive independent per-sample seeds from
/// (seed, index) so sample loops can run in any order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sweep
