#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace creditnet {

/// Deterministic random source. std::mt19937_64 has a standard-pinned
/// sequence, but the standard distributions do not, so the few samplers
/// needed here are spelled out; identical seeds give identical streams on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  /// Continuous Pareto: survival P(X >= x) = (x / x_min)^-mu for x >= x_min.
  double pareto(double x_min, double mu) {
    double u = 1.0 - uniform01();  // (0, 1]
    return x_min * std::pow(u, -1.0 / mu);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace creditnet
