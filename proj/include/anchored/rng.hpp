#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace anchored {

/// Seeded uniform generator with a fixed bit-to-double mapping.
///
/// std::uniform_real_distribution is implementation-defined; mapping the raw
/// 64-bit output ourselves keeps every sampled sequence identical across
/// standard libraries, which the CSV determinism contract relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0,1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform point inside the box given by parallel lo/hi spans.
  std::vector<double> point(std::span<const double> lo, std::span<const double> hi) {
    std::vector<double> x(lo.size());
    for (std::size_t j = 0; j < lo.size(); ++j) x[j] = uniform(lo[j], hi[j]);
    return x;
  }

  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n) { return engine_() % n; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace anchored
