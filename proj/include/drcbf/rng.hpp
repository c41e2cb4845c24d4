#pragma once

#include <cstdint>
#include <random>

#include "drcbf/types.hpp"

namespace drcbf {

/// Seeded generator for every stochastic draw in the library. Episodes own
/// their generator; per-episode seeds are derived from a master seed so that
/// Monte Carlo batches are reproducible and parallelizable.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  double uniform(double a, double b) {
    if (a == b) return a;
    std::uniform_real_distribution<double> dist(a, b);
    return dist(engine_);
  }

  double unit() { return uniform(0.0, 1.0); }

  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return dist(engine_);
  }

  /// Independent per-component uniform draw inside a box. Zero-width
  /// components come back exactly equal to the bound.
  Vec sample_box(const BoxSet& box) {
    Vec v(box.dim());
    for (int i = 0; i < box.dim(); ++i) v[i] = uniform(box.lo[i], box.hi[i]);
    return v;
  }

  /// splitmix64 mix, used to derive stream seeds (e.g. one per episode).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace drcbf
