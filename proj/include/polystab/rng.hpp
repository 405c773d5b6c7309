#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace polystab {

/// splitmix64: tiny, fast, and identical on every platform. Used everywhere
/// randomness is needed so reports are reproducible bit-for-bit across
/// compilers and thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Uniform point of the standard (k-1)-simplex via normalized exponentials.
  std::vector<double> simplex(int k) {
    std::vector<double> w(static_cast<size_t>(k));
    double total = 0.0;
    for (double& x : w) {
      x = -std::log(1.0 - uniform());
      total += x;
    }
    for (double& x : w) x /= total;
    return w;
  }

  /// Derives an independent stream for item `index`; the basis of
  /// seed-partitioned per-worker randomness.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    Rng mix(seed ^ (0x9e3779b97f4a7c15ull + index * 0xff51afd7ed558ccdull));
    return Rng(mix.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace polystab
