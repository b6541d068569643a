#ifndef DSR_RNG_HPP
#define DSR_RNG_HPP

#include <cstdint>

namespace dsr {

/// Counter-based generator (SplitMix64 output function over an incrementing
/// counter). A stream is identified by (seed, k, index); draws depend only
/// on the stream key and the draw counter, so batches are reproducible
/// across platforms and independent of scenario evaluation order.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t k = 0, uint64_t index = 0)
      : key_(derive_key(seed, k, index)) {}

  static uint64_t mix(uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t next() { return mix(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), rejection sampled (no modulo bias).
  uint64_t below(uint64_t n) {
    const uint64_t limit = n * (UINT64_MAX / n);
    uint64_t z;
    do {
      z = next();
    } while (z >= limit);
    return z % n;
  }

 private:
  static uint64_t derive_key(uint64_t seed, uint64_t k, uint64_t index) {
    return mix(mix(mix(seed) ^ (k * 0xD1342543DE82EF95ull)) ^
               (index * 0xAF251AF3B0F025B5ull));
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace dsr

#endif
