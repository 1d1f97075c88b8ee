#pragma once

#include <complex>
#include <cstdint>

namespace ffprog {

/// SplitMix64. The state advances by the golden-ratio increment
/// 0x9E3779B97F4A7C15 and each output is the state passed through the
/// finalizer
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   z =  z ^ (z >> 31)
/// Doubles take the top 53 bits. `split(key)` derives an independent stream by
/// mixing the current seed with `key`, so per-cell streams do not depend on
/// the order cells are run in.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : seed_(seed), state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform point of the closed unit disk.
  std::complex<double> unit_disk() {
    for (;;) {
      const double re = 2.0 * uniform() - 1.0;
      const double im = 2.0 * uniform() - 1.0;
      if (re * re + im * im <= 1.0) return {re, im};
    }
  }

  /// Uniform point of the unit circle.
  std::complex<double> unit_circle();

  SplitMix64 split(std::uint64_t key) const {
    return SplitMix64(mix(seed_ ^ mix(key + 0x9E3779B97F4A7C15ULL)));
  }

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace ffprog
