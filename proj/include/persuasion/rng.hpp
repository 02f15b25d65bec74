#pragma once

#include <cstdint>

namespace persuasion {

/// Counter-based generator ("splitmix64-ctr v1"). The n-th output of stream s
/// under seed x is a pure function of (x, s, n), so chunks of work can be
/// given their own stream and still reproduce a serial run exactly.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-ctr v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  std::uint64_t next() {
    ++counter_;
    return mix(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n > 0. Rejection keeps it exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  /// A generator for an independent substream, derived from this one's key.
  CounterRng split(std::uint64_t stream) const {
    CounterRng child(0);
    child.key_ = mix(key_ ^ mix(stream + 0xD1B54A32D192ED03ULL));
    return child;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace persuasion
