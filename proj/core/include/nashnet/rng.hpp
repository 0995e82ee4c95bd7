#pragma once

#include <cstdint>
#include <random>

namespace nashnet {

/// Seedable 64-bit generator with a portable real mapping. The standard
/// distributions are implementation-defined, so draws go through the raw
/// mt19937_64 stream to keep generated instances identical across
/// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) built from the top 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [0, bound). Rejection sampling avoids modulo bias.
  std::uint64_t below(std::uint64_t bound);

  bool bernoulli(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % bound;
}

}  // namespace nashnet
