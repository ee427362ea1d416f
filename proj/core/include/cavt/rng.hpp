#pragma once

#include <cstdint>
#include <random>

namespace cavt {

/// Seeded random source with portable sampling.
///
/// The engine is std::mt19937_64, whose output sequence is pinned by the
/// standard. Distribution sampling (uniform, normal, bounded integers) is
/// implemented here rather than with <random> distributions, whose results
/// are implementation-defined. Identical seeds therefore produce identical
/// streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in the inclusive range [lo, hi], by rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /// Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal();

  /// Derive an independent stream for shard `stream` of this seed.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cavt
