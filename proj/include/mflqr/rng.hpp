#pragma once

#include <cstdint>

namespace mflqr {

/// Counter-free SplitMix64 generator (Steele, Lea, Flood 2014; finalizer
/// constants due to Stafford's Mix13). Chosen over <random> engines because
/// the output stream is fully specified here, independent of the standard
/// library implementation, which the byte-identical reproducibility contract
/// of the CLI requires.
struct RngState {
  std::uint64_t state;

  explicit RngState(std::uint64_t seed) : state(seed) {}

  std::uint64_t next_u64() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
};

/// Derives the seed of run `run_index` from `base_seed`. Runs are decorrelated
/// by pushing (base, index) through the SplitMix64 finalizer, so an ensemble
/// is reproducible from (base_seed, n_runs) alone and independent of how runs
/// are scheduled across threads.
inline std::uint64_t run_seed(std::uint64_t base_seed, std::uint64_t run_index) {
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (run_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mflqr
