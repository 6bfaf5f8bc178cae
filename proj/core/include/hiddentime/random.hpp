#pragma once

#include <cstdint>
#include <random>

namespace hiddentime {

/// SplitMix64 finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-trial seed: splitmix64(master ^ splitmix64(index)). Trials therefore
/// draw from independent streams regardless of the order they run in.
constexpr std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
  return splitmix64(master_seed ^ splitmix64(stream_index));
}

/// Deterministic draw sequence for one (master_seed, stream_index) pair,
/// backed by std::mt19937_64 (its output sequence is fixed by the standard).
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed),
        stream_index_(stream_index),
        engine_(mix_seed(master_seed, stream_index)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

}  // namespace hiddentime
