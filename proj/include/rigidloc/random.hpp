#pragma once

#include <cstdint>
#include <limits>

namespace rigidloc {

/// What a substream is used for. Distinct purposes never share draws.
enum class StreamPurpose : std::uint64_t {
  kAnchors = 1,
  kRangeNoise = 2,
  kPerturbation = 3,
  kTest = 99,
};

/// Counter-based generator (SplitMix64). Output k is a fixed bijective mix
/// of key + k·γ, so a stream is fully determined by its key and position.
/// Satisfies UniformRandomBitGenerator, so it drives <random> distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t key) : key_(key) {}

  /// Independent substream for (master seed, trial, purpose).
  static RandomStream substream(std::uint64_t master_seed, std::uint64_t trial,
                                StreamPurpose purpose);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// The SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

}  // namespace rigidloc
