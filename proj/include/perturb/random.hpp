#pragma once

#include <cstdint>

namespace perturb {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Reproducible xoshiro256** stream keyed by (master_seed, stream_id).
 *
 * Derivation rule:
 *   key      = mix64(master_seed + 0x9e3779b97f4a7c15) ^ mix64(stream_id ^ 0xd1b54a32d192ed03)
 *   state[i] = mix64(key + (i + 1) * 0x9e3779b97f4a7c15),  i = 0..3
 * Every draw below (uniform reals, bounded integers, geometric skips) is
 * computed from the raw 64-bit outputs by fixed arithmetic, so streams are
 * identical on every platform. Standard-library distributions are not used
 * because their algorithms are implementation-defined.
 */
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next();
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_zero() { return 1.0 - uniform(); }
  /// Unbiased uniform integer in [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p) { return uniform() < p; }
  /// Number of failures before the first success of a Bernoulli(p) sequence, 0 < p <= 1.
  std::uint64_t geometric(double p);

  /// Independent child stream, deterministic in (this stream's key, child_id).
  RngStream derive(std::uint64_t child_id) const;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t s_[4];
};

}  // namespace perturb
