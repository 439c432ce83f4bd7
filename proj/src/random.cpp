#include "perturb/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace perturb {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
  const std::uint64_t key = mix64(master_seed + kGolden) ^ mix64(stream_id ^ 0xd1b54a32d192ed03ULL);
  for (int i = 0; i < 4; ++i) s_[i] = mix64(key + static_cast<std::uint64_t>(i + 1) * kGolden);
}

std::uint64_t RngStream::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t RngStream::geometric(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric: p must lie in (0, 1]");
  if (p == 1.0) return 0;
  const double skip = std::floor(std::log(uniform_open_zero()) / std::log1p(-p));
  if (skip >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(skip);
}

RngStream RngStream::derive(std::uint64_t child_id) const {
  return RngStream(mix64(master_seed_ ^ mix64(stream_id_ + kGolden)), child_id);
}

}  // namespace perturb
