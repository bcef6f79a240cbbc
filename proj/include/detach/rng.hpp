#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace detach {

// 64-bit finalizer (splitmix64 constants). Serves both as the stream
// scrambler and as the per-stream generator step.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Addressable randomness: (master_seed, stream_index) fully determines the
// draw sequence. Replications can therefore run in any order, or in
// parallel, and still reproduce bit for bit.
struct RngSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  RngSpec at(std::uint64_t stream) const { return {master_seed, stream}; }
  RngSpec offset(std::uint64_t delta) const {
    return {master_seed, stream_index + delta};
  }
  // Disjoint substream family for a named purpose.
  RngSpec fork(std::string_view label) const {
    return {master_seed, mix64(stream_index ^ fnv1a64(label))};
  }
  RngSpec fork(std::uint64_t salt) const {
    return {master_seed, mix64(stream_index ^ mix64(salt + 0x9e3779b97f4a7c15ULL))};
  }
};

// splitmix64 sequence seeded from a (seed, stream) pair.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(RngSpec spec)
      : state_(mix64(mix64(spec.master_seed + 0x9e3779b97f4a7c15ULL) ^
                     mix64(spec.stream_index + 0x7f4a7c159e3779b9ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform integer on [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t reject_below = (0ULL - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= reject_below) return r % bound;
    }
  }

  // UniformRandomBitGenerator interface for <random> distributions.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t state_;
};

}  // namespace detach
