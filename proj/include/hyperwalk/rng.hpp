#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hyperwalk {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the bytes of a label.
constexpr std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of replica `replica` of experiment `experiment` under master seed `seed`:
/// mix64(mix64(seed ^ fnv1a(experiment)) + replica).
constexpr std::uint64_t replica_seed(std::uint64_t seed, std::string_view experiment, std::uint64_t replica) {
  return mix64(mix64(seed ^ hash_label(experiment)) + replica);
}

/// Seeded 64-bit stream with a draw counter. Conversions to doubles and bounded
/// integers are done here (not with <random> distributions) so that streams are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() {
    ++draws_;
    return engine_();
  }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform on {0, ..., n-1}; n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }
  bool coin() { return (next_u64() >> 63) != 0; }

  [[nodiscard]] std::uint64_t draws() const { return draws_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace hyperwalk
