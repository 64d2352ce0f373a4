#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace mmw {

/// Deterministic random stream, version 1.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each stream is seeded with `derive_seed(master, tag, keys...)`,
/// a SplitMix64 fold of the master seed, an FNV-1a hash of `tag` and the
/// integer keys. Distributions are implemented here rather than taken from
/// <random> because the standard leaves their algorithms unspecified.
class RandomStream {
 public:
  static constexpr int kVersion = 1;

  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t master, std::string_view tag,
               std::initializer_list<std::uint64_t> keys = {})
      : engine_(derive_seed(master, tag, keys)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = next();
      if (x >= limit) return x % bound;
    }
  }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                   std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    std::uint64_t s = splitmix64(master ^ splitmix64(h));
    for (std::uint64_t k : keys) s = splitmix64(s ^ k);
    return s;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mmw
