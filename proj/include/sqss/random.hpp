#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace sqss {

// splitmix64 finalizer; used for seed derivation only.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Pure function of (seed, tag): the seed of a derived child stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag + 1));
}

/// Deterministic random source. mt19937_64 is fully specified by the
/// standard and the conversions below avoid std::*_distribution, so
/// identical seeds produce identical outcome sequences on any platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  int bit() { return static_cast<int>(next_u64() & 1u); }

  /// Uniform integer in [0, n); n must be nonzero.
  std::size_t index_below(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index_below(i)]);
    }
  }

  /// Child stream; a pure function of the construction seed and tag,
  /// independent of how much has been drawn from this stream.
  RandomSource fork(std::uint64_t tag) const {
    return RandomSource(derive_seed(seed_, tag));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sqss
