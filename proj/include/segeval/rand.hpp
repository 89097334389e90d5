#pragma once

#include <cstdint>
#include <string_view>

// Deterministic, platform-independent randomness. All stochastic components
// (random scorer, oracle-density baseline, bootstrap resampling) derive their
// streams from a single master seed via stable hashing, so results never
// depend on evaluation order, thread count, or the standard library's
// distribution implementations.

namespace segeval {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable stream seed for (master seed, entity id, purpose, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view id,
                                 std::string_view purpose, std::uint64_t extra = 0) {
  std::uint64_t h = fnv1a64(purpose);
  h = fnv1a64("\x1f", h);
  h = fnv1a64(id, h);
  return mix64(mix64(master ^ h) ^ extra);
}

class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n) without std::uniform_int_distribution (whose output is
  // implementation-defined). Multiply-shift keeps bias negligible.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace segeval
