#pragma once

#include <cstdint>

namespace noc {

// splitmix64. Tiny, seedable, and stable across platforms and standard
// libraries, which keeps traces bit-reproducible from a single seed.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  // uniform in [-s, s]
  double uniform_sym(double s) { return s * (2.0 * uniform() - 1.0); }
};

// Independent stream for substream `index` of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 g(master ^ (0x5851f42d4c957f2dull * (index + 1)));
  return g.next();
}

}  // namespace noc
