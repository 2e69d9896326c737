#pragma once
// Seeded, reproducible randomness. All sampled artifacts record the seed
// they were built from; bounded draws use modulo rejection on raw
// mt19937_64 output so results do not depend on the standard library's
// distribution implementations.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace bitprobe {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw from [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t r;
    do {
      r = gen_();
    } while (r >= limit);
    return r % bound;
  }

  bool coin() { return next_u64() & 1ULL; }

  /// Deterministic derived stream (retry attempts, parallel substreams).
  Rng fork(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x51ED270B56C8AF61ULL)));
  }

  /// k distinct values from [0, n), ascending.
  std::vector<std::uint32_t> distinct(std::uint32_t k, std::uint64_t n) {
    std::vector<std::uint32_t> out;
    out.reserve(k);
    while (out.size() < k) {
      auto v = static_cast<std::uint32_t>(below(n));
      bool seen = false;
      for (auto u : out) {
        if (u == v) {
          seen = true;
          break;
        }
      }
      if (!seen) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace bitprobe
