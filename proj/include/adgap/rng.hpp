#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace adgap {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++, seeded via splitmix64. All Monte Carlo code uses this
// generator plus hand-rolled transforms so that streams are identical
// across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Exponential with the given rate; +inf for rate <= 0.
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform()) / rate;
  }

  // Uniform integer in [0, n). Multiply-shift; bias is negligible for the
  // desk-scale n used here.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
  }

  double uniform_in(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Seed for chunk `chunk` of stream `stream` under a master seed. Chunked
// Monte Carlo draws all randomness for chunk j from substream_seed(m, s, j),
// so results do not depend on how chunks are assigned to worker threads.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t chunk) {
  std::uint64_t st = master ^ 0xd1b54a32d192ed03ULL;
  splitmix64(st);
  st ^= stream * 0x9e3779b97f4a7c15ULL;
  splitmix64(st);
  st ^= chunk * 0xbf58476d1ce4e5b9ULL;
  return splitmix64(st);
}

}  // namespace adgap
