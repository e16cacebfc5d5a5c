#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace cylab {

// splitmix64, used only to derive seeds and stream states.
inline uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// xoshiro256++ core. One instance per (experiment, replicate) stream, so
// replicates are reproducible and independent of scheduling order.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  // Named stream derivation: master seed + stream name + replicate index.
  // Adding replicates never reshuffles existing ones.
  static Rng stream(uint64_t master, std::string_view name, uint64_t replicate) {
    uint64_t s = master ^ fnv1a64(name);
    uint64_t base = splitmix64(s);
    return Rng(base + 0x9e3779b97f4a7c15ull * replicate);
  }

  uint64_t next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in (0,1); never returns 0 so logs are safe.
  double u01() {
    for (;;) {
      double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  // Uniform in [0, n), n >= 1. Lemire's multiply-shift with rejection.
  uint64_t below(uint64_t n) {
    uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    uint64_t l = static_cast<uint64_t>(m);
    if (l < n) {
      uint64_t t = (-n) % n;
      while (l < t) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        l = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return u01() < p; }

  double exponential(double rate) { return -std::log(u01()) / rate; }

  // Geometric on {1,2,...} with success probability p.
  int64_t geometric(double p) {
    if (p >= 1.0) return 1;
    double u = u01();
    return 1 + static_cast<int64_t>(std::floor(std::log(u) / std::log1p(-p)));
  }

  // Poisson by summed exponentials in log space; fine for the lambdas we use
  // (at most a few hundred).
  int64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    double s = 0.0;
    int64_t n = 0;
    for (;;) {
      s += -std::log(u01());
      if (s >= lambda) return n;
      ++n;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

}  // namespace cylab
