#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace claimrep {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Named substream derivation: every randomized stage seeds its own generator
// from (master seed, tag), so results do not depend on evaluation order or
// thread count.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t state = master ^ fnv1a64(tag);
  splitmix64(state);
  return splitmix64(state);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  splitmix64(state);
  return splitmix64(state);
}

// xoshiro256**. Self-contained so that streams are bit-identical across
// platforms and standard libraries; all randomness in the library goes
// through this class.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; one value per call keeps the stream
  // independent of caller usage patterns.
  double normal() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace claimrep
