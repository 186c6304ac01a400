#pragma once

#include <cmath>
#include <cstdint>

namespace slideplan {

// Deterministic PRNG with a stable output sequence across platforms and
// standard-library versions (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed != 0 ? seed : 0x9e3779b97f4a7c15ull) {}

  uint64_t next_u64() {
    // splitmix64
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(next_u64() % static_cast<uint64_t>(hi - lo + 1));
  }

  double gaussian(double sigma) {
    // Box-Muller; one sample per call, cached pair discarded for simplicity.
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  uint64_t state_;
};

// Stable seed derivation for independent sub-streams.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  Rng r(base ^ (0x6a09e667f3bcc909ull + stream * 0x3c6ef372fe94f82aull));
  return r.next_u64();
}

}  // namespace slideplan
