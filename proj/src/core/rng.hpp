#pragma once

#include <cstdint>
#include <random>

namespace gridsec {

// splitmix64 finalizer; used both as a mixer for substream derivation and to
// expand seeds.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Named substream purposes. Every random decision in a scenario is drawn from
// hash(master, purpose, day, household) so that attack and baseline runs share
// forecast noise byte for byte.
enum class Stream : uint64_t {
  demand = 1,
  household_shape = 2,
  forecast = 3,
  uc_estimate = 4,
  victims = 5,
  test = 6,
};

inline uint64_t substream_seed(uint64_t master, Stream purpose, uint64_t day = 0,
                               uint64_t household = 0) {
  uint64_t h = mix64(master);
  h = mix64(h ^ static_cast<uint64_t>(purpose));
  h = mix64(h ^ day);
  h = mix64(h ^ household);
  return h;
}

// Deterministic RNG. The gaussian uses an explicit Box-Muller transform so the
// byte stream never depends on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix64(seed)) {}

  uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  uint64_t uniform_below(uint64_t n) {
    // rejection sampling to avoid modulo bias
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mean + stddev * r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gridsec
