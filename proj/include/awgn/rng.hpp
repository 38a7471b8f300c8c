#pragma once

#include <cmath>
#include <cstdint>

namespace awgn {

// Counter-based stream: the state is a hash of (seed, stream), advanced by a
// Weyl increment and finalized per draw (splitmix64).  Streams with distinct
// keys are independent regardless of evaluation order, which makes trial
// results reproducible under any thread scheduling.
class counter_rng {
 public:
  counter_rng(std::uint64_t seed, std::uint64_t stream) {
    state_ = mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream + 0xbf58476d1ce4e5b9ull);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // uniform on (0, 1): never returns 0 so it is safe inside log()
  double next_double() {
    return ((double)(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

  // standard normal via Box-Muller, pairs cached
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_double(), u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace awgn
