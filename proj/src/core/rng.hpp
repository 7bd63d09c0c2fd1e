#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace svpf {

// Derives the seed of an independent substream as a pure function of
// (master, index), so stream i never depends on how many other streams
// were created before it.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Deterministic random stream. Gaussians use the basic Box-Muller form,
// exactly two uniforms per draw, which keeps the consumption pattern easy
// to replicate in reference traces.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kTwoPi * u2);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

}  // namespace svpf
