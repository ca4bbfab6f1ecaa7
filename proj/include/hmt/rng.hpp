// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "hmt/types.hpp"

namespace hmt {

// SplitMix64-style avalanche. The constants are part of the reproducibility
// contract (see README): per-trial seeds are derive_seed(master_seed, index),
// so independent runs and worker counts agree on every stream.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master + 0x9E3779B97F4A7C15ULL * (index + 1));
}

// Per-trial random stream. The engine is the fully specified std::mt19937_64;
// all transforms are written out here so draws do not depend on standard
// library distribution internals.
class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on open (0, 1).
  double uniform01() {
    const std::uint64_t bits = eng_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller, one spare cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform01()));
    const double th = 2.0 * kPi * uniform01();
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  // Circularly symmetric complex normal with E|z|^2 = variance.
  cplx complex_normal(double variance) {
    const double s = std::sqrt(variance / 2.0);
    return {s * normal(), s * normal()};
  }

  double exponential(double mean) { return -mean * std::log(uniform01()); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hmt
