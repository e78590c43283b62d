// SPDX-License-Identifier: Apache-2.0
//
// Seeded random streams. Gaussian draws are generated with an explicit
// Box-Muller transform so that a (seed, stream) pair maps to the same byte
// sequence on every run, independent of the standard library's
// std::normal_distribution internals.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "jrc/types.hpp"

namespace jrc {

/// splitmix64 finalizer; decorrelates trivially related stream ids.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a master seed and a stream id.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(seed ^ mix64(stream_id + 0x51ed2701a9b3c6dfULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Standard circularly-symmetric complex Gaussian, E|z|^2 = 1.
  cplx cgaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1));
    return std::polar(r, 2.0 * std::numbers::pi * u2);
  }

  /// Real standard normal.
  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 gen_;
};

} // namespace jrc
