// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "deconv/grid_signal.hpp"

namespace deconv {

/// SplitMix64. Each call to next() advances the state by the golden-ratio
/// increment 0x9e3779b97f4a7c15 and returns
///   z ^= z >> 30; z *= 0xbf58476d1ce4e5b9;
///   z ^= z >> 27; z *= 0x94d049bb133111eb;
///   z ^= z >> 31.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// (next() >> 11) * 2^-53, in [0, 1).
  double uniform();
  /// Box-Muller from two consecutive uniforms: sqrt(-2 log(1 - u1)) * cos(2 pi u2).
  /// The paired sine value is discarded so the stream position is fixed.
  double normal();

 private:
  std::uint64_t state_;
};

struct NoisyPair {
  SampledSignal phi_eps;
  SampledSignal g_eps;
  SampledSignal phi_perturbation;  // phi_eps - phi0 as added
  SampledSignal g_perturbation;    // g_eps - g0 as added
};

/// Adds a fixed bump of L1 norm eps/2 to phi0 and a seeded smooth random
/// signal of L2 norm eps/2 to g0. eps = 0 returns the inputs unchanged.
NoisyPair inject_noise(const SampledSignal& phi0, const SampledSignal& g0, double eps,
                       std::uint64_t seed);

}  // namespace deconv
