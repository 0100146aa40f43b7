// SPDX-License-Identifier: Apache-2.0
#include "deconv/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace deconv {

namespace {

constexpr std::size_t kSmoothWidth = 16;
constexpr int kSmoothPasses = 3;
constexpr double kTaperFraction = 0.05;
constexpr double kBumpHalfWidth = 0.5;

// Running mean over a centred window, zero padded.
std::vector<double> box_smooth(const std::vector<double>& x, std::size_t width) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  const std::size_t half = width / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += x[j];
    out[i] = s / static_cast<double>(2 * half + 1);
  }
  return out;
}

double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

SampledSignal phi_bump(const SampledSignal& phi0, double target_l1) {
  // Centre at the L1 centroid of |phi0| so the bump sits on the kernel.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < phi0.size(); ++k) {
    const double w = trapezoid_weight(k, phi0.size(), phi0.spacing()) * std::abs(phi0[k]);
    num += w * phi0.t_at(k);
    den += w;
  }
  const double centre = den > 0.0 ? num / den : 0.5 * (phi0.t_min() + phi0.t_max());
  const double half = std::min(kBumpHalfWidth, 0.5 * (phi0.t_max() - phi0.t_min()));
  std::vector<Complex> v(phi0.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = bump((phi0.t_at(k) - centre) / half);
  SampledSignal s(phi0.t_min(), phi0.spacing(), std::move(v));
  const double n1 = l1_norm(s);
  if (!(n1 > 0.0))
    throw ComputationError("noise.inject_noise", "kernel grid too coarse for the bump");
  return s.scaled(target_l1 / n1);
}

SampledSignal g_noise(const SampledSignal& g0, double target_l2, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t n = g0.size();
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  for (int pass = 0; pass < kSmoothPasses; ++pass) x = box_smooth(x, kSmoothWidth);
  const auto ramp = std::max<std::size_t>(1, static_cast<std::size_t>(kTaperFraction * n));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t d = std::min(k, n - 1 - k);
    if (d < ramp) {
      const double s = std::sin(0.5 * std::numbers::pi * static_cast<double>(d) / ramp);
      x[k] *= s * s;
    }
  }
  std::vector<Complex> v(x.begin(), x.end());
  SampledSignal s(g0.t_min(), g0.spacing(), std::move(v));
  const double n2 = l2_norm(s);
  if (!(n2 > 0.0)) throw ComputationError("noise.inject_noise", "degenerate noise draw");
  return s.scaled(target_l2 / n2);
}

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

NoisyPair inject_noise(const SampledSignal& phi0, const SampledSignal& g0, double eps,
                       std::uint64_t seed) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw ValidationError("noise.inject_noise", "eps must be finite and nonnegative");
  if (eps == 0.0)
    return {phi0, g0, SampledSignal::zeros(phi0.grid()), SampledSignal::zeros(g0.grid())};
  SampledSignal dphi = phi_bump(phi0, 0.5 * eps);
  SampledSignal dg = g_noise(g0, 0.5 * eps, seed);
  return {phi0 + dphi, g0 + dg, std::move(dphi), std::move(dg)};
}

}  // namespace deconv
