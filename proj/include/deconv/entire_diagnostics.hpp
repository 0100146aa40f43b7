// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "deconv/grid_signal.hpp"

namespace deconv {

struct GrowthEstimate {
  std::vector<double> radii;
  std::vector<double> log_ratio_pos;  // log|Phi(R)| / R
  std::vector<double> log_ratio_neg;  // log|Phi(-R)| / R
  std::vector<bool> excluded;         // |Phi(+-R)| underflowed at this radius
  double sigma_hat = 0.0;
  double mu_hat = 0.0;
};

struct ZeroCount {
  std::size_t count = 0;
  double radius = 0.0;          // after any nudge
  std::size_t contour_points = 0;
  double winding_integral = 0.0;  // (1/2 pi i) contour integral of Phi'/Phi
  bool nudged = false;
  bool refined = false;  // retried at 4x contour points
};

struct ZeroCountReport {
  std::vector<double> radii;
  std::vector<std::size_t> counts;
  std::vector<double> densities;
  std::vector<double> winding_integrals;
  double d_hat = 0.0;
  std::optional<double> sigma_hat;
  std::optional<double> mu_hat;
  std::optional<double> predicted_density;  // (sigma_hat - mu_hat) / pi
};

/// Requires the kernel support inside [0, 1]. sigma_hat is the maximum of
/// log_ratio_pos over the last third of the radii, mu_hat minus the maximum
/// of log_ratio_neg there; underflowed radii are skipped.
GrowthEstimate growth_profile(const SampledSignal& kernel, std::span<const double> radii);

/// Zeros of Phi in |z| <= r by phase tracking on the circle, cross-checked
/// against the trapezoid value of the logarithmic-derivative integral.
/// Requires a compactly supported kernel and contour_points >= 64 r.
ZeroCount count_zeros(const SampledSignal& kernel, double r, std::size_t contour_points);

/// n(R)/R over the radii with d_hat = pi * (last density). The growth
/// prediction is filled in when the kernel support lies in [0, 1].
ZeroCountReport zero_density(const SampledSignal& kernel, std::span<const double> radii,
                             double points_per_radius = 64.0);

}  // namespace deconv
