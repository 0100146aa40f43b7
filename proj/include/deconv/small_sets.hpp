// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "deconv/grid_signal.hpp"
#include "deconv/tail_profile.hpp"

namespace deconv {

struct SmallSetReport {
  double eps = 0.0;
  double threshold = 0.0;
  double r_eps = 0.0;
  double resolution = 0.0;
  double measure_estimate = 0.0;
  double bound = 0.0;
  std::size_t interval_count = 0;
  std::vector<std::pair<double, double>> intervals;
  Warnings warnings;
};

/// Measure of {|lambda| <= r : |phi_hat(lambda)| <= threshold}. Sub-threshold
/// runs of the scan are merged into intervals whose endpoints are refined by
/// bisection to 1e-3 * resolution. Requires resolution <= r / 1e4.
SmallSetReport measure_small_set(const SpectrumFn& phi_hat, double threshold, double r,
                                 double resolution);

/// measure_small_set at threshold eps^beta with the bound r_eps^(1/2 - q).
SmallSetReport assess_small_set(const SpectrumFn& phi_hat, double eps, double beta, double q,
                                double r_eps, double resolution);

/// r^(1/2 - q). Requires q > 1/2 and r > 0.
double cartan_bound(double q, double r_eps);

/// The kernel zeroed outside [-s_eps, s_eps].
SampledSignal truncated_kernel(const SampledSignal& kernel, double s_eps);

struct Theo4Radius {
  double radius = 0.0;
  double asymptotic_ratio = 0.0;  // log p*(2R+1) / log log(1/eps)
  std::string reading;            // how the ambiguous log term was read
};

/// Root of [(q+1/2) R + log(15 e^3)] [1 + log(2R) + p*(2R+1)] = -log eps.
/// pstar must cover [1, 2R+1].
Theo4Radius theo4_radius(double eps, double q, const DualProfile& pstar);

}  // namespace deconv
