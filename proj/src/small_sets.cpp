// SPDX-License-Identifier: Apache-2.0
#include "deconv/small_sets.hpp"

#include <cmath>

#include "deconv/parallel.hpp"
#include "deconv/root_finding.hpp"

namespace deconv {

namespace {
const double kLog15e3 = std::log(15.0) + 3.0;
}

SmallSetReport measure_small_set(const SpectrumFn& phi_hat, double threshold, double r,
                                 double resolution) {
  constexpr const char* op = "small_sets.measure_small_set";
  if (!(threshold > 0.0)) throw ValidationError(op, "threshold must be positive");
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError(op, "radius must be positive");
  if (!(resolution > 0.0) || resolution > r / 1e4)
    throw ValidationError(op, "resolution must lie in (0, r/1e4]");

  const auto steps = static_cast<std::size_t>(std::ceil(2.0 * r / resolution));
  std::vector<double> lam(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j)
    lam[j] = std::min(r, -r + static_cast<double>(j) * resolution);
  std::vector<double> amp(lam.size());
  parallel_for(lam.size(), [&](std::size_t j) { amp[j] = std::abs(phi_hat(lam[j])); });

  auto excess = [&](double x) { return std::abs(phi_hat(x)) - threshold; };
  const double tol = 1e-3 * resolution;

  SmallSetReport rep;
  rep.threshold = threshold;
  rep.r_eps = r;
  rep.resolution = resolution;
  std::size_t j = 0;
  while (j < lam.size()) {
    if (amp[j] > threshold) {
      ++j;
      continue;
    }
    const std::size_t first = j;
    while (j + 1 < lam.size() && amp[j + 1] <= threshold) ++j;
    const std::size_t last = j;
    const double lo = first == 0 ? lam[0] : bisect(excess, lam[first - 1], lam[first], tol, op);
    const double hi =
        last + 1 == lam.size() ? lam[last] : bisect(excess, lam[last], lam[last + 1], tol, op);
    rep.intervals.emplace_back(lo, hi);
    rep.measure_estimate += hi - lo;
    if (hi - lo < 4.0 * resolution)
      rep.warnings.push_back("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                             "] is shorter than 4 scan steps; structure may be missed");
    ++j;
  }
  rep.interval_count = rep.intervals.size();
  return rep;
}

SmallSetReport assess_small_set(const SpectrumFn& phi_hat, double eps, double beta, double q,
                                double r_eps, double resolution) {
  SmallSetReport rep = measure_small_set(phi_hat, std::pow(eps, beta), r_eps, resolution);
  rep.eps = eps;
  rep.bound = cartan_bound(q, r_eps);
  return rep;
}

double cartan_bound(double q, double r_eps) {
  if (!(q > 0.5) || !(r_eps > 0.0))
    throw ValidationError("small_sets.cartan_bound", "need q > 1/2 and r > 0");
  return std::pow(r_eps, 0.5 - q);
}

SampledSignal truncated_kernel(const SampledSignal& kernel, double s_eps) {
  if (!(s_eps >= 0.0)) throw ValidationError("small_sets.truncated_kernel", "need s_eps >= 0");
  std::vector<Complex> v(kernel.values().begin(), kernel.values().end());
  for (std::size_t k = 0; k < v.size(); ++k)
    if (std::abs(kernel.t_at(k)) > s_eps) v[k] = 0.0;
  return {kernel.t_min(), kernel.spacing(), std::move(v)};
}

Theo4Radius theo4_radius(double eps, double q, const DualProfile& pstar) {
  constexpr const char* op = "small_sets.theo4_radius";
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError(op, "need 0 < eps < 1");
  if (!(q > 0.5)) throw ValidationError(op, "q must exceed 1/2");
  if (pstar.s_grid.empty() || pstar.s_grid.front() > 1.0)
    throw ValidationError(op, "dual profile must cover sigma = 1");
  const double rhs = -std::log(eps);
  const double sigma_max = pstar.s_grid.back();
  auto second = [&](double r) { return 1.0 + std::log(2.0 * r) + pstar.value_at(2.0 * r + 1.0); };
  auto f = [&](double r) { return ((q + 0.5) * r + kLog15e3) * second(r) - rhs; };

  // Left edge of the domain where the second bracket is nonnegative.
  double lo = 1e-12;
  if (second(lo) < 0.0) {
    double up = 1e-12;
    while (second(up) < 0.0) {
      up *= 2.0;
      if (2.0 * up + 1.0 > sigma_max) throw ComputationError(op, "dual profile too short");
    }
    lo = bisect(second, lo, up, 1e-15 * up, op);
  }
  double hi = std::max(2.0 * lo, 1e-6);
  while (f(hi) <= 0.0) {
    hi *= 2.0;
    if (2.0 * hi + 1.0 > sigma_max) throw ComputationError(op, "dual profile too short");
  }
  Theo4Radius out;
  out.radius = bisect(f, lo, hi, 1e-14 * hi, op);
  out.asymptotic_ratio =
      std::log(pstar.value_at(2.0 * out.radius + 1.0)) / std::log(std::log(1.0 / eps));
  out.reading = "log(2R)";
  return out;
}

}  // namespace deconv
