// SPDX-License-Identifier: Apache-2.0
#include "deconv/entire_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "deconv/parallel.hpp"

namespace deconv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNudge = 0.37;
constexpr double kSmallRatio = 1e-13;
constexpr double kIntegralityTol = 0.02;
constexpr int kMaxNudges = 8;

void require_increasing_radii(std::span<const double> radii, const char* op) {
  if (radii.empty()) throw ValidationError(op, "empty radius list");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i]))
      throw ValidationError(op, "radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ValidationError(op, "radii must increase");
  }
}

double wrap(double a) {
  a = std::remainder(a, kTwoPi);
  return a;
}

enum class ContourStatus { Ok, NearZero, PhaseJump, NotIntegral };

struct ContourResult {
  ContourStatus status = ContourStatus::Ok;
  long winding = 0;
  double integral = 0.0;
};

ContourResult trace_contour(const SampledSignal& kernel, const SampledSignal& t_kernel, double r,
                            std::size_t m) {
  std::vector<LogComplex> phi(m);
  std::vector<LogComplex> dphi(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    const Complex z = std::polar(r, th);
    phi[j] = laplace_log_at(kernel, z);
    dphi[j] = laplace_log_at(t_kernel, z);
  }
  // A sample is "near a zero" when the sum has cancelled to within 1e-13 of
  // the absolute size of its terms at that point.
  ContourResult res;
  for (std::size_t j = 0; j < m; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    if (phi[j].log_abs < laplace_envelope_log(kernel, r * std::cos(th)) + std::log(kSmallRatio)) {
      res.status = ContourStatus::NearZero;
      return res;
    }
  }

  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = wrap(phi[(j + 1) % m].arg - phi[j].arg);
    if (std::abs(d) > 0.5 * std::numbers::pi) {
      res.status = ContourStatus::PhaseJump;
      return res;
    }
    total += d;
  }
  res.winding = std::lround(total / kTwoPi);

  // (1/M) sum z Phi'(z) / Phi(z): trapezoid rule for the logarithmic derivative.
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    if (dphi[j].log_abs == -std::numeric_limits<double>::infinity()) continue;
    const double mag = r * std::exp(dphi[j].log_abs - phi[j].log_abs);
    acc += mag * std::cos(th + dphi[j].arg - phi[j].arg);
  }
  res.integral = acc / static_cast<double>(m);
  if (std::abs(res.integral - static_cast<double>(res.winding)) > kIntegralityTol)
    res.status = ContourStatus::NotIntegral;
  return res;
}

}  // namespace

GrowthEstimate growth_profile(const SampledSignal& kernel, std::span<const double> radii) {
  constexpr const char* op = "entire_diagnostics.growth_profile";
  require_increasing_radii(radii, op);
  const auto supp = kernel.support();
  if (!supp) throw ValidationError(op, "kernel is identically zero");
  const double slack = 1e-9 + 1e-6 * kernel.spacing();
  if (kernel.t_at(supp->first) < -slack || kernel.t_at(supp->second) > 1.0 + slack ||
      kernel.truncation_tail() != 0.0)
    throw ValidationError(op, "kernel support must lie in [0, 1]");

  GrowthEstimate g;
  g.radii.assign(radii.begin(), radii.end());
  const std::size_t n = radii.size();
  g.log_ratio_pos.resize(n);
  g.log_ratio_neg.resize(n);
  g.excluded.assign(n, false);
  std::vector<char> bad(n, 0);
  parallel_for(n, [&](std::size_t i) {
    const double r = radii[i];
    const LogComplex pos = laplace_log_at(kernel, r);
    const LogComplex neg = laplace_log_at(kernel, -r);
    g.log_ratio_pos[i] = pos.log_abs / r;
    g.log_ratio_neg[i] = neg.log_abs / r;
    bad[i] = !std::isfinite(pos.log_abs) || !std::isfinite(neg.log_abs);
  });
  const std::size_t start = (2 * n) / 3;
  double pos_max = -std::numeric_limits<double>::infinity();
  double neg_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    g.excluded[i] = bad[i] != 0;
    if (i < start || g.excluded[i]) continue;
    pos_max = std::max(pos_max, g.log_ratio_pos[i]);
    neg_max = std::max(neg_max, g.log_ratio_neg[i]);
  }
  if (!std::isfinite(pos_max) || !std::isfinite(neg_max))
    throw ComputationError(op, "every radius in the tail window underflowed");
  g.sigma_hat = pos_max;
  g.mu_hat = -neg_max;
  return g;
}

ZeroCount count_zeros(const SampledSignal& kernel, double r, std::size_t contour_points) {
  constexpr const char* op = "entire_diagnostics.count_zeros";
  if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError(op, "radius must be positive");
  if (kernel.truncation_tail() != 0.0)
    throw ValidationError(op, "kernel must have compact support");
  if (!kernel.support()) throw ValidationError(op, "kernel is identically zero");
  if (static_cast<double>(contour_points) < 64.0 * r)
    throw ValidationError(op, "contour_points must be at least 64 r");
  // The trapezoid sum is periodic in Im z with period 2 pi / h.
  if (!(r * kernel.spacing() < 0.5 * std::numbers::pi))
    throw ValidationError(op, "radius too large for the kernel sampling step");

  std::vector<Complex> tv(kernel.size());
  for (std::size_t k = 0; k < tv.size(); ++k) tv[k] = kernel.t_at(k) * kernel[k];
  const SampledSignal t_kernel(kernel.t_min(), kernel.spacing(), std::move(tv));

  ZeroCount out;
  out.radius = r;
  out.contour_points = contour_points;
  // One refinement is allowed per radius; a nudge moves to a new radius.
  bool refined_here = false;
  for (int nudges = 0;;) {
    ContourResult res = trace_contour(kernel, t_kernel, out.radius, out.contour_points);
    if (res.status == ContourStatus::NearZero) {
      if (++nudges > kMaxNudges) throw ComputationError(op, "contour keeps passing through zeros");
      out.radius += kNudge * (kTwoPi / static_cast<double>(out.contour_points)) * out.radius;
      out.nudged = true;
      refined_here = false;
      continue;
    }
    if (res.status == ContourStatus::PhaseJump || res.status == ContourStatus::NotIntegral) {
      if (refined_here)
        throw ComputationError(op, res.status == ContourStatus::PhaseJump
                                       ? "phase jump above pi/2 persists at 4x contour points"
                                       : "winding integral is not within 0.02 of an integer");
      out.refined = true;
      refined_here = true;
      out.contour_points *= 4;
      continue;
    }
    if (res.winding < 0) throw ComputationError(op, "negative winding number");
    out.count = static_cast<std::size_t>(res.winding);
    out.winding_integral = res.integral;
    return out;
  }
}

ZeroCountReport zero_density(const SampledSignal& kernel, std::span<const double> radii,
                             double points_per_radius) {
  constexpr const char* op = "entire_diagnostics.zero_density";
  require_increasing_radii(radii, op);
  if (!(points_per_radius >= 64.0)) throw ValidationError(op, "need at least 64 points per unit radius");
  ZeroCountReport rep;
  rep.radii.assign(radii.begin(), radii.end());
  std::vector<ZeroCount> zc(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    const auto m = static_cast<std::size_t>(std::ceil(points_per_radius * radii[i]));
    zc[i] = count_zeros(kernel, radii[i], std::max<std::size_t>(m, 64));
  });
  for (std::size_t i = 0; i < radii.size(); ++i) {
    rep.counts.push_back(zc[i].count);
    rep.densities.push_back(static_cast<double>(zc[i].count) / radii[i]);
    rep.winding_integrals.push_back(zc[i].winding_integral);
  }
  rep.d_hat = std::numbers::pi * rep.densities.back();
  try {
    const GrowthEstimate g = growth_profile(kernel, radii);
    rep.sigma_hat = g.sigma_hat;
    rep.mu_hat = g.mu_hat;
    rep.predicted_density = (g.sigma_hat - g.mu_hat) / std::numbers::pi;
  } catch (const ValidationError&) {
    // support outside [0, 1]: no growth prediction
  }
  return rep;
}

}  // namespace deconv
