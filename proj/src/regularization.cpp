// SPDX-License-Identifier: Apache-2.0
#include "deconv/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "deconv/noise.hpp"
#include "deconv/root_finding.hpp"

namespace deconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog15e3 = std::log(15.0) + 3.0;
constexpr double kE = std::numbers::e;

void check_hypotheses(double beta, double q, const char* op) {
  if (!(beta > 0.0 && beta < 1.0 / 3.0)) throw ValidationError(op, "beta must lie in (0, 1/3)");
  if (!(q > 0.5)) throw ValidationError(op, "q must exceed 1/2");
}

bool same_frequencies(const TransformSamples& a, const TransformSamples& b) {
  return a.frequencies == b.frequencies;
}

// Power-law extrapolation of the integral of y beyond the last node, using
// the last two nodes (x1 < x2 in |lambda|).
double power_tail(double x1, double y1, double x2, double y2) {
  if (!(y2 > 0.0)) return 0.0;
  if (!(y1 > 0.0) || !(x1 > 0.0)) return kInf;
  const double alpha = -std::log(y2 / y1) / std::log(x2 / x1);
  if (!(alpha > 1.0)) return kInf;
  return y2 * x2 / (alpha - 1.0);
}

}  // namespace

double r_eps_equation(double r, double eps, double beta, double q, double s_eps,
                      double phi0_l1) {
  const double a = (q + 0.5) * std::log(r) + kLog15e3;
  const double b = std::log(phi0_l1) + 2.0 * kE * s_eps * r;
  return a * b + std::log(std::pow(eps, beta) + eps);
}

double solve_r_eps(double eps, double beta, double q, double s_eps, double phi0_l1) {
  constexpr const char* op = "regularization.solve_r_eps";
  if (!(eps > 0.0) || !(beta > 0.0) || !(q > 0.5) || !(s_eps >= 0.0) || !(phi0_l1 > 0.0))
    throw ValidationError(op, "need eps > 0, beta > 0, q > 1/2, s_eps >= 0, ||phi0||_1 > 0");
  const double rhs = -std::log(std::pow(eps, beta) + eps);
  if (!(rhs > 0.0)) throw ComputationError(op, "no root: -log(eps^beta + eps) <= 0");
  const double log_l1 = std::log(phi0_l1);
  if (s_eps == 0.0 && !(log_l1 > 0.0))
    throw ComputationError(op, "no root: s_eps = 0 and log ||phi0||_1 <= 0");

  // Lower edge of the domain where both brackets are nonnegative; F = -rhs there.
  double lo = std::exp(-kLog15e3 / (q + 0.5));
  if (s_eps > 0.0) lo = std::max(lo, -log_l1 / (2.0 * kE * s_eps));
  auto f = [&](double r) { return r_eps_equation(r, eps, beta, q, s_eps, phi0_l1); };

  double hi = std::max(2.0, 2.0 * lo);
  for (int i = 0; f(hi) <= 0.0; ++i) {
    if (i > 2000 || !std::isfinite(hi)) throw ComputationError(op, "bracket expansion failed");
    hi *= 2.0;
  }
  constexpr int kGuardSamples = 16;
  double prev = f(lo);
  for (int i = 1; i <= kGuardSamples; ++i) {
    const double cur = f(lo + (hi - lo) * i / kGuardSamples);
    if (!(cur > prev)) throw ComputationError(op, "equation is not increasing on the bracket");
    prev = cur;
  }
  return bisect(f, lo, hi, 1e-15 * hi, op);
}

RegularizationPlan make_plan(double eps, double beta, double q, double g0_l2, double phi0_l1,
                             const TailProfile& p) {
  constexpr const char* op = "regularization.make_plan";
  check_hypotheses(beta, q, op);
  if (!(eps > 0.0)) throw ValidationError(op, "eps must be positive");
  if (!(g0_l2 >= 0.0) || !(phi0_l1 > 0.0))
    throw ValidationError(op, "norms must be nonnegative with ||phi0||_1 > 0");
  RegularizationPlan plan;
  plan.eps = eps;
  plan.beta = beta;
  plan.q = q;
  plan.g0_l2 = g0_l2;
  plan.phi0_l1 = phi0_l1;
  plan.c1 = 4.0 * (1.0 + g0_l2 * g0_l2 + phi0_l1 * phi0_l1);
  plan.c2 = 1.0 + g0_l2 * g0_l2;
  plan.delta = std::pow(plan.c1 / plan.c2, 0.25) * std::pow(eps, 0.5 * (1.0 + 3.0 * beta));
  const Cutoff cut = s_epsilon(p, eps);
  if (cut.saturated)
    throw ComputationError(op, "eps is below the kernel truncation floor; s_eps saturated");
  plan.s_eps = cut.s;
  plan.r_eps = solve_r_eps(eps, beta, q, plan.s_eps, phi0_l1);
  return plan;
}

TransformSamples tikhonov_filter(const TransformSamples& g_hat, const TransformSamples& phi_hat,
                                 double delta) {
  constexpr const char* op = "regularization.tikhonov_filter";
  g_hat.validate(op);
  phi_hat.validate(op);
  if (!same_frequencies(g_hat, phi_hat)) throw ValidationError(op, "frequency grids differ");
  if (!(delta > 0.0)) throw ValidationError(op, "delta must be positive");
  TransformSamples out{g_hat.frequencies, std::vector<Complex>(g_hat.size())};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Complex ph = phi_hat.values[i];
    out.values[i] = g_hat.values[i] * std::conj(ph) / (delta + std::norm(ph));
  }
  return out;
}

SampledSignal deconvolve(const SampledSignal& g_eps, const SampledSignal& phi_eps,
                         const RegularizationPlan& plan, const UniformGrid& freq_grid,
                         const UniformGrid& t_grid) {
  constexpr const char* op = "regularization.deconvolve";
  if (freq_grid.count < 2 || std::abs(freq_grid.start + freq_grid.back()) > 1e-9 * freq_grid.step)
    throw ValidationError(op, "frequency grid must be symmetric about zero");
  if (freq_grid.back() < plan.r_eps)
    throw ValidationError(op, "frequency grid does not cover [-R_eps, R_eps]");
  const auto freqs = freq_grid.points();
  const TransformSamples g_hat = fourier_at(g_eps, freqs);
  const TransformSamples phi_hat = fourier_at(phi_eps, freqs);
  return inverse_fourier(tikhonov_filter(g_hat, phi_hat, plan.delta), t_grid);
}

ErrorDecomposition error_decomposition(const TransformSamples& f0_hat,
                                       const TransformSamples& phi0_hat,
                                       const RegularizationPlan& plan, double achieved) {
  constexpr const char* op = "regularization.error_decomposition";
  f0_hat.validate(op);
  phi0_hat.validate(op);
  if (!same_frequencies(f0_hat, phi0_hat)) throw ValidationError(op, "frequency grids differ");
  const std::size_t n = f0_hat.size();
  if (n < 2) throw ValidationError(op, "need at least two frequencies");
  const auto& lam = f0_hat.frequencies;
  if (std::max(-lam.front(), lam.back()) < plan.r_eps)
    throw ValidationError(op, "frequency grid does not cover [-R_eps, R_eps]");

  const double thr = std::pow(plan.eps, plan.beta);
  const double r = plan.r_eps;
  std::vector<double> f2(n);
  std::vector<double> amp(n);
  for (std::size_t i = 0; i < n; ++i) {
    f2[i] = std::norm(f0_hat.values[i]);
    amp[i] = std::abs(phi0_hat.values[i]);
  }

  double outer = 0.0;
  double inner = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = lam[i];
    const double x1 = lam[i + 1];
    const double w = x1 - x0;
    double cuts[5] = {x0, x1, 0.0, 0.0, 0.0};
    int nc = 2;
    if (-r > x0 && -r < x1) cuts[nc++] = -r;
    if (r > x0 && r < x1) cuts[nc++] = r;
    if ((amp[i] - thr) * (amp[i + 1] - thr) < 0.0)
      cuts[nc++] = x0 + w * (thr - amp[i]) / (amp[i + 1] - amp[i]);
    std::sort(cuts, cuts + nc);
    auto lerp = [&](const std::vector<double>& y, double x) {
      return y[i] + (x - x0) / w * (y[i + 1] - y[i]);
    };
    for (int c = 0; c + 1 < nc; ++c) {
      const double a = cuts[c];
      const double b = cuts[c + 1];
      if (!(b > a)) continue;
      const double mid = 0.5 * (a + b);
      if (!(lerp(amp, mid) < thr)) continue;
      const double piece = 0.5 * (b - a) * (lerp(f2, a) + lerp(f2, b));
      (std::abs(mid) > r ? outer : inner) += piece;
    }
  }

  // Beyond the grid |lambda| > Lambda >= R_eps, which belongs to the outer set
  // wherever the kernel transform has decayed below the threshold.
  double tail = 0.0;
  if (amp[n - 1] < thr) tail += power_tail(lam[n - 2], f2[n - 2], lam[n - 1], f2[n - 1]);
  if (amp[0] < thr) tail += power_tail(-lam[1], f2[1], -lam[0], f2[0]);

  ErrorDecomposition d;
  if (std::isfinite(tail)) {
    outer += tail;
    d.outer_tail_correction = tail;
    d.coverage_insufficient = tail > 0.01 * outer;
  } else {
    d.outer_tail_correction = kInf;
    d.coverage_insufficient = true;
  }
  d.outer_term = outer;
  d.inner_term = inner;
  d.data_term = 2.0 * std::sqrt(plan.c1 * plan.c2) * std::pow(plan.eps, 1.0 - 3.0 * plan.beta);
  d.total_bound = 3.0 * (d.outer_term + d.inner_term + d.data_term);
  d.achieved_sq_error = achieved * achieved;
  d.bound_holds = d.achieved_sq_error <= d.total_bound + kBoundTolerance;
  return d;
}

UniformGrid frequency_grid(const PipelineSettings& settings, double r_eps,
                           const UniformGrid& t_grid) {
  constexpr const char* op = "regularization.frequency_grid";
  if (!(settings.freq_step > 0.0) || !(settings.freq_extent_factor > 0.0))
    throw ValidationError(op, "frequency step and extent factor must be positive");
  const double extent = std::max(settings.freq_extent_factor * r_eps, settings.freq_min_extent);
  if (extent < r_eps) throw ValidationError(op, "frequency extent below R_eps");
  if (extent > std::numbers::pi / t_grid.step)
    throw ValidationError(op, "frequency extent exceeds the Nyquist limit of the time grid");
  const double span = t_grid.back() - t_grid.start;
  if (!(settings.freq_step < 2.0 * std::numbers::pi / span))
    throw ValidationError(op, "frequency step too coarse for the time-grid span");
  UniformGrid g = UniformGrid::symmetric(extent, settings.freq_step);
  // Rounding the extent to the step may fall short of R_eps.
  if (g.back() < r_eps) g = UniformGrid::symmetric(extent + settings.freq_step, settings.freq_step);
  return g;
}

RunResult run_pipeline(const SyntheticInstance& instance, double eps,
                       const PipelineSettings& settings) {
  check_hypotheses(settings.beta, settings.q, "regularization.run_pipeline");
  const NoisyPair data = settings.noise_free
                             ? NoisyPair{instance.phi0, instance.g0, instance.phi0, instance.g0}
                             : inject_noise(instance.phi0, instance.g0, eps, settings.seed);

  RunResult out{.plan = make_plan(eps, settings.beta, settings.q, l2_norm(instance.g0),
                                  l1_norm(instance.phi0), instance.profile),
                .freq_extent = 0.0,
                .reconstruction = SampledSignal::zeros(instance.f0.grid()),
                .decomposition = {},
                .achieved_error = 0.0,
                .warnings = {}};
  const UniformGrid freq = frequency_grid(settings, out.plan.r_eps, instance.f0.grid());
  out.freq_extent = freq.back();
  out.reconstruction = deconvolve(data.g_eps, data.phi_eps, out.plan, freq, instance.f0.grid());
  out.achieved_error = l2_norm(instance.f0 - out.reconstruction);

  const auto freqs = freq.points();
  out.decomposition = error_decomposition(fourier_at(instance.f0, freqs),
                                          fourier_at(instance.phi0, freqs), out.plan,
                                          out.achieved_error);
  if (out.decomposition.coverage_insufficient)
    out.warnings.push_back(
        "error_decomposition: outer-term tail beyond the frequency grid exceeds 1% of the term");
  if (!out.decomposition.bound_holds)
    out.warnings.push_back("error_decomposition: achieved squared error exceeds the bound");
  return out;
}

SweepSummary sweep(const SyntheticInstance& instance, const std::vector<double>& eps_list,
                   const PipelineSettings& settings) {
  constexpr const char* op = "regularization.sweep";
  if (eps_list.empty()) throw ValidationError(op, "empty eps list");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1])) throw ValidationError(op, "eps list must decrease");

  SweepSummary sum;
  sum.records.resize(eps_list.size());
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    SweepRecord& rec = sum.records[i];
    rec.eps = eps_list[i];
    PipelineSettings row = settings;
    row.seed = settings.seed + i;
    try {
      const RunResult res = run_pipeline(instance, rec.eps, row);
      rec.s_eps = res.plan.s_eps;
      rec.delta = res.plan.delta;
      rec.r_eps = res.plan.r_eps;
      rec.achieved_error = res.achieved_error;
      rec.bound = std::sqrt(res.decomposition.total_bound);
      rec.rate_ref = std::pow(res.plan.r_eps, -settings.q + 0.5);
      rec.c3_row = rec.achieved_error / rec.rate_ref;
      rec.bound_holds = res.decomposition.bound_holds;
      rec.ok = true;
    } catch (const Error& e) {
      rec.failure = e.operation() + ": " + e.what();
    }
  }

  std::vector<const SweepRecord*> ok;
  for (const auto& r : sum.records)
    if (r.ok) ok.push_back(&r);
  sum.failed_rows = sum.records.size() - ok.size();
  sum.valid = !ok.empty() && 4 * sum.failed_rows <= sum.records.size();
  if (ok.empty()) return sum;

  for (const auto* r : ok) sum.c3_fit = std::max(sum.c3_fit, r->c3_row);
  for (std::size_t i = 1; i < ok.size(); ++i)
    if (ok[i]->achieved_error > ok[i - 1]->achieved_error) ++sum.inversions;

  const std::size_t half = (sum.records.size() + 1) / 2;
  double lo = kInf;
  double hi = 0.0;
  for (std::size_t i = sum.records.size() - half; i < sum.records.size(); ++i) {
    if (!sum.records[i].ok) continue;
    lo = std::min(lo, sum.records[i].c3_row);
    hi = std::max(hi, sum.records[i].c3_row);
  }
  sum.c3_stability = lo > 0.0 && std::isfinite(lo) ? hi / lo : kInf;
  const SweepRecord& last = *ok.back();
  sum.log_r_over_loglog = std::log(last.r_eps) / std::log(std::log(1.0 / last.eps));
  return sum;
}

}  // namespace deconv
