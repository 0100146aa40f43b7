// SPDX-License-Identifier: Apache-2.0
#include "deconv/tail_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deconv/parallel.hpp"
#include "deconv/root_finding.hpp"

namespace deconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnderflowFloor = 1e-300;

void require_increasing(std::span<const double> g, const char* op, bool nonnegative) {
  if (g.empty()) throw ValidationError(op, "empty grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw ValidationError(op, "grid contains a non-finite value");
    if (nonnegative && g[i] < 0.0) throw ValidationError(op, "grid must be nonnegative");
    if (i > 0 && !(g[i] > g[i - 1])) throw ValidationError(op, "grid must be strictly increasing");
  }
}

// Trapezoid weight of node k on a possibly nonuniform grid x[0..n).
double node_weight(const std::vector<double>& x, std::size_t k, std::size_t n) {
  const double lo = k == 0 ? x[0] : x[k - 1];
  const double hi = k + 1 == n ? x[n - 1] : x[k + 1];
  return 0.5 * (hi - lo);
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double s,
                   std::size_t n) {
  if (s <= x[0]) return y[0];
  auto it = std::upper_bound(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), s);
  const auto k = static_cast<std::size_t>(it - x.begin());
  if (k >= n) return y[n - 1];
  const double u = (s - x[k - 1]) / (x[k] - x[k - 1]);
  return y[k - 1] + u * (y[k] - y[k - 1]);
}

// log of sum_k w_k exp(x_k), skipping -inf terms.
double log_sum_exp(const std::vector<double>& x, const std::vector<double>& w) {
  double top = -kInf;
  for (double v : x) top = std::max(top, v);
  if (top == -kInf) return -kInf;
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * std::exp(x[k] - top);
  return top + std::log(acc);
}

}  // namespace

TailMass::TailMass(const SampledSignal& kernel)
    : t_min_(kernel.t_min()), h_(kernel.spacing()), truncation_tail_(kernel.truncation_tail()),
      radius_(kernel.radius()) {
  const std::size_t n = kernel.size();
  abs_.resize(n);
  for (std::size_t k = 0; k < n; ++k) abs_[k] = std::abs(kernel[k]);
  suffix_.assign(n, 0.0);
  prefix_.assign(n, 0.0);
  // Accumulate from the outside in so small tails keep full relative accuracy.
  for (std::size_t k = n - 1; k-- > 0;) suffix_[k] = suffix_[k + 1] + 0.5 * h_ * (abs_[k] + abs_[k + 1]);
  for (std::size_t k = 1; k < n; ++k) prefix_[k] = prefix_[k - 1] + 0.5 * h_ * (abs_[k - 1] + abs_[k]);
  l1_total_ = in_grid(0.0) + truncation_tail_;
}

double TailMass::right(double s) const {
  const std::size_t n = abs_.size();
  if (n < 2) return 0.0;
  if (s <= t_min_) return suffix_[0];
  const double t_max = t_min_ + static_cast<double>(n - 1) * h_;
  if (s >= t_max) return 0.0;
  auto k = static_cast<std::size_t>(std::floor((s - t_min_) / h_));
  k = std::min(k, n - 2);
  const double u = (s - (t_min_ + static_cast<double>(k) * h_)) / h_;
  const double a = abs_[k] * (1.0 - u) + abs_[k + 1] * u;
  return suffix_[k + 1] + 0.5 * (1.0 - u) * h_ * (a + abs_[k + 1]);
}

double TailMass::left(double x) const {
  const std::size_t n = abs_.size();
  if (n < 2 || x <= t_min_) return 0.0;
  const double t_max = t_min_ + static_cast<double>(n - 1) * h_;
  if (x >= t_max) return prefix_[n - 1];
  auto k = static_cast<std::size_t>(std::floor((x - t_min_) / h_));
  k = std::min(k, n - 2);
  const double u = (x - (t_min_ + static_cast<double>(k) * h_)) / h_;
  const double a = abs_[k] * (1.0 - u) + abs_[k + 1] * u;
  return prefix_[k] + 0.5 * u * h_ * (abs_[k] + a);
}

double TailMass::in_grid(double s) const {
  s = std::max(s, 0.0);
  return right(s) + left(-s);
}

TailProfile TailProfile::tabulated(std::vector<double> s_grid, std::vector<double> p_values) {
  constexpr const char* op = "tail_profile.tabulated";
  require_increasing(s_grid, op, true);
  if (s_grid.size() != p_values.size()) throw ValidationError(op, "grid and values differ in size");
  bool sat = false;
  for (double& v : p_values) {
    if (std::isnan(v)) throw ValidationError(op, "NaN profile value");
    if (v == kInf) sat = true;
    if (sat) v = kInf;
  }
  TailProfile p;
  p.l1_total = std::exp(-p_values.front());
  p.s_grid = std::move(s_grid);
  p.p_values = std::move(p_values);
  return p;
}

bool TailProfile::saturated(std::size_t k) const { return p_values[k] == kInf; }

std::size_t TailProfile::finite_count() const {
  std::size_t n = 0;
  while (n < p_values.size() && p_values[n] != kInf) ++n;
  return n;
}

double TailProfile::value_at(double s) const {
  const std::size_t nf = finite_count();
  if (nf == 0) return kInf;
  if (s > s_grid[nf - 1]) return kInf;
  return interpolate(s_grid, p_values, s, nf);
}

bool DualProfile::is_convex(double tol) const {
  const auto& x = s_grid;
  const auto& f = dual_values;
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    const double a = x[k] - x[k - 1];
    const double b = x[k + 1] - x[k];
    const double d = (b * f[k - 1] + a * f[k + 1] - (a + b) * f[k]) / (a + b);
    if (d < -tol * std::max(1.0, std::abs(f[k]))) return false;
  }
  return true;
}

bool DualProfile::is_nondecreasing(double tol) const {
  for (std::size_t k = 1; k < dual_values.size(); ++k)
    if (dual_values[k] < dual_values[k - 1] - tol * std::max(1.0, std::abs(dual_values[k])))
      return false;
  return true;
}

double DualProfile::value_at(double s) const {
  if (s_grid.empty() || s < s_grid.front() || s > s_grid.back())
    throw ValidationError("tail_profile.dual_value_at", "argument outside the dual grid");
  return interpolate(s_grid, dual_values, s, s_grid.size());
}

TailProfile compute_p(const SampledSignal& kernel, std::span<const double> s_grid) {
  constexpr const char* op = "tail_profile.compute_p";
  require_increasing(s_grid, op, true);
  auto mass = std::make_shared<const TailMass>(kernel);
  if (!(mass->l1_total() > 0.0)) throw ValidationError(op, "kernel is identically zero");

  TailProfile p;
  p.s_grid.assign(s_grid.begin(), s_grid.end());
  p.p_values.resize(s_grid.size());
  p.l1_total = mass->l1_total();
  bool sat = false;
  double prev = -kInf;
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    const double s = s_grid[k];
    const double in = mass->in_grid(s);
    if (sat || s > mass->radius() || in < kUnderflowFloor) sat = true;
    if (sat) {
      p.p_values[k] = kInf;
      continue;
    }
    // Running max removes rounding-level decreases.
    prev = std::max(prev, -std::log(in + mass->truncation_tail()));
    p.p_values[k] = prev;
  }
  p.mass = std::move(mass);
  return p;
}

Cutoff s_epsilon(const TailProfile& p, double eps) {
  constexpr const char* op = "tail_profile.s_epsilon";
  if (!(eps > 0.0) || !(eps < p.l1_total))
    throw ValidationError(op, "need 0 < eps < ||phi||_1");
  const auto& g = p.s_grid;
  const std::size_t n = g.size();

  if (p.mass) {
    const TailMass& m = *p.mass;
    if (m.truncation_tail() >= eps) return {m.radius(), true};
    std::size_t k = 0;
    while (k < n && m(g[k]) > eps) ++k;
    double lo = 0.0;
    double hi = 0.0;
    if (k == n) {
      lo = g.back();
      hi = std::max(m.radius(), g.back());
      if (m(hi) > eps) return {m.radius(), true};
    } else {
      lo = k == 0 ? 0.0 : g[k - 1];
      hi = g[k];
    }
    const double tol = 1e-3 * (hi - lo);
    if (hi == lo) return {hi, false};
    return {bisect([&](double s) { return eps - m(s); }, lo, hi, tol, op), false};
  }

  const double target = -std::log(eps);
  std::size_t k = 0;
  while (k < n && p.p_values[k] < target) ++k;
  if (k == n) return {g.back(), true};
  if (k == 0) return {g[0], false};
  const double lo = g[k - 1];
  const double hi = g[k];
  return {bisect([&](double s) { return p.value_at(s) - target; }, lo, hi, 1e-3 * (hi - lo), op),
          false};
}

DualProfile young_dual(const TailProfile& p, std::span<const double> dual_grid) {
  constexpr const char* op = "tail_profile.young_dual";
  require_increasing(dual_grid, op, false);
  const std::size_t nf = p.finite_count();
  if (nf == 0) throw ValidationError(op, "profile has no finite entries");
  DualProfile out{{dual_grid.begin(), dual_grid.end()}, std::vector<double>(dual_grid.size())};
  parallel_for(dual_grid.size(), [&](std::size_t j) {
    const double sigma = dual_grid[j];
    double best = -kInf;
    for (std::size_t k = 0; k < nf; ++k) best = std::max(best, sigma * p.s_grid[k] - p.p_values[k]);
    out.dual_values[j] = best;
  });
  return out;
}

DualProfile young_double_dual(const DualProfile& pstar, std::span<const double> grid) {
  constexpr const char* op = "tail_profile.young_double_dual";
  require_increasing(grid, op, false);
  if (pstar.s_grid.empty()) throw ValidationError(op, "empty dual profile");
  if (!pstar.is_convex(1e-9)) throw ValidationError(op, "input dual profile is not convex");
  DualProfile out{{grid.begin(), grid.end()}, std::vector<double>(grid.size())};
  parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    double best = -kInf;
    for (std::size_t j = 0; j < pstar.s_grid.size(); ++j)
      best = std::max(best, t * pstar.s_grid[j] - pstar.dual_values[j]);
    out.dual_values[i] = best;
  });
  return out;
}

GValue compute_G(const TailProfile& p, double s) {
  constexpr const char* op = "tail_profile.compute_G";
  if (!(s >= 0.0)) throw ValidationError(op, "need s >= 0");
  const std::size_t nf = p.finite_count();
  if (nf < 2) throw ValidationError(op, "profile needs at least two finite entries");
  std::vector<double> x(nf);
  std::vector<double> w(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    x[k] = s * p.s_grid[k] - p.p_values[k];
    w[k] = node_weight(p.s_grid, k, nf);
  }
  GValue out;
  out.log_value = log_sum_exp(x, w);
  out.value = std::exp(out.log_value);
  out.tail_increasing = x[nf - 1] > x[nf - 2];
  out.superlinear = detect_superlinear(p);
  return out;
}

HValue compute_H(const SampledSignal& kernel, double s) {
  constexpr const char* op = "tail_profile.compute_H";
  if (!(s >= 0.0)) throw ValidationError(op, "need s >= 0");
  const auto v = kernel.values();
  const std::size_t n = v.size();
  std::vector<double> x;
  std::vector<double> w;
  x.reserve(n);
  w.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(v[k]);
    if (a == 0.0) continue;
    x.push_back(std::abs(kernel.t_at(k)) * s + std::log(a));
    w.push_back(trapezoid_weight(k, n, kernel.spacing()));
  }
  HValue out;
  out.log_value = log_sum_exp(x, w);
  out.value = std::exp(out.log_value);
  const double tt = kernel.truncation_tail();
  if (tt > 0.0)
    out.truncation_dominated =
        std::log(tt) + kernel.radius() * s > std::log(1e-6) + out.log_value;
  return out;
}

DualGrowthReport check_dual_growth(const TailProfile& p, const DualProfile& pstar,
                                   std::span<const double> s_list, double kappa) {
  constexpr const char* op = "tail_profile.check_dual_growth";
  require_increasing(s_list, op, true);
  if (!(kappa > 0.0)) throw ValidationError(op, "need kappa > 0");
  DualGrowthReport r;
  r.kappa = kappa;
  r.s_list.assign(s_list.begin(), s_list.end());
  for (double s : s_list) {
    const GValue g = compute_G(p, s);
    r.convergent = r.convergent && !g.tail_increasing;
    r.log_g.push_back(g.log_value);
    r.ratio.push_back(g.log_value / pstar.value_at(s));
    r.shifted_ratio.push_back(g.log_value / pstar.value_at(s + kappa));
  }
  r.last_ratio = r.ratio.back();
  r.last_shifted_ratio = r.shifted_ratio.back();
  if (r.s_list.size() >= 2) {
    double ms = 0.0;
    double md = 0.0;
    const auto n = static_cast<double>(r.s_list.size());
    for (std::size_t i = 0; i < r.s_list.size(); ++i) {
      ms += r.s_list[i] / n;
      md += std::abs(r.ratio[i] - 1.0) / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < r.s_list.size(); ++i) {
      const double dx = r.s_list[i] - ms;
      sxy += dx * (std::abs(r.ratio[i] - 1.0) - md);
      sxx += dx * dx;
    }
    r.trend_slope = sxy / sxx;
  }
  return r;
}

Condition171 check_condition_171(const TailProfile& p, double gamma) {
  constexpr const char* op = "tail_profile.check_condition_171";
  if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError(op, "need 0 < gamma < 1");
  const std::size_t nf = p.finite_count();
  if (nf < 2) throw ValidationError(op, "profile needs at least two finite entries");
  std::vector<double> f(nf);
  double sum = 0.0;
  for (std::size_t k = 0; k < nf; ++k) {
    const double t = p.s_grid[k];
    f[k] = std::exp(-p.p_values[k] + p.value_at(gamma * t) / gamma);
    sum += node_weight(p.s_grid, k, nf) * f[k];
  }
  return {sum, f[nf - 1] > f[nf - 2]};
}

bool detect_superlinear(const TailProfile& p) {
  if (p.mass && p.mass->compact_support()) return true;
  const std::size_t nf = p.finite_count();
  if (!p.mass && nf < p.p_values.size()) return true;
  if (nf < 2) return false;
  const double last = p.s_grid[nf - 1];
  if (!(last > 0.0)) return false;
  const double fr[4] = {0.4, 0.6, 0.8, 1.0};
  double s[4];
  double v[4];
  for (int i = 0; i < 4; ++i) {
    s[i] = fr[i] * last;
    v[i] = p.value_at(s[i]);
  }
  const double m1 = (v[1] - v[0]) / (s[1] - s[0]);
  const double m2 = (v[2] - v[1]) / (s[2] - s[1]);
  const double m3 = (v[3] - v[2]) / (s[3] - s[2]);
  const bool slopes_grow = m1 > 0.0 && m2 > m1 && m3 > m2 && m3 >= 1.1 * m1;
  const bool ratio_grows = v[2] / s[2] > v[1] / s[1] && v[3] / s[3] > v[2] / s[2];
  return slopes_grow && ratio_grows;
}

}  // namespace deconv
