// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "deconv/grid_signal.hpp"

namespace deconv {

/// Continuous tail mass m(s) = integral of |phi| over |t| >= s, taken from the
/// piecewise-linear interpolant of |phi| (which integrates to the trapezoid
/// rule on whole cells), plus the recorded truncation tail.
class TailMass {
 public:
  explicit TailMass(const SampledSignal& kernel);

  double in_grid(double s) const;
  double operator()(double s) const { return in_grid(s) + truncation_tail_; }
  double truncation_tail() const { return truncation_tail_; }
  double l1_total() const { return l1_total_; }
  double radius() const { return radius_; }
  bool compact_support() const { return truncation_tail_ == 0.0; }

 private:
  double right(double s) const;  // integral over [s, t_max]
  double left(double s) const;   // integral over [t_min, -s]

  double t_min_;
  double h_;
  std::vector<double> abs_;
  std::vector<double> suffix_;  // suffix_[k] = integral over [t_k, t_max]
  std::vector<double> prefix_;  // prefix_[k] = integral over [t_min, t_k]
  double truncation_tail_;
  double l1_total_;
  double radius_;
};

/// p(s) = -log m(s) on an increasing grid of s >= 0. Entries whose tail is
/// numerically empty are saturated (stored as +inf) and form a suffix.
struct TailProfile {
  std::vector<double> s_grid;
  std::vector<double> p_values;
  double l1_total = 0.0;
  std::shared_ptr<const TailMass> mass;  // null for tabulated profiles

  /// Build from explicit values, e.g. a closed-form p for tests.
  static TailProfile tabulated(std::vector<double> s_grid, std::vector<double> p_values);

  bool saturated(std::size_t k) const;
  /// Number of leading non-saturated entries.
  std::size_t finite_count() const;
  /// Linear interpolation in s; +inf past the last finite entry.
  double value_at(double s) const;
};

struct DualProfile {
  std::vector<double> s_grid;
  std::vector<double> dual_values;

  bool is_convex(double tol = 1e-9) const;
  bool is_nondecreasing(double tol = 1e-9) const;
  /// Linear interpolation; throws outside the grid.
  double value_at(double s) const;
};

struct Cutoff {
  double s = 0.0;
  bool saturated = false;  // eps below the truncation floor; s is the kernel extent
};

struct GValue {
  double log_value = 0.0;
  double value = 0.0;  // may be +inf when only the log is representable
  bool tail_increasing = false;
  bool superlinear = true;
};

struct HValue {
  double log_value = 0.0;
  double value = 0.0;
  bool truncation_dominated = false;
};

struct DualGrowthReport {
  std::vector<double> s_list;
  std::vector<double> log_g;
  std::vector<double> ratio;          // log G(s) / p*(s)
  std::vector<double> shifted_ratio;  // log G(s) / p*(s + kappa)
  double kappa = 0.5;
  double last_ratio = 0.0;
  double last_shifted_ratio = 0.0;
  double trend_slope = 0.0;  // least-squares slope of |ratio - 1| against s
  bool convergent = true;
};

struct Condition171 {
  double value = 0.0;
  bool divergent = false;
};

/// Throws ValidationError for the zero kernel.
TailProfile compute_p(const SampledSignal& kernel, std::span<const double> s_grid);

/// inf{s > 0 : exp(-p(s)) <= eps}, refined between grid points by bisection
/// on the continuous tail (or on interpolated p for tabulated profiles).
Cutoff s_epsilon(const TailProfile& p, double eps);

DualProfile young_dual(const TailProfile& p, std::span<const double> dual_grid);
DualProfile young_double_dual(const DualProfile& pstar, std::span<const double> grid);

GValue compute_G(const TailProfile& p, double s);
HValue compute_H(const SampledSignal& kernel, double s);

DualGrowthReport check_dual_growth(const TailProfile& p, const DualProfile& pstar,
                                   std::span<const double> s_list, double kappa = 0.5);

Condition171 check_condition_171(const TailProfile& p, double gamma);

/// Numerical verdict on p(s)/s -> infinity. Compact support counts as
/// superlinear; otherwise secant slopes of p over the last stretch of the
/// finite grid must grow.
bool detect_superlinear(const TailProfile& p);

}  // namespace deconv
