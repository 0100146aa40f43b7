// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deconv/grid_signal.hpp"
#include "deconv/tail_profile.hpp"

namespace deconv {

struct RegularizationPlan {
  double eps = 0.0;
  double beta = 0.0;
  double q = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double delta = 0.0;
  double s_eps = 0.0;
  double r_eps = 0.0;
  double g0_l2 = 0.0;
  double phi0_l1 = 0.0;
};

struct ErrorDecomposition {
  double outer_term = 0.0;
  double inner_term = 0.0;
  double data_term = 0.0;
  double total_bound = 0.0;
  double achieved_sq_error = 0.0;
  double outer_tail_correction = 0.0;
  bool coverage_insufficient = false;
  bool bound_holds = false;
};

constexpr double kBoundTolerance = 1e-6;

/// Throws ValidationError for beta outside (0, 1/3) or q <= 1/2 and
/// ComputationError when the cutoff saturates.
RegularizationPlan make_plan(double eps, double beta, double q, double g0_l2, double phi0_l1,
                             const TailProfile& p);

/// F(R) = [(q+1/2) log R + log(15 e^3)] [log ||phi0||_1 + 2 e s R] + log(eps^beta + eps).
double r_eps_equation(double r, double eps, double beta, double q, double s_eps, double phi0_l1);

/// Unique root of r_eps_equation on the domain where both brackets are
/// nonnegative.
double solve_r_eps(double eps, double beta, double q, double s_eps, double phi0_l1);

TransformSamples tikhonov_filter(const TransformSamples& g_hat, const TransformSamples& phi_hat,
                                 double delta);

/// Transforms the data on freq_grid, filters and inverts onto t_grid.
SampledSignal deconvolve(const SampledSignal& g_eps, const SampledSignal& phi_eps,
                         const RegularizationPlan& plan, const UniformGrid& freq_grid,
                         const UniformGrid& t_grid);

ErrorDecomposition error_decomposition(const TransformSamples& f0_hat,
                                       const TransformSamples& phi0_hat,
                                       const RegularizationPlan& plan, double achieved);

/// Exact solution, kernel and data of one synthetic problem.
struct SyntheticInstance {
  SampledSignal phi0;
  SampledSignal f0;
  SampledSignal g0;
  TailProfile profile;  // of phi0
};

struct PipelineSettings {
  double beta = 0.2;
  double q = 1.0;
  double freq_step = 0.05;
  double freq_extent_factor = 4.0;
  double freq_min_extent = 200.0;
  std::uint64_t seed = 0;
  bool noise_free = false;
};

struct RunResult {
  RegularizationPlan plan;
  double freq_extent = 0.0;
  SampledSignal reconstruction;
  ErrorDecomposition decomposition;
  double achieved_error = 0.0;
  Warnings warnings;
};

/// max(freq_extent_factor * r_eps, freq_min_extent), checked against the
/// sampling limits of the time grid.
UniformGrid frequency_grid(const PipelineSettings& settings, double r_eps,
                           const UniformGrid& t_grid);

RunResult run_pipeline(const SyntheticInstance& instance, double eps,
                       const PipelineSettings& settings);

struct SweepRecord {
  double eps = 0.0;
  double s_eps = 0.0;
  double delta = 0.0;
  double r_eps = 0.0;
  double achieved_error = 0.0;
  double bound = 0.0;
  double rate_ref = 0.0;
  double c3_row = 0.0;
  bool bound_holds = false;
  bool ok = false;
  std::string failure;
};

struct SweepSummary {
  std::vector<SweepRecord> records;
  double c3_fit = 0.0;
  double c3_stability = 0.0;
  double log_r_over_loglog = 0.0;
  std::size_t inversions = 0;
  std::size_t failed_rows = 0;
  bool valid = false;
};

/// Row i uses noise seed settings.seed + i. Component failures mark the row
/// failed and the sweep continues.
SweepSummary sweep(const SyntheticInstance& instance, const std::vector<double>& eps_list,
                   const PipelineSettings& settings);

}  // namespace deconv
