// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>

#include "deconv/grid_signal.hpp"
#include "deconv/regularization.hpp"

namespace deconv {

enum class KernelKind { Indicator, Gaussian, TwoSidedExp, File };

struct KernelSpec {
  KernelKind kind = KernelKind::Indicator;
  double a = 0.0;      // indicator
  double b = 1.0;      // indicator
  double scale = 1.0;  // gaussian: exp(-(t/scale)^2)
  double rate = 1.0;   // two_sided_exp: exp(-rate |t|)
  std::string path;    // file
  std::optional<double> extent;  // overrides the default truncation extent
};

/// Relative tail mass left outside the default truncation extent.
constexpr double kTruncationRelTail = 1e-12;

/// Samples the kernel on k * step, |k| <= ceil(T / step). For unbounded
/// kernels T defaults to the smallest extent with tail mass below
/// kTruncationRelTail * ||phi||_1, and the analytic tail is recorded.
/// Indicator samples equal 1/2 at the jump points.
SampledSignal make_kernel(const KernelSpec& spec, double step);

/// Closed-form transform of a fixture kernel; empty for file kernels.
std::optional<SpectrumFn> kernel_transform(const KernelSpec& spec);

/// Exponent nu = q/2 + 0.26 of the synthetic spectrum (1 + lambda^2)^(-nu).
double synth_exponent(double q);

/// Inverse transform of (1 + lambda^2)^(-nu):
/// f0(t) = (|t|/2)^(nu - 1/2) K_(nu - 1/2)(|t|) / (sqrt(pi) Gamma(nu)).
double synth_smooth_value(double q, double t);
SampledSignal synth_smooth_f0(double q, const UniformGrid& grid);
double synth_smooth_transform(double q, double lambda);

/// phi0 = kernel, g0 = discrete convolution f0 * phi0, profile of phi0.
SyntheticInstance build_instance(const SampledSignal& kernel, const SampledSignal& f0,
                                 std::span<const double> s_grid);

/// 0, step, ... up to the kernel radius.
std::vector<double> default_s_grid(const SampledSignal& kernel, double step);

}  // namespace deconv
