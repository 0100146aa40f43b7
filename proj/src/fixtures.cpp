// SPDX-License-Identifier: Apache-2.0
#include "deconv/fixtures.hpp"

#include <cmath>
#include <numbers>

#include "deconv/io.hpp"
#include "deconv/root_finding.hpp"

namespace deconv {

namespace {

const double kSqrtPi = std::sqrt(std::numbers::pi);

double default_extent(const KernelSpec& spec, double step) {
  switch (spec.kind) {
    case KernelKind::Indicator:
      return std::max(std::abs(spec.a), std::abs(spec.b)) + 2.0 * step;
    case KernelKind::Gaussian: {
      const double x = bisect([](double v) { return std::erfc(v) - kTruncationRelTail; }, 0.0,
                              30.0, 1e-12, "fixtures.make_kernel");
      return spec.scale * x;
    }
    case KernelKind::TwoSidedExp:
      return -std::log(kTruncationRelTail) / spec.rate;
    case KernelKind::File:
      break;
  }
  return 0.0;
}

}  // namespace

SampledSignal make_kernel(const KernelSpec& spec, double step) {
  constexpr const char* op = "fixtures.make_kernel";
  if (!(step > 0.0)) throw ValidationError(op, "step must be positive");
  if (spec.kind == KernelKind::File) {
    SampledSignal s = read_signal_csv(spec.path);
    if (std::abs(s.spacing() - step) > 1e-9 * step)
      throw ValidationError(op, "kernel file spacing differs from the time step");
    return s;
  }
  switch (spec.kind) {
    case KernelKind::Indicator:
      if (!(spec.a < spec.b)) throw ValidationError(op, "indicator needs a < b");
      break;
    case KernelKind::Gaussian:
      if (!(spec.scale > 0.0)) throw ValidationError(op, "gaussian scale must be positive");
      break;
    case KernelKind::TwoSidedExp:
      if (!(spec.rate > 0.0)) throw ValidationError(op, "exponential rate must be positive");
      break;
    case KernelKind::File:
      break;
  }
  double extent = spec.extent.value_or(default_extent(spec, step));
  if (!(extent > 0.0)) throw ValidationError(op, "kernel extent must be positive");
  const double n = std::ceil(extent / step - 1e-9);
  extent = n * step;
  const UniformGrid grid = UniformGrid::symmetric(extent, step);

  switch (spec.kind) {
    case KernelKind::Indicator: {
      const double tol = 1e-9 * step;
      return SampledSignal::sample(grid, [&](double t) -> Complex {
        if (std::abs(t - spec.a) <= tol || std::abs(t - spec.b) <= tol) return 0.5;
        return (t > spec.a && t < spec.b) ? 1.0 : 0.0;
      });
    }
    case KernelKind::Gaussian: {
      const double s = spec.scale;
      const double tail = s * kSqrtPi * std::erfc(extent / s);
      return SampledSignal::sample(
          grid, [s](double t) -> Complex { return std::exp(-(t / s) * (t / s)); }, tail);
    }
    case KernelKind::TwoSidedExp: {
      const double r = spec.rate;
      const double tail = 2.0 / r * std::exp(-r * extent);
      return SampledSignal::sample(
          grid, [r](double t) -> Complex { return std::exp(-r * std::abs(t)); }, tail);
    }
    case KernelKind::File:
      break;
  }
  throw ValidationError(op, "unknown kernel kind");
}

std::optional<SpectrumFn> kernel_transform(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::Indicator: {
      const double a = spec.a;
      const double b = spec.b;
      return SpectrumFn([a, b](double l) -> Complex {
        if (l == 0.0) return b - a;
        const Complex i(0.0, 1.0);
        return (std::exp(-i * l * a) - std::exp(-i * l * b)) / (i * l);
      });
    }
    case KernelKind::Gaussian: {
      const double s = spec.scale;
      return SpectrumFn(
          [s](double l) -> Complex { return s * kSqrtPi * std::exp(-0.25 * l * l * s * s); });
    }
    case KernelKind::TwoSidedExp: {
      const double r = spec.rate;
      return SpectrumFn([r](double l) -> Complex { return 2.0 * r / (r * r + l * l); });
    }
    case KernelKind::File:
      break;
  }
  return std::nullopt;
}

double synth_exponent(double q) { return 0.5 * q + 0.26; }

double synth_smooth_value(double q, double t) {
  const double nu = synth_exponent(q);
  const double a = nu - 0.5;
  const double x = std::abs(t);
  const double norm = 1.0 / (kSqrtPi * std::tgamma(nu));
  if (x == 0.0) {
    if (!(a > 0.0)) throw ValidationError("fixtures.synth_smooth_f0", "f0 unbounded at t = 0");
    return norm * 0.5 * std::tgamma(a);
  }
  if (a == 0.0) return norm * std::cyl_bessel_k(0.0, x);
  // K_a is even in a.
  return norm * std::pow(0.5 * x, a) * std::cyl_bessel_k(std::abs(a), x);
}

SampledSignal synth_smooth_f0(double q, const UniformGrid& grid) {
  if (!(q > 0.5)) throw ValidationError("fixtures.synth_smooth_f0", "q must exceed 1/2");
  return SampledSignal::sample(grid, [q](double t) -> Complex { return synth_smooth_value(q, t); });
}

double synth_smooth_transform(double q, double lambda) {
  return std::pow(1.0 + lambda * lambda, -synth_exponent(q));
}

SyntheticInstance build_instance(const SampledSignal& kernel, const SampledSignal& f0,
                                 std::span<const double> s_grid) {
  return {kernel, f0, convolve(f0, kernel), compute_p(kernel, s_grid)};
}

std::vector<double> default_s_grid(const SampledSignal& kernel, double step) {
  if (!(step > 0.0)) throw ValidationError("fixtures.default_s_grid", "step must be positive");
  const auto n = static_cast<std::size_t>(std::floor(kernel.radius() / step + 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = static_cast<double>(k) * step;
  return g;
}

}  // namespace deconv
