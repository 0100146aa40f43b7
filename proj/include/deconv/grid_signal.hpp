// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "deconv/error.hpp"

namespace deconv {

using Complex = std::complex<double>;
/// Evaluator of a transform at a real frequency.
using SpectrumFn = std::function<Complex(double)>;

/// Abscissae start + k * step for k = 0 .. count - 1.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double operator[](std::size_t k) const { return start + static_cast<double>(k) * step; }
  double back() const { return (*this)[count - 1]; }
  std::vector<double> points() const;

  /// k * step for k = -n .. n, n = round(extent / step). Exactly symmetric.
  static UniformGrid symmetric(double extent, double step);
};

/// A function on the real line sampled at t_k = t_min + k * spacing.
///
/// Functions with unbounded support are stored truncated; truncation_tail is
/// the mass of |f| outside the grid (zero when the samples are the whole
/// function).
class SampledSignal {
 public:
  SampledSignal(double t_min, double spacing, std::vector<Complex> values,
                double truncation_tail = 0.0);

  static SampledSignal sample(const UniformGrid& grid, const std::function<Complex(double)>& fn,
                              double truncation_tail = 0.0);
  static SampledSignal zeros(const UniformGrid& grid);

  double t_min() const { return t_min_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return values_.size(); }
  double t_at(std::size_t k) const { return t_min_ + static_cast<double>(k) * spacing_; }
  double t_max() const { return t_at(values_.size() - 1); }
  /// max |t| over the grid.
  double radius() const;
  UniformGrid grid() const { return {t_min_, spacing_, values_.size()}; }

  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t k) const { return values_[k]; }
  double truncation_tail() const { return truncation_tail_; }

  /// First and last indices holding a nonzero sample; nullopt for the zero signal.
  std::optional<std::pair<std::size_t, std::size_t>> support() const;
  bool is_real(double tol = 0.0) const;

  SampledSignal scaled(Complex c) const;
  SampledSignal with_truncation_tail(double tail) const;

  friend SampledSignal operator+(const SampledSignal& a, const SampledSignal& b);
  friend SampledSignal operator-(const SampledSignal& a, const SampledSignal& b);

 private:
  double t_min_;
  double spacing_;
  std::vector<Complex> values_;
  double truncation_tail_;
};

/// Values of a transform at an increasing list of frequencies.
struct TransformSamples {
  std::vector<double> frequencies;
  std::vector<Complex> values;

  /// Throws ValidationError unless sizes match and frequencies strictly increase.
  void validate(const std::string& operation) const;
  std::size_t size() const { return values.size(); }
};

/// Magnitude/phase pair; avoids overflow for transforms of exponential growth.
struct LogComplex {
  double log_abs = 0.0;  // -inf for an exact zero
  double arg = 0.0;
  Complex value() const;
};

/// Composite trapezoid weight of sample k out of n at spacing h.
inline double trapezoid_weight(std::size_t k, std::size_t n, double h) {
  return (k == 0 || k + 1 == n) ? 0.5 * h : h;
}

double l1_norm(const SampledSignal& s);
double l2_norm(const SampledSignal& s);

/// Trapezoid quadrature of the integral of exp(-i lambda t) s(t).
Complex fourier_at(const SampledSignal& s, double lambda);
TransformSamples fourier_at(const SampledSignal& s, std::span<const double> freqs);

/// Trapezoid quadrature of the integral of exp(z t) s(t), accumulated with a
/// max shift so that only the final magnitude can overflow.
LogComplex laplace_log_at(const SampledSignal& s, Complex z);

/// log of sum_k w_k |s(t_k)| exp(x t_k): the size of the largest possible
/// value of the Laplace sum at any z with Re z = x.
double laplace_envelope_log(const SampledSignal& s, double x);

/// Same quadrature returned as a plain complex number. Adds a warning when
/// |Re z| times the support radius exceeds the double exponent range.
Complex laplace_at(const SampledSignal& s, Complex z, Warnings* warnings = nullptr);

/// (1/2pi) times the trapezoid quadrature of exp(i lambda t) ts(lambda) on
/// t_grid. Requires a uniform frequency grid symmetric about zero.
SampledSignal inverse_fourier(const TransformSamples& ts, const UniformGrid& t_grid);

/// Full linear convolution, quadrature over the kernel:
/// (f * k)(t_j) = sum_m w_m k(s_m) f(t_j - s_m).
/// Both signals must share the spacing and the kernel origin must be an
/// integer number of steps.
SampledSignal convolve(const SampledSignal& f, const SampledSignal& kernel);

/// Restricts or zero-extends s onto a grid aligned with its own samples.
SampledSignal restrict_to(const SampledSignal& s, const UniformGrid& grid);

}  // namespace deconv
