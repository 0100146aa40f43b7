// SPDX-License-Identifier: Apache-2.0
#include "deconv/grid_signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "deconv/parallel.hpp"

namespace deconv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Exponent headroom of double: exp(709.78) is the largest finite value.
constexpr double kExpHeadroom = 700.0;
// Rotation recurrences are re-anchored with an exact sincos this often.
constexpr std::size_t kAnchorBlock = 64;

void require_same_grid(const SampledSignal& a, const SampledSignal& b, const char* op) {
  if (a.size() != b.size() || a.t_min() != b.t_min() || a.spacing() != b.spacing())
    throw ValidationError(op, "signals live on different grids");
}

// sum_k w_k v_k exp(i * sign * lambda * t_k) over [k0, k1].
Complex oscillatory_sum(std::span<const Complex> v, std::size_t k0, std::size_t k1, std::size_t n,
                        double t_min, double h, double omega) {
  double sr = 0.0;
  double si = 0.0;
  const double cr = std::cos(omega * h);
  const double ci = std::sin(omega * h);
  for (std::size_t blk = k0; blk <= k1; blk += kAnchorBlock) {
    const std::size_t end = std::min(blk + kAnchorBlock, k1 + 1);
    const double phase = omega * (t_min + static_cast<double>(blk) * h);
    double er = std::cos(phase);
    double ei = std::sin(phase);
    for (std::size_t k = blk; k < end; ++k) {
      const double w = trapezoid_weight(k, n, h);
      const double vr = v[k].real();
      const double vi = v[k].imag();
      sr += w * (vr * er - vi * ei);
      si += w * (vr * ei + vi * er);
      const double nr = er * cr - ei * ci;
      ei = er * ci + ei * cr;
      er = nr;
    }
  }
  return {sr, si};
}

}  // namespace

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = (*this)[k];
  return out;
}

UniformGrid UniformGrid::symmetric(double extent, double step) {
  if (!(step > 0.0) || !(extent >= 0.0))
    throw ValidationError("grid_signal.symmetric_grid", "need step > 0 and extent >= 0");
  const auto n = static_cast<std::size_t>(std::llround(extent / step));
  return {-static_cast<double>(n) * step, step, 2 * n + 1};
}

SampledSignal::SampledSignal(double t_min, double spacing, std::vector<Complex> values,
                             double truncation_tail)
    : t_min_(t_min), spacing_(spacing), values_(std::move(values)),
      truncation_tail_(truncation_tail) {
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
    throw ValidationError("grid_signal.SampledSignal", "spacing must be positive");
  if (values_.empty()) throw ValidationError("grid_signal.SampledSignal", "no samples");
  if (!std::isfinite(t_min_))
    throw ValidationError("grid_signal.SampledSignal", "t_min must be finite");
  if (!(truncation_tail_ >= 0.0))
    throw ValidationError("grid_signal.SampledSignal", "truncation tail must be nonnegative");
}

SampledSignal SampledSignal::sample(const UniformGrid& grid,
                                    const std::function<Complex(double)>& fn,
                                    double truncation_tail) {
  std::vector<Complex> v(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) v[k] = fn(grid[k]);
  return {grid.start, grid.step, std::move(v), truncation_tail};
}

SampledSignal SampledSignal::zeros(const UniformGrid& grid) {
  return {grid.start, grid.step, std::vector<Complex>(grid.count)};
}

double SampledSignal::radius() const { return std::max(std::abs(t_min_), std::abs(t_max())); }

std::optional<std::pair<std::size_t, std::size_t>> SampledSignal::support() const {
  std::size_t lo = 0;
  while (lo < values_.size() && values_[lo] == Complex{}) ++lo;
  if (lo == values_.size()) return std::nullopt;
  std::size_t hi = values_.size() - 1;
  while (values_[hi] == Complex{}) --hi;
  return std::make_pair(lo, hi);
}

bool SampledSignal::is_real(double tol) const {
  return std::all_of(values_.begin(), values_.end(),
                     [tol](const Complex& v) { return std::abs(v.imag()) <= tol; });
}

SampledSignal SampledSignal::scaled(Complex c) const {
  std::vector<Complex> v(values_);
  for (auto& x : v) x *= c;
  return {t_min_, spacing_, std::move(v), truncation_tail_ * std::abs(c)};
}

SampledSignal SampledSignal::with_truncation_tail(double tail) const {
  return {t_min_, spacing_, values_, tail};
}

SampledSignal operator+(const SampledSignal& a, const SampledSignal& b) {
  require_same_grid(a, b, "grid_signal.add");
  std::vector<Complex> v(a.values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += b.values_[k];
  return {a.t_min_, a.spacing_, std::move(v), a.truncation_tail_ + b.truncation_tail_};
}

SampledSignal operator-(const SampledSignal& a, const SampledSignal& b) {
  require_same_grid(a, b, "grid_signal.subtract");
  std::vector<Complex> v(a.values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= b.values_[k];
  return {a.t_min_, a.spacing_, std::move(v), a.truncation_tail_ + b.truncation_tail_};
}

void TransformSamples::validate(const std::string& operation) const {
  if (frequencies.size() != values.size())
    throw ValidationError(operation, "frequency and value counts differ");
  for (std::size_t i = 1; i < frequencies.size(); ++i)
    if (!(frequencies[i] > frequencies[i - 1]))
      throw ValidationError(operation, "frequencies must be strictly increasing");
}

Complex LogComplex::value() const {
  if (log_abs == -kInf) return {};
  return std::polar(std::exp(log_abs), arg);
}

double l1_norm(const SampledSignal& s) {
  const auto v = s.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    sum += trapezoid_weight(k, v.size(), s.spacing()) * std::abs(v[k]);
  return sum;
}

double l2_norm(const SampledSignal& s) {
  const auto v = s.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    sum += trapezoid_weight(k, v.size(), s.spacing()) * std::norm(v[k]);
  return std::sqrt(sum);
}

Complex fourier_at(const SampledSignal& s, double lambda) {
  const auto supp = s.support();
  if (!supp) return {};
  return oscillatory_sum(s.values(), supp->first, supp->second, s.size(), s.t_min(), s.spacing(),
                         -lambda);
}

TransformSamples fourier_at(const SampledSignal& s, std::span<const double> freqs) {
  if (freqs.empty()) throw ValidationError("grid_signal.fourier_at", "empty frequency list");
  TransformSamples out{{freqs.begin(), freqs.end()}, std::vector<Complex>(freqs.size())};
  out.validate("grid_signal.fourier_at");
  const auto supp = s.support();
  if (!supp) return out;
  parallel_for(freqs.size(), [&](std::size_t i) {
    out.values[i] = oscillatory_sum(s.values(), supp->first, supp->second, s.size(), s.t_min(),
                                    s.spacing(), -freqs[i]);
  });
  return out;
}

LogComplex laplace_log_at(const SampledSignal& s, Complex z) {
  const auto supp = s.support();
  if (!supp) return {-kInf, 0.0};
  const auto v = s.values();
  const std::size_t n = s.size();
  const double h = s.spacing();
  const auto [k0, k1] = *supp;
  const double re = z.real();
  const double im = z.imag();
  // Shift by the largest exponent attained over the support.
  const double shift = std::max(re * s.t_at(k0), re * s.t_at(k1));

  double sr = 0.0;
  double si = 0.0;
  const Complex stepc = std::exp(z * h);
  for (std::size_t blk = k0; blk <= k1; blk += kAnchorBlock) {
    const std::size_t end = std::min(blk + kAnchorBlock, k1 + 1);
    const double t = s.t_at(blk);
    const double mag = std::exp(re * t - shift);
    double er = mag * std::cos(im * t);
    double ei = mag * std::sin(im * t);
    for (std::size_t k = blk; k < end; ++k) {
      const double w = trapezoid_weight(k, n, h);
      sr += w * (v[k].real() * er - v[k].imag() * ei);
      si += w * (v[k].real() * ei + v[k].imag() * er);
      const double nr = er * stepc.real() - ei * stepc.imag();
      ei = er * stepc.imag() + ei * stepc.real();
      er = nr;
    }
  }
  if (sr != 0.0 || si != 0.0) return {shift + std::log(std::hypot(sr, si)), std::atan2(si, sr)};

  // Every shifted term underflowed: redo the sum term by term around the
  // exact maximal exponent.
  double top = -kInf;
  for (std::size_t k = k0; k <= k1; ++k)
    if (v[k] != Complex{})
      top = std::max(top, std::log(trapezoid_weight(k, n, h) * std::abs(v[k])) + re * s.t_at(k));
  Complex acc{};
  for (std::size_t k = k0; k <= k1; ++k) {
    if (v[k] == Complex{}) continue;
    const double t = s.t_at(k);
    const double lm = std::log(trapezoid_weight(k, n, h) * std::abs(v[k])) + re * t - top;
    acc += std::polar(std::exp(lm), std::arg(v[k]) + im * t);
  }
  if (acc == Complex{}) return {-kInf, 0.0};
  return {top + std::log(std::abs(acc)), std::arg(acc)};
}

double laplace_envelope_log(const SampledSignal& s, double x) {
  const auto supp = s.support();
  if (!supp) return -kInf;
  const auto v = s.values();
  const double h = s.spacing();
  const double shift = std::max(x * s.t_at(supp->first), x * s.t_at(supp->second));
  double acc = 0.0;
  for (std::size_t k = supp->first; k <= supp->second; ++k)
    acc += trapezoid_weight(k, v.size(), h) * std::abs(v[k]) * std::exp(x * s.t_at(k) - shift);
  return shift + std::log(acc);
}

Complex laplace_at(const SampledSignal& s, Complex z, Warnings* warnings) {
  const double reach = std::abs(z.real()) * s.radius();
  if (reach > kExpHeadroom && warnings)
    warnings->push_back("laplace_at: |Re z| * extent = " + std::to_string(reach) +
                        " exceeds the exponent range; log-domain accumulation used");
  return laplace_log_at(s, z).value();
}

SampledSignal inverse_fourier(const TransformSamples& ts, const UniformGrid& t_grid) {
  constexpr const char* op = "grid_signal.inverse_fourier";
  ts.validate(op);
  if (ts.size() < 2) throw ValidationError(op, "need at least two frequencies");
  if (t_grid.count == 0 || !(t_grid.step > 0.0)) throw ValidationError(op, "invalid time grid");
  const std::size_t m = ts.size();
  const double dl = (ts.frequencies.back() - ts.frequencies.front()) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const double expect = ts.frequencies.front() + static_cast<double>(i) * dl;
    if (std::abs(ts.frequencies[i] - expect) > 1e-9 * dl)
      throw ValidationError(op, "frequency grid is not uniform");
    if (std::abs(ts.frequencies[i] + ts.frequencies[m - 1 - i]) > 1e-9 * dl)
      throw ValidationError(op, "frequency grid is not symmetric about zero");
  }
  std::vector<Complex> out(t_grid.count);
  const double lmin = ts.frequencies.front();
  parallel_for(t_grid.count, [&](std::size_t j) {
    // Frequencies play the role of the abscissa here.
    out[j] = oscillatory_sum(ts.values, 0, m - 1, m, lmin, dl, t_grid[j]) /
             (2.0 * std::numbers::pi);
  });
  return {t_grid.start, t_grid.step, std::move(out)};
}

SampledSignal convolve(const SampledSignal& f, const SampledSignal& kernel) {
  constexpr const char* op = "grid_signal.convolve";
  const double h = f.spacing();
  if (std::abs(kernel.spacing() - h) > 1e-12 * h)
    throw ValidationError(op, "signals must share the grid spacing");
  const double offset = kernel.t_min() / h;
  if (std::abs(offset - std::round(offset)) > 1e-6)
    throw ValidationError(op, "kernel origin is not aligned with the grid");
  const std::size_t nf = f.size();
  const std::size_t nk = kernel.size();
  std::vector<Complex> out(nf + nk - 1);
  const auto supp = kernel.support();
  if (supp) {
    const auto kv = kernel.values();
    const auto fv = f.values();
    parallel_for(out.size(), [&](std::size_t j) {
      Complex acc{};
      // j = a + m with a indexing f and m indexing the kernel.
      const std::size_t mlo = std::max(supp->first, j >= nf ? j - nf + 1 : std::size_t{0});
      const std::size_t mhi = std::min(supp->second, j);
      for (std::size_t m = mlo; m <= mhi && mlo <= mhi; ++m)
        acc += trapezoid_weight(m, nk, h) * kv[m] * fv[j - m];
      out[j] = acc;
    });
  }
  const double t0 = f.t_min() + std::round(offset) * h;
  return {t0, h, std::move(out)};
}

SampledSignal restrict_to(const SampledSignal& s, const UniformGrid& grid) {
  constexpr const char* op = "grid_signal.restrict_to";
  const double h = s.spacing();
  if (std::abs(grid.step - h) > 1e-12 * h) throw ValidationError(op, "spacing mismatch");
  const double offset = (grid.start - s.t_min()) / h;
  if (std::abs(offset - std::round(offset)) > 1e-6)
    throw ValidationError(op, "target grid is not aligned with the samples");
  const auto shift = static_cast<long long>(std::llround(offset));
  std::vector<Complex> v(grid.count);
  const auto n = static_cast<long long>(s.size());
  for (std::size_t k = 0; k < grid.count; ++k) {
    const long long src = static_cast<long long>(k) + shift;
    if (src >= 0 && src < n) v[k] = s[static_cast<std::size_t>(src)];
  }
  return {grid.start, grid.step, std::move(v), s.truncation_tail()};
}

}  // namespace deconv
