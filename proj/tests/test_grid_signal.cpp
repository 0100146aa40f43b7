// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "deconv/grid_signal.hpp"
#include "oracles.hpp"

using namespace deconv;

namespace {

SampledSignal indicator(double a, double b, double lo, double hi, double h) {
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / h)) + 1;
  return SampledSignal::sample({lo, h, n}, [&](double t) {
    return Complex((t >= a - 1e-12 && t <= b + 1e-12) ? 1.0 : 0.0);
  });
}

SampledSignal gaussian(double extent, double h) {
  return SampledSignal::sample(UniformGrid::symmetric(extent, h),
                               [](double t) { return Complex(std::exp(-t * t)); });
}

SampledSignal on_unit(double h, const std::function<double(double)>& f) {
  const auto n = static_cast<std::size_t>(std::llround(1.0 / h)) + 1;
  return SampledSignal::sample({0.0, h, n}, [&](double t) { return Complex(f(t)); });
}

}  // namespace

TEST_CASE("l1 norm of an indicator") {
  const double h = 0.001;
  CHECK(l1_norm(indicator(0, 1, -0.5, 1.5, h)) == doctest::Approx(1.0).epsilon(2 * h));
}

TEST_CASE("norms of the zero signal vanish") {
  const auto z = SampledSignal::zeros({-1, 0.01, 201});
  CHECK(l1_norm(z) == 0.0);
  CHECK(l2_norm(z) == 0.0);
  CHECK(std::abs(fourier_at(z, 3.0)) == 0.0);
}

TEST_CASE("gaussian norms against closed forms and simpson") {
  const auto g = gaussian(8, 0.001);
  const double sp = std::sqrt(std::numbers::pi);
  CHECK(std::abs(l1_norm(g) - sp) <= 1e-4);
  CHECK(std::abs(l1_norm(g) - oracle::simpson([](double t) { return std::exp(-t * t); }, -8, 8,
                                               20000)) <= 1e-4);
  CHECK(std::abs(l2_norm(g) - std::pow(std::numbers::pi / 2, 0.25)) <= 1e-3);
  CHECK(l2_norm(indicator(0, 1, -0.5, 1.5, 0.001)) == doctest::Approx(1.0).epsilon(0.002));
}

TEST_CASE("l2 norm is absolutely homogeneous") {
  const auto g = gaussian(6, 0.01);
  CHECK(l2_norm(g.scaled(-4.0)) == 4.0 * l2_norm(g));
  CHECK(l2_norm(g.scaled(Complex(0, 2))) == 2.0 * l2_norm(g));
  CHECK(l2_norm(g.scaled(3.0)) == doctest::Approx(3.0 * l2_norm(g)).epsilon(1e-15));
  CHECK(l1_norm(g.scaled(-0.5)) == doctest::Approx(0.5 * l1_norm(g)).epsilon(1e-15));
}

TEST_CASE("fourier transform of an indicator") {
  const auto chi = on_unit(1e-4, [](double) { return 1.0; });
  CHECK(std::abs(fourier_at(chi, 0.0) - 1.0) <= 1e-12);
  CHECK(std::abs(fourier_at(chi, 2 * std::numbers::pi)) <= 1e-6);
  for (double lam : {0.3, 1.7, 5.0, 11.0}) {
    const Complex exact = (1.0 - std::exp(Complex(0, -lam))) / Complex(0, lam);
    CHECK(std::abs(fourier_at(chi, lam) - exact) <= 1e-6);
  }
}

TEST_CASE("fourier transform of a gaussian") {
  const auto g = gaussian(8, 0.001);
  const double exact = std::sqrt(std::numbers::pi) * std::exp(-1.0);
  CHECK(std::abs(fourier_at(g, 2.0) - exact) <= 1e-4);
}

TEST_CASE("fourier vector form matches pointwise evaluation") {
  const auto g = gaussian(5, 0.01);
  const std::vector<double> lam = {-3.0, -0.5, 0.0, 0.25, 4.0};
  const auto ts = fourier_at(g, lam);
  REQUIRE(ts.size() == lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i)
    CHECK(std::abs(ts.values[i] - fourier_at(g, lam[i])) <= 1e-13);
}

TEST_CASE("laplace transform of an indicator") {
  const auto chi = on_unit(1e-4, [](double) { return 1.0; });
  CHECK(std::abs(laplace_at(chi, 1.0) - (std::numbers::e - 1.0)) <= 1e-4);
  CHECK(std::abs(laplace_at(chi, 0.0) - fourier_at(chi, 0.0)) <= 1e-15);
  CHECK(std::abs(laplace_at(chi, -50.0) - (1.0 - std::exp(-50.0)) / 50.0) <= 1e-6);
}

TEST_CASE("laplace on the imaginary axis is the fourier transform") {
  const auto g = gaussian(6, 0.01);
  for (double lam : {-7.0, -1.0, 0.5, 3.0, 12.0})
    CHECK(std::abs(laplace_at(g, Complex(0, -lam)) - fourier_at(g, lam)) <= 1e-12);
}

TEST_CASE("laplace log form survives overflow") {
  const auto chi = on_unit(1e-3, [](double) { return 1.0; });
  const LogComplex big = laplace_log_at(chi, 800.0);
  CHECK(std::isfinite(big.log_abs));
  CHECK(big.log_abs == doctest::Approx(800.0 - std::log(800.0)).epsilon(1e-3));
  Warnings w;
  (void)laplace_at(chi, 800.0, &w);
  CHECK(!w.empty());
  Warnings quiet;
  (void)laplace_at(chi, 10.0, &quiet);
  CHECK(quiet.empty());
}

TEST_CASE("laplace envelope dominates the sum") {
  const auto g = gaussian(5, 0.01);
  for (double x : {-3.0, 0.0, 2.0})
    for (double y : {0.0, 1.0, 9.0})
      CHECK(laplace_log_at(g, Complex(x, y)).log_abs <= laplace_envelope_log(g, x) + 1e-12);
}

TEST_CASE("inverse fourier of the zero transform") {
  const auto freq = UniformGrid::symmetric(10, 0.05);
  TransformSamples ts{freq.points(), std::vector<Complex>(freq.count)};
  const auto out = inverse_fourier(ts, UniformGrid::symmetric(2, 0.01));
  CHECK(l1_norm(out) == 0.0);
}

TEST_CASE("inverse fourier round trip of a gaussian") {
  const auto g = gaussian(8, 0.01);
  const auto freq = UniformGrid::symmetric(40, 0.05);
  const auto back = inverse_fourier(fourier_at(g, freq.points()), UniformGrid::symmetric(3, 0.01));
  double err = 0;
  for (std::size_t k = 0; k < back.size(); ++k) {
    const double t = back.t_at(k);
    err = std::max(err, std::abs(back[k] - std::exp(-t * t)));
  }
  CHECK(err <= 1e-5);
}

TEST_CASE("inverse fourier is linear") {
  const auto freq = UniformGrid::symmetric(20, 0.05);
  const auto pts = freq.points();
  TransformSamples a{pts, {}}, b{pts, {}}, c{pts, {}};
  for (double l : pts) {
    a.values.push_back(std::exp(-l * l));
    b.values.push_back(Complex(0, 1) / (1.0 + l * l));
    c.values.push_back(2.0 * a.values.back() - 3.0 * b.values.back());
  }
  const auto tg = UniformGrid::symmetric(2, 0.05);
  const auto lhs = inverse_fourier(c, tg);
  const auto rhs = inverse_fourier(a, tg).scaled(2.0) - inverse_fourier(b, tg).scaled(3.0);
  for (std::size_t k = 0; k < lhs.size(); ++k) CHECK(std::abs(lhs[k] - rhs[k]) <= 1e-12);
}

TEST_CASE("inverse fourier rejects unusable frequency grids") {
  const auto tg = UniformGrid::symmetric(1, 0.1);
  TransformSamples lopsided{{0.0, 0.1, 0.2}, {1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(inverse_fourier(lopsided, tg), ValidationError);
  TransformSamples ragged{{-0.2, -0.05, 0.0, 0.05, 0.2}, {1.0, 1.0, 1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(inverse_fourier(ragged, tg), ValidationError);
  TransformSamples unsorted{{0.1, -0.1}, {1.0, 1.0}};
  CHECK_THROWS_AS(unsorted.validate("t"), ValidationError);
}

TEST_CASE("trapezoid error shrinks fourfold when the step halves") {
  const double lam = 3.0;
  const Complex ef = (std::exp(Complex(1.0, -lam)) - 1.0) / Complex(1.0, -lam);
  const double el2 = std::sqrt((std::exp(2.0) - 1.0) / 2.0);
  auto exp_on = [](double h) { return on_unit(h, [](double t) { return std::exp(t); }); };
  const double h = 0.01;
  const double f1 = std::abs(fourier_at(exp_on(h), lam) - ef);
  const double f2 = std::abs(fourier_at(exp_on(h / 2), lam) - ef);
  CHECK(f1 / f2 == doctest::Approx(4.0).epsilon(0.25));
  const double n1 = std::abs(l2_norm(exp_on(h)) - el2);
  const double n2 = std::abs(l2_norm(exp_on(h / 2)) - el2);
  CHECK(n1 / n2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("transform magnitude never exceeds the l1 norm") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(400);
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  const SampledSignal s(-2.0, 0.01, v);
  std::uniform_real_distribution<double> ud(-300, 300);
  const double l1 = l1_norm(s);
  for (int i = 0; i < 200; ++i) CHECK(std::abs(fourier_at(s, ud(rng))) <= l1 * (1 + 1e-14));
}

TEST_CASE("real signals have conjugate symmetric transforms") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<Complex> v(300);
  for (auto& x : v) x = nd(rng);
  const SampledSignal s(-1.3, 0.01, v);
  REQUIRE(s.is_real());
  for (double lam : {0.7, 4.2, 31.0})
    CHECK(std::abs(fourier_at(s, -lam) - std::conj(fourier_at(s, lam))) <= 1e-12);
}

TEST_CASE("convolution of two gaussians") {
  const auto g = gaussian(8, 0.01);
  const auto c = convolve(g, g);
  CHECK(c.spacing() == 0.01);
  double err = 0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double t = c.t_at(k);
    if (std::abs(t) > 6) continue;
    err = std::max(err, std::abs(c[k] - std::sqrt(std::numbers::pi / 2) * std::exp(-t * t / 2)));
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("convolution requires matching spacing") {
  const auto a = gaussian(2, 0.01);
  const auto b = gaussian(2, 0.02);
  CHECK_THROWS_AS(convolve(a, b), ValidationError);
}

TEST_CASE("restriction and zero extension") {
  const auto g = gaussian(2, 0.1);
  const auto wide = restrict_to(g, UniformGrid::symmetric(3, 0.1));
  CHECK(wide.size() == 61);
  CHECK(wide[0] == Complex(0.0));
  CHECK(std::abs(wide[30] - 1.0) <= 1e-15);
  const auto narrow = restrict_to(g, UniformGrid::symmetric(1, 0.1));
  CHECK(narrow.size() == 21);
  CHECK(std::abs(narrow[10] - 1.0) <= 1e-15);
}

TEST_CASE("signals reject bad construction") {
  CHECK_THROWS_AS(SampledSignal(0.0, 0.0, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(SampledSignal(0.0, 0.1, {}), ValidationError);
  const auto a = gaussian(1, 0.1);
  const auto b = gaussian(2, 0.1);
  CHECK_THROWS_AS(a + b, ValidationError);
}

TEST_CASE("support indices and symmetric grids") {
  const auto chi = indicator(0, 1, -0.5, 1.5, 0.1);
  const auto s = chi.support();
  REQUIRE(s.has_value());
  CHECK(chi.t_at(s->first) == doctest::Approx(0.0));
  CHECK(chi.t_at(s->second) == doctest::Approx(1.0));
  CHECK(!SampledSignal::zeros({0, 1, 4}).support());
  const auto grid = UniformGrid::symmetric(1.0, 0.25);
  CHECK(grid.count == 9);
  CHECK(grid[0] == -grid.back());
}
