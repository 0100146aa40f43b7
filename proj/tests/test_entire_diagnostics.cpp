// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "deconv/entire_diagnostics.hpp"
#include "deconv/fixtures.hpp"
#include "oracles.hpp"

using namespace deconv;

namespace {

SampledSignal chi(double a, double b, double h = 0.01) {
  return make_kernel({KernelKind::Indicator, a, b}, h);
}

std::vector<double> radii(double lo, double hi, double step) {
  std::vector<double> v;
  for (double r = lo; r <= hi + 1e-9; r += step) v.push_back(r);
  return v;
}

}  // namespace

TEST_CASE("growth ratios of the unit indicator") {
  const auto k = chi(0, 1);
  const std::vector<double> rr = {50.0};
  const auto g = growth_profile(k, rr);
  CHECK(std::abs(g.log_ratio_pos[0] - (std::log(std::expm1(50.0) / 50.0) / 50.0)) <= 1e-3);
  CHECK(std::abs(g.log_ratio_pos[0] - 0.9218) <= 1e-3);
  CHECK(std::abs(g.log_ratio_neg[0] + std::log(50.0) / 50.0) <= 1e-3);
}

TEST_CASE("growth indicators of the unit indicator") {
  const auto k = chi(0, 1, 0.001);
  const auto g = growth_profile(k, radii(20, 400, 20));
  CHECK(g.sigma_hat >= 0.9);
  CHECK(g.sigma_hat <= 1.0);
  CHECK(g.mu_hat >= -0.1);
  CHECK(g.mu_hat <= 0.02);
  CHECK(g.sigma_hat >= g.mu_hat);
}

TEST_CASE("growth indicators of a shifted indicator") {
  const auto k = chi(0.3, 0.8, 0.001);
  const auto g = growth_profile(k, radii(10, 200, 10));
  CHECK(std::abs(g.sigma_hat - 0.8) <= 0.05);
  CHECK(std::abs(g.mu_hat - 0.3) <= 0.05);
}

TEST_CASE("growth on the positive axis is bounded by the support") {
  const auto k = chi(0.2, 0.6);
  const double l1 = l1_norm(k);
  const auto g = growth_profile(k, radii(5, 100, 5));
  for (std::size_t i = 0; i < g.radii.size(); ++i)
    CHECK(g.log_ratio_pos[i] <= std::log(l1) / g.radii[i] + 0.6 + 1e-9);
}

TEST_CASE("growth requires support in the unit interval") {
  const auto k = make_kernel({KernelKind::Gaussian}, 0.01);
  const std::vector<double> rr = {10.0};
  CHECK_THROWS_AS(growth_profile(k, rr), ValidationError);
  CHECK_THROWS_AS(growth_profile(chi(-0.5, 0.5), rr), ValidationError);
  const std::vector<double> bad = {10.0, 5.0};
  CHECK_THROWS_AS(growth_profile(chi(0, 1), bad), ValidationError);
}

TEST_CASE("zero counts of the unit indicator") {
  const auto k = chi(0, 1);
  CHECK(count_zeros(k, 10, 640).count == 2);
  const auto z = count_zeros(k, 100, 6400);
  CHECK(z.count == 30);
  CHECK(static_cast<double>(z.count) / 100 == doctest::Approx(1 / std::numbers::pi).epsilon(0.06));
  CHECK(std::abs(z.winding_integral - 30.0) <= 0.02);
}

TEST_CASE("zero count of a truncated gaussian against a direct winding oracle") {
  const auto k = SampledSignal::sample(UniformGrid::symmetric(8, 0.01),
                                       [](double t) { return Complex(std::exp(-t * t)); });
  const double r = 5;
  const auto z = count_zeros(k, r, 320);
  auto phi = [&](Complex w) { return laplace_at(k, w); };
  CHECK(static_cast<long>(z.count) == oracle::winding(phi, r, 3200));
}

TEST_CASE("zero count of a smooth compact kernel") {
  const auto k = SampledSignal::sample(UniformGrid::symmetric(1, 0.005), [](double t) {
    return Complex(std::max(0.0, 1.0 - std::abs(t)));
  });
  // double zeros at 2 pi k i, k != 0
  const auto z = count_zeros(k, 30, 1920);
  auto phi = [&](Complex w) { return laplace_at(k, w); };
  CHECK(static_cast<long>(z.count) == oracle::winding(phi, 30, 19200));
  CHECK(z.count == 16);
}

TEST_CASE("zero counting validates its input") {
  const auto g = make_kernel({KernelKind::Gaussian}, 0.01);
  CHECK_THROWS_AS(count_zeros(g, 5, 320), ValidationError);
  CHECK_THROWS_AS(count_zeros(chi(0, 1), 10, 639), ValidationError);
  CHECK_THROWS_AS(count_zeros(chi(0, 1), 200, 12800), ValidationError);
  CHECK_THROWS_AS(count_zeros(chi(0, 1), 0, 64), ValidationError);
}

TEST_CASE("a contour through a zero is nudged outward") {
  const auto k = chi(0, 1);
  const double r = 2 * std::numbers::pi * 16;
  const auto m = static_cast<std::size_t>(std::ceil(64 * r));
  const auto z = count_zeros(k, r, m);
  CHECK(z.nudged);
  CHECK(z.radius > r);
  CHECK(z.count == 32);
}

TEST_CASE("a violent phase is retried on a finer contour") {
  const auto k = chi(20, 21);
  const auto z = count_zeros(k, 10, 640);
  CHECK(z.refined);
  CHECK(z.contour_points == 2560);
  CHECK(z.count == 2);
}

TEST_CASE("zero density of the unit indicator") {
  const auto k = chi(0, 1);
  const auto rep = zero_density(k, radii(10, 100, 10));
  CHECK(std::abs(rep.d_hat - 1.0) <= 0.1);
  for (std::size_t i = 1; i < rep.counts.size(); ++i) CHECK(rep.counts[i] >= rep.counts[i - 1]);
  for (double w : rep.winding_integrals) CHECK(std::abs(w - std::round(w)) <= 0.02);
  for (auto n : rep.counts) CHECK(n % 2 == 0);
  REQUIRE(rep.predicted_density.has_value());
  CHECK(std::abs(rep.d_hat - (*rep.sigma_hat - *rep.mu_hat)) <= 0.1);
}

TEST_CASE("zero density converges between the last two radii") {
  const std::vector<double> a = {90.0, 100.0};
  const auto ra = zero_density(chi(0, 1), a);
  CHECK(std::abs(ra.densities[1] - ra.densities[0]) <= 0.05 * ra.densities[1]);
  const std::vector<double> b = {145.0, 150.0};
  const auto rb = zero_density(chi(0.3, 0.8), b);
  CHECK(std::abs(rb.densities[1] - rb.densities[0]) <= 0.05 * rb.densities[1]);
}

TEST_CASE("zero density of a shifted indicator") {
  const auto rep = zero_density(chi(0.3, 0.8), std::vector<double>{50.0, 100.0, 150.0});
  CHECK(std::abs(rep.d_hat - 0.5) <= 0.15 * 0.5);
  for (auto n : rep.counts) CHECK(n % 2 == 0);
}

TEST_CASE("zero density without a growth prediction") {
  const auto k = SampledSignal::sample(UniformGrid::symmetric(8, 0.01),
                                       [](double t) { return Complex(std::exp(-t * t)); });
  const auto rep = zero_density(k, std::vector<double>{3.0, 5.0});
  CHECK(!rep.predicted_density.has_value());
  CHECK_THROWS_AS(zero_density(k, std::vector<double>{5.0}, 32.0), ValidationError);
}
