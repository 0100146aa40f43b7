// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Run with --criterion N; prints one PASS/FAIL line.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "deconv/commands.hpp"
#include "deconv/entire_diagnostics.hpp"
#include "deconv/fixtures.hpp"
#include "deconv/small_sets.hpp"
#include "oracles.hpp"

using namespace deconv;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::vector<double> range(double lo, double hi, double h) {
  std::vector<double> v;
  const auto n = std::llround((hi - lo) / h);
  for (long long k = 0; k <= n; ++k) v.push_back(lo + static_cast<double>(k) * h);
  return v;
}

bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

SyntheticInstance instance(const KernelSpec& spec) {
  const auto k = make_kernel(spec, 0.01);
  const auto f0 = synth_smooth_f0(1.0, UniformGrid::symmetric(36, 0.01));
  return build_instance(k, f0, default_s_grid(k, 0.01));
}

Verdict ac1() {
  const auto inst = instance({KernelKind::Gaussian});
  PipelineSettings st;
  st.seed = 11;
  PipelineSettings fine = st;
  fine.freq_step = st.freq_step / 4;
  Verdict v{true, ""};
  for (double eps : {1e-4, 1e-6, 1e-8, 1e-10}) {
    const auto a = run_pipeline(inst, eps, st);
    const auto b = run_pipeline(inst, eps, fine);
    const auto& d = a.decomposition;
    const bool bound = d.achieved_sq_error <= d.total_bound + kBoundTolerance;
    const bool oracle = rel_close(d.outer_term, b.decomposition.outer_term, 1e-3) &&
                        rel_close(d.inner_term, b.decomposition.inner_term, 1e-3) &&
                        rel_close(d.achieved_sq_error, b.decomposition.achieved_sq_error, 1e-3);
    v.pass = v.pass && bound && oracle;
    v.detail += "eps=" + fmt(eps) + " err2=" + fmt(d.achieved_sq_error) + " bound=" +
                fmt(d.total_bound) + (oracle ? "" : " (fine-grid mismatch)") + "; ";
  }
  return v;
}

SweepSummary indicator_sweep() {
  PipelineSettings st;
  st.seed = 7;
  return sweep(instance({KernelKind::Indicator, 0, 1}), {1e-6, 1e-8, 1e-10, 1e-12, 1e-14}, st);
}

Verdict ac2() {
  const auto s = indicator_sweep();
  bool bounds = s.valid;
  for (const auto& r : s.records) bounds = bounds && r.ok;
  const bool pass = bounds && s.c3_stability <= 10.0 && s.inversions <= 1;
  return {pass, "c3_fit=" + fmt(s.c3_fit) + " stability=" + fmt(s.c3_stability) +
                    " inversions=" + std::to_string(s.inversions)};
}

Verdict ac3() {
  const auto s = indicator_sweep();
  const double r = s.log_r_over_loglog;
  return {s.valid && std::abs(r - 1.0) <= 0.15,
          "log R / log log(1/eps) = " + fmt(r) + " at eps=1e-14, R=" + fmt(s.records.back().r_eps)};
}

Verdict ac4() {
  Verdict v{true, ""};
  const double eps = 1e-8, beta = 0.2, q = 1.0;
  for (const KernelSpec& spec : {KernelSpec{KernelKind::Indicator, 0, 1}, KernelSpec{KernelKind::Gaussian}}) {
    const auto k = make_kernel(spec, 0.01);
    const auto p = compute_p(k, default_s_grid(k, 0.01));
    const double s = s_epsilon(p, eps).s;
    const double r = solve_r_eps(eps, beta, q, s, p.l1_total);
    const SpectrumFn phi = [&](double l) { return fourier_at(k, l); };
    const auto rep = assess_small_set(phi, eps, beta, q, r, r / 1e4);
    const double thr = rep.threshold;
    const double dense = oracle::dense_measure([&](double l) { return std::abs(phi(l)) <= thr; }, r,
                                               200000);
    const bool agree = std::abs(rep.measure_estimate - dense) <= 0.05 * std::max(dense, 1e-300) ||
                       rep.measure_estimate == dense;
    v.pass = v.pass && rep.measure_estimate <= rep.bound && agree;
    v.detail += "measure=" + fmt(rep.measure_estimate) + " dense=" + fmt(dense) + " bound=" +
                fmt(rep.bound) + " R=" + fmt(r) + "; ";
  }
  return v;
}

TailProfile gaussian_profile_wide() {
  KernelSpec spec{KernelKind::Gaussian};
  spec.extent = 27.0;
  const auto k = make_kernel(spec, 0.001);
  return compute_p(k, default_s_grid(k, 0.001));
}

Verdict ac5() {
  const auto p = gaussian_profile_wide();
  const auto pstar = young_dual(p, std::vector<double>{0.0, 10.0, 20.0, 20.5, 40.0, 40.5, 45.0});
  const std::vector<double> sl = {20.0, 40.0};
  const auto rep = check_dual_growth(p, pstar, sl);
  const bool pass = rep.ratio[0] >= 0.9 && rep.ratio[0] <= 1.1 &&
                    std::abs(rep.ratio[1] - 1) < std::abs(rep.ratio[0] - 1) &&
                    rep.shifted_ratio[0] <= 1.05 && rep.shifted_ratio[1] <= 1.05;
  return {pass, "ratio(20)=" + fmt(rep.ratio[0]) + " ratio(40)=" + fmt(rep.ratio[1]) +
                    " shifted=" + fmt(rep.shifted_ratio[0]) + "," + fmt(rep.shifted_ratio[1])};
}

Verdict ac6() {
  KernelSpec spec{KernelKind::Gaussian};
  spec.extent = 27.0;
  const auto k = make_kernel(spec, 0.001);
  const auto p = compute_p(k, default_s_grid(k, 0.001));
  Verdict v{true, ""};
  for (double s : {0.5, 1.0, 2.0, 5.0}) {
    const double h = compute_H(k, s).value;
    const double dev = std::abs(h - (p.l1_total + s * compute_G(p, s).value)) / h;
    v.pass = v.pass && dev <= 1e-3;
    v.detail += "s=" + fmt(s) + " rel=" + fmt(dev) + "; ";
  }
  return v;
}

Verdict ac7() {
  const auto k = make_kernel({KernelKind::Indicator, 0.3, 0.8}, 0.001);
  const auto g = growth_profile(k, range(10, 200, 10));
  return {std::abs(g.sigma_hat - 0.8) <= 0.05 && std::abs(g.mu_hat - 0.3) <= 0.05,
          "sigma_hat=" + fmt(g.sigma_hat) + " mu_hat=" + fmt(g.mu_hat)};
}

Verdict ac8() {
  const auto k = make_kernel({KernelKind::Indicator, 0, 1}, 0.01);
  const auto rep = zero_density(k, std::vector<double>{10, 25, 50, 75, 100});
  bool integral = true;
  for (double w : rep.winding_integrals) integral = integral && std::abs(w - std::round(w)) <= 0.02;
  const double dens = rep.densities.back();
  const bool pass = rep.counts.back() == 30 && std::abs(dens * std::numbers::pi - 1) <= 0.1 && integral;
  return {pass, "n(100)=" + std::to_string(rep.counts.back()) + " density=" + fmt(dens) +
                    (integral ? " windings integral" : " non-integral winding")};
}

Verdict ac9() {
  auto verdict = [](KernelKind kind, double h) {
    const auto k = make_kernel({kind}, h);
    return detect_superlinear(compute_p(k, default_s_grid(k, h)));
  };
  const bool g1 = verdict(KernelKind::Gaussian, 0.01), g2 = verdict(KernelKind::Gaussian, 0.005);
  const bool e1 = verdict(KernelKind::TwoSidedExp, 0.01), e2 = verdict(KernelKind::TwoSidedExp, 0.005);
  return {g1 && g2 && !e1 && !e2, std::string("gaussian=") + (g1 ? "true" : "false") + "/" +
                                      (g2 ? "true" : "false") + " two_sided_exp=" +
                                      (e1 ? "true" : "false") + "/" + (e2 ? "true" : "false")};
}

Verdict ac10() {
  const auto s = range(0, 20, 0.01);
  auto tab = [&](const std::function<double(double)>& f) {
    std::vector<double> v;
    for (double x : s) v.push_back(f(x));
    return TailProfile::tabulated(s, v);
  };
  auto kern = [](const KernelSpec& spec) {
    const auto k = make_kernel(spec, 0.01);
    return compute_p(k, default_s_grid(k, 0.01));
  };
  const std::vector<TailProfile> profiles = {
      tab([](double t) { return t * t; }), tab([](double t) { return t > 0 ? t * std::log(t) : 0.0; }),
      tab([](double t) { return std::pow(t, 1.5); }), kern({KernelKind::Gaussian}),
      kern({KernelKind::Indicator, 0, 1})};
  const auto sig = range(0, 30, 0.05);
  std::mt19937_64 rng(2024);
  std::size_t violations = 0;
  for (const auto& p : profiles) {
    const auto d = young_dual(p, sig);
    if (!d.is_convex() || !d.is_nondecreasing()) ++violations;
    const auto dd = young_double_dual(d, std::span(p.s_grid).first(p.finite_count()));
    for (std::size_t i = 0; i < dd.s_grid.size(); ++i)
      if (dd.dual_values[i] > p.p_values[i] + 1e-9) ++violations;
    std::uniform_real_distribution<double> us(0, p.s_grid[p.finite_count() - 1]), ug(0, 30);
    for (int i = 0; i < 1000; ++i) {
      const double a = us(rng), b = ug(rng);
      if (a * b > p.value_at(a) + d.value_at(b) + 1e-9 * (1 + a * b)) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over 5 profiles x 1000 pairs"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict ac11() {
  const fs::path root = fs::temp_directory_path() / "deconv_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const json cfg = {{"kernel", {{"type", "indicator"}, {"a", 0.0}, {"b", 1.0}}},
                    {"eps_list", {1e-6, 1e-8, 1e-10, 1e-12}},
                    {"eps", 1e-8},
                    {"seed", 5}};
  std::ofstream(root / "config.json") << cfg.dump(2);
  Verdict v{true, ""};
  for (const auto& cmd : command_names()) {
    std::vector<fs::path> outs;
    for (const char* tag : {"a", "b"}) {
      outs.push_back(root / (cmd + "_" + tag));
      run_command(cmd, {root / "config.json", outs.back(), std::nullopt});
    }
    std::size_t files = 0, diffs = 0;
    for (const auto& e : fs::directory_iterator(outs[0])) {
      const auto name = e.path().filename();
      ++files;
      if (name == "manifest.json") {
        auto ma = json::parse(slurp(outs[0] / name));
        auto mb = json::parse(slurp(outs[1] / name));
        ma.erase("wall_clock_s");
        mb.erase("wall_clock_s");
        diffs += ma != mb;
      } else {
        diffs += slurp(outs[0] / name) != slurp(outs[1] / name);
      }
    }
    v.pass = v.pass && diffs == 0 && files > 1;
    v.detail += cmd + ":" + std::to_string(files) + " files " + std::to_string(diffs) + " differ; ";
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int criterion = 0;
  app.add_option("--criterion", criterion, "criterion number 1-11")->required()->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);
  const std::map<int, std::function<Verdict()>> checks = {
      {1, ac1}, {2, ac2}, {3, ac3}, {4, ac4},  {5, ac5},  {6, ac6},
      {7, ac7}, {8, ac8}, {9, ac9}, {10, ac10}, {11, ac11}};
  Verdict v;
  try {
    v = checks.at(criterion)();
  } catch (const std::exception& e) {
    v = {false, std::string("error: ") + e.what()};
  }
  std::cout << "AC" << criterion << (v.pass ? " PASS " : " FAIL ") << v.detail << std::endl;
  return v.pass ? 0 : 1;
}
