// SPDX-License-Identifier: Apache-2.0
#include "deconv/commands.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>

#include <nlohmann/json.hpp>

#include "deconv/config.hpp"
#include "deconv/entire_diagnostics.hpp"
#include "deconv/fixtures.hpp"
#include "deconv/io.hpp"
#include "deconv/regularization.hpp"
#include "deconv/small_sets.hpp"
#include "deconv/tail_profile.hpp"

namespace deconv {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kC3StabilityMax = 10.0;
constexpr double kLogRatioTol = 0.15;

class Run {
 public:
  Run(std::string command, const ExperimentConfig& cfg, fs::path out)
      : command_(std::move(command)), cfg_(cfg), out_(std::move(out)) {}

  template <class F>
  auto stage(const std::string& name, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = fn();
    timings_[name] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }

  void text(const std::string& file, const std::string& body) {
    write_text_atomic(out_ / file, body);
    outputs_.push_back(file);
  }
  void write(const std::string& file, const json& body) {
    write_json(out_ / file, body);
    outputs_.push_back(file);
  }

  void finish(int exit_code) {
    json m = {{"command", command_},
              {"config", cfg_.source},
              {"seed", cfg_.seed},
              {"outputs", outputs_},
              {"exit_code", exit_code},
              {"versions", {{"deconv", kVersion}, {"compiler", __VERSION__}}},
              {"wall_clock_s", timings_}};
    write_json(out_ / "manifest.json", m);
  }

  const ExperimentConfig& cfg() const { return cfg_; }

 private:
  std::string command_;
  const ExperimentConfig& cfg_;
  fs::path out_;
  std::vector<std::string> outputs_;
  json timings_ = json::object();
};

UniformGrid time_grid(const ExperimentConfig& c) {
  return UniformGrid::symmetric(c.grids.t_extent, c.grids.t_step);
}

SampledSignal load_f0(const ExperimentConfig& c) {
  if (c.f0.kind == F0Spec::Kind::SynthSmooth) return synth_smooth_f0(c.f0.q, time_grid(c));
  SampledSignal f = read_signal_csv(c.f0.path);
  if (std::abs(f.spacing() - c.grids.t_step) > 1e-9 * c.grids.t_step)
    throw ValidationError("harness_cli.load_f0", "f0 file spacing differs from grids.t_step");
  return f;
}

std::vector<double> uniform_from_zero(double max, double step) {
  const auto n = static_cast<std::size_t>(std::floor(max / step + 1e-9));
  std::vector<double> g(n + 1);
  for (std::size_t k = 0; k <= n; ++k) g[k] = static_cast<double>(k) * step;
  return g;
}

double single_eps(const CommandOptions& o, const ExperimentConfig& c, const char* op) {
  if (o.eps) return *o.eps;
  if (c.eps) return *c.eps;
  if (!c.eps_list.empty()) return c.eps_list.front();
  throw ValidationError(op, "no eps given (use --eps, 'eps' or 'eps_list')");
}

bool support_in_unit_interval(const SampledSignal& k) {
  const auto s = k.support();
  return s && k.truncation_tail() == 0.0 && k.t_at(s->first) >= -1e-9 &&
         k.t_at(s->second) <= 1.0 + 1e-9;
}

json kernel_json(const SampledSignal& k) {
  return {{"samples", k.size()},
          {"spacing", k.spacing()},
          {"extent", k.radius()},
          {"truncation_tail", k.truncation_tail()},
          {"l1_norm", l1_norm(k)},
          {"compact_support", k.truncation_tail() == 0.0}};
}

int analyze_kernel(Run& run) {
  const auto& c = run.cfg();
  const SampledSignal kernel = run.stage("kernel", [&] { return make_kernel(c.kernel, c.grids.t_step); });
  const TailProfile p = run.stage("profile", [&] {
    return compute_p(kernel, default_s_grid(kernel, c.grids.s_step));
  });
  const auto dual_grid = uniform_from_zero(c.grids.dual_max, c.grids.dual_step);
  const DualProfile pstar = run.stage("dual", [&] { return young_dual(p, dual_grid); });
  const std::vector<double> finite_s(p.s_grid.begin(),
                                     p.s_grid.begin() + static_cast<std::ptrdiff_t>(p.finite_count()));
  const DualProfile pss = run.stage("double_dual", [&] { return young_double_dual(pstar, finite_s); });
  const bool superlinear = detect_superlinear(p);

  run.text("profile.csv", profile_csv(p));
  run.text("dual.csv", dual_csv(pstar));
  run.text("double_dual.csv", dual_csv(pss));

  json analysis = {{"kernel", kernel_json(kernel)},
                   {"p0", p.p_values.front()},
                   {"superlinear", superlinear},
                   {"dual_convex", pstar.is_convex()},
                   {"dual_nondecreasing", pstar.is_nondecreasing()}};
  if (kernel.truncation_tail() == 0.0) {
    const auto zr = run.stage("zeros", [&] {
      return zero_density(kernel, c.zero_radii, c.zero_points_per_radius);
    });
    run.text("zeros.csv", zero_csv(zr));
    analysis["zeros"] = to_json(zr);
    if (support_in_unit_interval(kernel)) {
      const auto g = run.stage("growth", [&] { return growth_profile(kernel, c.growth_radii); });
      analysis["growth"] = to_json(g);
    }
  }
  run.write("analysis.json", analysis);
  std::cout << "superlinear: " << (superlinear ? "true" : "false") << "\n";
  return kExitSuccess;
}

SyntheticInstance make_instance(Run& run) {
  const auto& c = run.cfg();
  const SampledSignal kernel = run.stage("kernel", [&] { return make_kernel(c.kernel, c.grids.t_step); });
  const SampledSignal f0 = run.stage("f0", [&] { return load_f0(c); });
  return run.stage("instance", [&] {
    return build_instance(kernel, f0, default_s_grid(kernel, c.grids.s_step));
  });
}

PipelineSettings settings_of(const ExperimentConfig& c) {
  PipelineSettings s;
  s.beta = c.beta;
  s.q = c.q;
  s.freq_step = c.grids.freq_step;
  s.freq_extent_factor = c.grids.freq_extent_factor;
  s.freq_min_extent = c.grids.freq_min_extent;
  s.seed = c.seed;
  s.noise_free = c.noise_free;
  return s;
}

int deconvolve_cmd(Run& run, const CommandOptions& o) {
  const auto& c = run.cfg();
  const double eps = single_eps(o, c, "harness_cli.deconvolve");
  const SyntheticInstance inst = make_instance(run);
  const RunResult res = run.stage("pipeline", [&] { return run_pipeline(inst, eps, settings_of(c)); });
  run.write("plan.json", to_json(res.plan));
  run.text("reconstruction.csv", signal_csv(res.reconstruction));
  json d = to_json(res.decomposition);
  d["achieved_error"] = res.achieved_error;
  d["freq_extent"] = res.freq_extent;
  d["noise_free"] = c.noise_free;
  d["warnings"] = res.warnings;
  run.write("decomposition.json", d);
  return kExitSuccess;
}

int sweep_cmd(Run& run) {
  const auto& c = run.cfg();
  if (c.eps_list.size() < 4)
    throw ValidationError("harness_cli.sweep", "eps_list needs at least 4 entries");
  const SyntheticInstance inst = make_instance(run);
  const SweepSummary s = run.stage("sweep", [&] { return sweep(inst, c.eps_list, settings_of(c)); });
  run.text("sweep.csv", sweep_csv(s));

  bool bounds_ok = true;
  json rows = json::array();
  for (const auto& r : s.records) {
    bounds_ok = bounds_ok && (!r.ok || r.bound_holds);
    rows.push_back({{"eps", r.eps}, {"ok", r.ok}, {"bound_holds", r.bound_holds},
                    {"failure", r.failure}});
  }
  const bool stable = s.c3_stability <= kC3StabilityMax;
  const bool radius_ok = std::abs(s.log_r_over_loglog - 1.0) <= kLogRatioTol;
  const bool monotone = s.inversions <= 1;
  const bool pass = s.valid && bounds_ok && stable && radius_ok && monotone;
  json summary = {{"c3_fit", s.c3_fit},
                  {"c3_stability", std::isfinite(s.c3_stability) ? json(s.c3_stability) : json("inf")},
                  {"logR_over_loglog", s.log_r_over_loglog},
                  {"inversions", s.inversions},
                  {"failed_rows", s.failed_rows},
                  {"valid", s.valid},
                  {"rows", rows},
                  {"acceptance",
                   {{"bounds_hold", bounds_ok},
                    {"c3_stability_le_10", stable},
                    {"logR_over_loglog_within_0.15", radius_ok},
                    {"at_most_one_inversion", monotone},
                    {"pass", pass}}}};
  run.write("summary.json", summary);
  return pass ? kExitSuccess : kExitThreshold;
}

int smallset_cmd(Run& run, const CommandOptions& o) {
  const auto& c = run.cfg();
  const double eps = single_eps(o, c, "harness_cli.smallset");
  const SampledSignal kernel = run.stage("kernel", [&] { return make_kernel(c.kernel, c.grids.t_step); });
  const TailProfile p = run.stage("profile", [&] {
    return compute_p(kernel, default_s_grid(kernel, c.grids.s_step));
  });
  const Cutoff cut = s_epsilon(p, eps);
  if (cut.saturated)
    throw ComputationError("harness_cli.smallset", "eps below the kernel truncation floor");
  const double r = solve_r_eps(eps, c.beta, c.q, cut.s, p.l1_total);
  const double res = c.smallset_resolution.value_or(r / 1e4);
  const SpectrumFn phi_hat = [&kernel](double l) { return fourier_at(kernel, l); };
  const SmallSetReport rep = run.stage("measure", [&] {
    return assess_small_set(phi_hat, eps, c.beta, c.q, r, res);
  });
  json j = to_json(rep);
  j["s_eps"] = cut.s;
  j["bound_holds"] = rep.measure_estimate <= rep.bound;
  if (kernel.truncation_tail() > 0.0) {
    try {
      const DualProfile pstar = young_dual(p, uniform_from_zero(c.grids.dual_max, c.grids.dual_step));
      const Theo4Radius t4 = theo4_radius(eps, c.q, pstar);
      j["theo4"] = {{"radius", t4.radius},
                    {"asymptotic_ratio", t4.asymptotic_ratio},
                    {"reading", t4.reading},
                    {"alternative_reading", "log(R) evaluated at 2 eps"}};
    } catch (const Error& e) {
      j["theo4"] = {{"error", e.what()}, {"operation", e.operation()}};
    }
  }
  run.write("smallset.json", j);
  return kExitSuccess;
}

int zeros_cmd(Run& run) {
  const auto& c = run.cfg();
  const SampledSignal kernel = run.stage("kernel", [&] { return make_kernel(c.kernel, c.grids.t_step); });
  const ZeroCountReport zr = run.stage("zeros", [&] {
    return zero_density(kernel, c.zero_radii, c.zero_points_per_radius);
  });
  run.text("zeros.csv", zero_csv(zr));
  run.write("zeros.json", to_json(zr));
  return kExitSuccess;
}

void report_error(const fs::path& out, const std::string& command, int exit_code,
                  const std::string& kind, const std::string& operation,
                  const std::string& message) {
  const auto dot = operation.find('.');
  json e = {{"error",
             {{"kind", kind},
              {"module", dot == std::string::npos ? operation : operation.substr(0, dot)},
              {"operation", operation},
              {"message", message}}}};
  std::cerr << e.dump() << "\n";
  try {
    if (!out.empty()) {
      fs::create_directories(out);
      write_json(out / "error.json", e);
      write_json(out / "manifest.json",
                 {{"command", command},
                  {"outputs", {"error.json"}},
                  {"exit_code", exit_code},
                  {"versions", {{"deconv", kVersion}, {"compiler", __VERSION__}}}});
    }
  } catch (const std::exception&) {
    // stderr already carries the report
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"analyze-kernel", "deconvolve", "sweep",
                                                 "smallset", "zeros"};
  return names;
}

int run_command(const std::string& name, const CommandOptions& options) {
  const std::string op_prefix = "harness_cli." + name;
  try {
    const ExperimentConfig cfg = load_config(options.config);
    if (options.eps && !(*options.eps > 0.0))
      throw ValidationError(op_prefix, "--eps must be positive");
    fs::create_directories(options.out);
    Run run(name, cfg, options.out);
    int code = kExitSuccess;
    if (name == "analyze-kernel")
      code = analyze_kernel(run);
    else if (name == "deconvolve")
      code = deconvolve_cmd(run, options);
    else if (name == "sweep")
      code = sweep_cmd(run);
    else if (name == "smallset")
      code = smallset_cmd(run, options);
    else if (name == "zeros")
      code = zeros_cmd(run);
    else
      throw ValidationError(op_prefix, "unknown command");
    run.finish(code);
    return code;
  } catch (const ValidationError& e) {
    report_error(options.out, name, kExitValidation, "validation", e.operation(), e.what());
    return kExitValidation;
  } catch (const Error& e) {
    report_error(options.out, name, kExitComputation, "computation", e.operation(), e.what());
    return kExitComputation;
  } catch (const std::exception& e) {
    report_error(options.out, name, kExitComputation, "computation", op_prefix, e.what());
    return kExitComputation;
  }
}

}  // namespace deconv
