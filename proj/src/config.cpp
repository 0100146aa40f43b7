// SPDX-License-Identifier: Apache-2.0
#include "deconv/config.hpp"

#include <cmath>
#include <fstream>

namespace deconv {

namespace {

constexpr const char* kOp = "harness_cli.config";

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(kOp, std::string("field '") + key + "': " + e.what());
  }
}

std::string resolve(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.string();
}

KernelSpec parse_kernel(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ValidationError(kOp, "'kernel' must be an object");
  KernelSpec k;
  const auto type = get_or<std::string>(j, "type", "");
  if (type == "indicator") {
    k.kind = KernelKind::Indicator;
    k.a = get_or(j, "a", 0.0);
    k.b = get_or(j, "b", 1.0);
  } else if (type == "gaussian") {
    k.kind = KernelKind::Gaussian;
    k.scale = get_or(j, "scale", 1.0);
  } else if (type == "two_sided_exp") {
    k.kind = KernelKind::TwoSidedExp;
    k.rate = get_or(j, "rate", 1.0);
  } else if (type == "file") {
    k.kind = KernelKind::File;
    k.path = resolve(get_or<std::string>(j, "path", ""), base);
  } else {
    throw ValidationError(kOp, "unknown kernel type '" + type + "'");
  }
  if (j.contains("extent")) k.extent = get_or(j, "extent", 0.0);
  return k;
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ValidationError(kOp, "configuration must be a JSON object");
  ExperimentConfig c;
  c.source = j;
  if (!j.contains("kernel")) throw ValidationError(kOp, "missing 'kernel'");
  c.kernel = parse_kernel(j.at("kernel"), base_dir);
  c.beta = get_or(j, "beta", c.beta);
  c.q = get_or(j, "q", c.q);
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  c.noise_free = get_or(j, "noise_free", false);
  c.eps_list = get_or(j, "eps_list", std::vector<double>{});
  if (j.contains("eps")) c.eps = get_or(j, "eps", 0.0);

  c.f0.q = c.q;
  if (j.contains("f0")) {
    const auto& f = j.at("f0");
    const auto type = get_or<std::string>(f, "type", "synth_smooth");
    if (type == "synth_smooth") {
      c.f0.kind = F0Spec::Kind::SynthSmooth;
      c.f0.q = get_or(f, "q", c.q);
    } else if (type == "file") {
      c.f0.kind = F0Spec::Kind::File;
      c.f0.path = resolve(get_or<std::string>(f, "path", ""), base_dir);
    } else {
      throw ValidationError(kOp, "unknown f0 type '" + type + "'");
    }
  }

  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    c.grids.t_extent = get_or(g, "t_extent", c.grids.t_extent);
    c.grids.t_step = get_or(g, "t_step", c.grids.t_step);
    c.grids.freq_extent_factor = get_or(g, "freq_extent_factor", c.grids.freq_extent_factor);
    c.grids.freq_min_extent = get_or(g, "freq_min_extent", c.grids.freq_min_extent);
    c.grids.freq_step = get_or(g, "freq_step", c.grids.freq_step);
    c.grids.s_step = get_or(g, "s_step", c.grids.s_step);
    c.grids.dual_step = get_or(g, "dual_step", c.grids.dual_step);
    c.grids.dual_max = get_or(g, "dual_max", c.grids.dual_max);
  }
  if (j.contains("zeros")) {
    const auto& z = j.at("zeros");
    c.zero_radii = get_or(z, "radii", c.zero_radii);
    c.zero_points_per_radius = get_or(z, "points_per_radius", c.zero_points_per_radius);
  }
  if (j.contains("growth")) c.growth_radii = get_or(j.at("growth"), "radii", c.growth_radii);
  if (c.growth_radii.empty())
    for (int r = 10; r <= 200; r += 10) c.growth_radii.push_back(r);
  if (j.contains("smallset") && j.at("smallset").contains("resolution"))
    c.smallset_resolution = get_or(j.at("smallset"), "resolution", 0.0);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(kOp, "cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(kOp, std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, path.parent_path());
}

void validate(const ExperimentConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ValidationError(kOp, std::string(name) + " must be positive and finite");
  };
  if (!(c.beta > 0.0 && c.beta < 1.0 / 3.0)) throw ValidationError(kOp, "beta must lie in (0, 1/3)");
  if (!(c.q > 0.5)) throw ValidationError(kOp, "q must exceed 1/2");
  if (c.f0.kind == F0Spec::Kind::SynthSmooth && !(c.f0.q > 0.5))
    throw ValidationError(kOp, "f0 smoothness q must exceed 1/2");
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    positive(c.eps_list[i], "eps_list entries");
    if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
      throw ValidationError(kOp, "eps_list must be strictly decreasing");
  }
  if (c.eps) positive(*c.eps, "eps");
  positive(c.grids.t_extent, "grids.t_extent");
  positive(c.grids.t_step, "grids.t_step");
  positive(c.grids.freq_extent_factor, "grids.freq_extent_factor");
  positive(c.grids.freq_min_extent, "grids.freq_min_extent");
  positive(c.grids.freq_step, "grids.freq_step");
  positive(c.grids.s_step, "grids.s_step");
  positive(c.grids.dual_step, "grids.dual_step");
  positive(c.grids.dual_max, "grids.dual_max");
  if (c.kernel.extent) positive(*c.kernel.extent, "kernel.extent");
  switch (c.kernel.kind) {
    case KernelKind::Indicator:
      if (!(c.kernel.a < c.kernel.b)) throw ValidationError(kOp, "indicator needs a < b");
      break;
    case KernelKind::Gaussian:
      positive(c.kernel.scale, "kernel.scale");
      break;
    case KernelKind::TwoSidedExp:
      positive(c.kernel.rate, "kernel.rate");
      break;
    case KernelKind::File:
      if (c.kernel.path.empty()) throw ValidationError(kOp, "kernel.path is required");
      break;
  }
  if (c.f0.kind == F0Spec::Kind::File && c.f0.path.empty())
    throw ValidationError(kOp, "f0.path is required");
  for (double r : c.zero_radii) positive(r, "zeros.radii entries");
  if (c.zero_points_per_radius < 64.0)
    throw ValidationError(kOp, "zeros.points_per_radius must be at least 64");
  for (double r : c.growth_radii) positive(r, "growth.radii entries");
  if (c.smallset_resolution) positive(*c.smallset_resolution, "smallset.resolution");
}

}  // namespace deconv
