// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deconv/fixtures.hpp"

namespace deconv {

struct F0Spec {
  enum class Kind { SynthSmooth, File } kind = Kind::SynthSmooth;
  double q = 1.0;
  std::string path;
};

struct GridConfig {
  double t_extent = 36.0;
  double t_step = 0.01;
  double freq_extent_factor = 4.0;
  double freq_min_extent = 200.0;
  double freq_step = 0.05;
  double s_step = 0.01;
  double dual_step = 0.05;
  double dual_max = 50.0;
};

struct ExperimentConfig {
  KernelSpec kernel;
  F0Spec f0;
  std::vector<double> eps_list;
  double beta = 0.2;
  double q = 1.0;
  std::uint64_t seed = 0;
  bool noise_free = false;
  GridConfig grids;
  std::optional<double> eps;  // single-eps commands
  std::vector<double> zero_radii = {10.0, 25.0, 50.0, 75.0, 100.0};
  double zero_points_per_radius = 64.0;
  std::vector<double> growth_radii;  // default 10, 20, ..., 200
  std::optional<double> smallset_resolution;
  nlohmann::json source;  // the parsed document, echoed into manifests
};

/// Parses and validates; every hypothesis violation is a ValidationError
/// raised before any computation. Relative file paths resolve against base_dir.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

void validate(const ExperimentConfig& c);

}  // namespace deconv
