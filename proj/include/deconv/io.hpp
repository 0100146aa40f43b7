// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deconv/entire_diagnostics.hpp"
#include "deconv/grid_signal.hpp"
#include "deconv/regularization.hpp"
#include "deconv/small_sets.hpp"
#include "deconv/tail_profile.hpp"

namespace deconv {

/// Fixed 17-significant-digit rendering; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

std::string signal_csv(const SampledSignal& s);
std::string transform_csv(const TransformSamples& ts);
std::string profile_csv(const TailProfile& p);
std::string dual_csv(const DualProfile& d);
std::string sweep_csv(const SweepSummary& s);
std::string zero_csv(const ZeroCountReport& r);

/// Parses `t,re,im`; rejects files whose abscissae are not uniform.
SampledSignal read_signal_csv(const std::filesystem::path& path);
SampledSignal parse_signal_csv(const std::string& text, const std::string& origin);

nlohmann::json to_json(const RegularizationPlan& p);
nlohmann::json to_json(const ErrorDecomposition& d);
nlohmann::json to_json(const SmallSetReport& r);
nlohmann::json to_json(const ZeroCountReport& r);
nlohmann::json to_json(const GrowthEstimate& g);

}  // namespace deconv
