// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace deconv {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitValidation = 2,
  kExitComputation = 3,
  kExitThreshold = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<double> eps;
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs one command, writing outputs, manifest.json and (on failure)
/// error.json under options.out. Returns the process exit code.
int run_command(const std::string& name, const CommandOptions& options);

}  // namespace deconv
