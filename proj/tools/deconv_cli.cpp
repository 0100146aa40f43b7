// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include "deconv/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tikhonov deconvolution experiments"};
  app.require_subcommand(1);
  deconv::CommandOptions opts;
  std::optional<double> eps;
  for (const auto& name : deconv::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "experiment configuration (JSON)")->required();
    sub->add_option("--out", opts.out, "output directory")->required();
    if (name == "deconvolve" || name == "smallset")
      sub->add_option("--eps", eps, "data error level");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : deconv::kExitValidation;
  }
  opts.eps = eps;
  return deconv::run_command(app.get_subcommands().front()->get_name(), opts);
}
