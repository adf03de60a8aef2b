// Copyright 2026 The Sagres Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sagres/commands.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out = "out";
  std::vector<std::uint64_t> seeds;
  std::string method;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out = true) {
  cmd->add_option("--config", args.config, "Experiment config (JSON)")
      ->required();
  if (with_out) {
    cmd->add_option("--out", args.out, "Output directory");
  }
  cmd->add_option("--seeds", args.seeds, "Override the config's seed list");
  cmd->add_option("--method", args.method,
                  "Override the method (frozen, residual_full, residual_unconstrained)");
  cmd->add_flag("--quiet", args.quiet, "Suppress progress output");
}

sagres::CommandOverrides to_overrides(const CommonArgs& args) {
  sagres::CommandOverrides overrides;
  if (!args.seeds.empty()) overrides.seeds = args.seeds;
  if (!args.method.empty()) overrides.method = args.method;
  overrides.quiet = args.quiet;
  return overrides;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded gated residual adaptation around frozen controllers"};
  app.set_version_flag("--version", sagres::kToolVersion);
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, ablate_args, validate_args;
  std::string sweep_path;

  CLI::App* run = app.add_subcommand("run", "Run the configured episodes");
  add_common(run, run_args);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a severity sweep");
  add_common(sweep, sweep_args);
  sweep->add_option("--sweep", sweep_path, "Sweep spec (JSON)")->required();

  CLI::App* ablate = app.add_subcommand("ablate", "Run the ablation variants");
  add_common(ablate, ablate_args);

  CLI::App* validate = app.add_subcommand("validate", "Parse and validate only");
  add_common(validate, validate_args, /*with_out=*/false);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return sagres::cmd_run(run_args.config, run_args.out, to_overrides(run_args));
  }
  if (sweep->parsed()) {
    return sagres::cmd_sweep(sweep_args.config, sweep_path, sweep_args.out,
                             to_overrides(sweep_args));
  }
  if (ablate->parsed()) {
    return sagres::cmd_ablate(ablate_args.config, ablate_args.out,
                              to_overrides(ablate_args));
  }
  return sagres::cmd_validate(validate_args.config, to_overrides(validate_args));
}
