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

#ifndef SAGRES_COMMANDS_HPP_
#define SAGRES_COMMANDS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "sagres/config.hpp"

namespace sagres {

inline constexpr const char* kToolVersion = "sagres 0.1.0";

// Exit codes: 0 success, 1 config error, 2 numerical blowup, 3 I/O failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBlowup = 2;
inline constexpr int kExitIo = 3;

struct CommandOverrides {
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::string> method;
  bool quiet = false;
};

/// Runs the configured episodes and writes trace_<seed>.csv per seed,
/// metrics.json, and manifest.json into out_dir.
int cmd_run(const std::string& config_path, const std::string& out_dir,
            const CommandOverrides& overrides = {});

/// Runs the severity grid and writes sweep_long.csv, sweep_agg.csv, and
/// manifest.json.
int cmd_sweep(const std::string& config_path, const std::string& sweep_path,
              const std::string& out_dir, const CommandOverrides& overrides = {});

/// Runs every ablation variant over shared seeds and writes ablation.csv
/// and manifest.json.
int cmd_ablate(const std::string& config_path, const std::string& out_dir,
               const CommandOverrides& overrides = {});

/// Parses and validates only; prints the resolved config unless quiet.
int cmd_validate(const std::string& config_path,
                 const CommandOverrides& overrides = {});

}  // namespace sagres

#endif  // SAGRES_COMMANDS_HPP_
