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

#ifndef SAGRES_IO_HPP_
#define SAGRES_IO_HPP_

#include <string>
#include <vector>

#include "sagres/harness.hpp"
#include "sagres/metrics.hpp"

namespace sagres {

/// 9 significant digits, locale independent. All emitted floats go through
/// this so reruns diff clean.
std::string format_double(double value);

/// Trace CSV: step, reward, J_bar, u_norm, c, gamma, b, eta_f, active,
/// dist_to_ref.
std::string trace_to_csv(const EpisodeTrace& trace);

/// Long-format sweep CSV: family, severity, method, seed, metric, value.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Aggregated sweep CSV: one row per (family, severity, method, metric)
/// with mean, std, median, censored count.
std::string sweep_aggregate_to_csv(const std::vector<SweepRow>& rows);

/// Ablation CSV: variant x metric summary over shared seeds.
std::string ablation_to_csv(const std::vector<AblationRow>& rows);

/// Metric names in emission order: t_delta, ttr50, auc, ssr, total_return.
const std::vector<std::string>& metric_names();

double metric_value(const RecoveryMetrics& m, const std::string& name);

/// Per-seed metrics plus the aggregate, as a JSON document.
std::string metrics_to_json(const std::vector<std::uint64_t>& seeds,
                            const std::vector<EpisodeResult>& results);

struct ManifestInfo {
  std::uint64_t config_hash = 0;
  std::vector<std::uint64_t> seeds;
  std::string tool_version;
  std::vector<std::string> output_paths;
  std::vector<double> episode_seconds;
  std::string resolved_config_json;  // reproduces the run when fed back
};

std::string manifest_to_json(const ManifestInfo& info);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace sagres

#endif  // SAGRES_IO_HPP_
