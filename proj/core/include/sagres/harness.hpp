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

#ifndef SAGRES_HARNESS_HPP_
#define SAGRES_HARNESS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sagres/config.hpp"
#include "sagres/metrics.hpp"
#include "sagres/residual.hpp"

namespace sagres {

/// Component toggles for the ablation variants. Everything on is the full
/// method.
struct AblationFlags {
  bool dual_head = true;
  bool dir_align = true;
  bool temporal_filter = true;
  bool nuclei_gate = true;
  bool boost = true;
};

/// Immutable per-experiment state: the frozen controller, the fixed
/// expansion basis, and every derived constant. Shared by all episodes.
struct Setup {
  ExperimentConfig cfg;  // with derived fields materialized
  NominalController controller;
  ExpansionBasis basis;
  TrackingWeights tracking;
  Matrix error_map;  // action_dim x velocity_dim teaching-signal projection
  GateParams gate;   // act_drop is set per episode once J* is calibrated
  int input_dim = 0;
};

/// Builds the frozen controller (synthesizing the LQR gain where needed),
/// seeds the basis, and materializes derived defaults into cfg.
Setup build_setup(const ExperimentConfig& config);

/// Mean of the smoothed performance over [begin, end).
double calibrate_nominal_level(const std::vector<double>& j_bar_history,
                               int begin, int end);

struct EpisodeOptions {
  Method method = Method::ResidualFull;
  AblationFlags flags;
  std::optional<ShiftSpec> shift;  // overrides the config's shift
  int teach_flip_channel = -1;
};

struct EpisodeResult {
  EpisodeTrace trace;
  RecoveryMetrics metrics;
  double j_star = 0.0;
};

/// One closed-loop rollout: nominal action, residual pipeline, gate,
/// plant step, reward smoothing, activation and gain updates, plasticity.
/// Deterministic per seed.
EpisodeResult run_episode(const Setup& setup, std::uint64_t seed,
                          const EpisodeOptions& options);

/// Uses the method and shift from the config.
EpisodeResult run_episode(const Setup& setup, std::uint64_t seed);

struct SweepRow {
  ShiftFamily family;
  double severity;
  Method method;
  std::uint64_t seed;
  RecoveryMetrics metrics;
};

/// severity x method x seed grid of episodes, run concurrently and merged
/// in a fixed key order. Trial k uses seed k+1.
std::vector<SweepRow> severity_sweep(const ExperimentConfig& config,
                                     const SweepConfig& sweep);

struct AblationRow {
  std::string variant;
  std::uint64_t seed;
  RecoveryMetrics metrics;
};

/// Canonical variant names, in emission order.
const std::vector<std::string>& ablation_variants();

AblationFlags ablation_flags_for(const std::string& variant);

/// Runs every ablation variant over the config's seeds and shift.
std::vector<AblationRow> ablation_suite(const ExperimentConfig& config);

/// Episode-level parallelism helper; fn(i) must only touch slot i of its
/// output. Rethrows the first worker exception.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace sagres

#endif  // SAGRES_HARNESS_HPP_
