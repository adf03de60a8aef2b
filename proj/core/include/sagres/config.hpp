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

#ifndef SAGRES_CONFIG_HPP_
#define SAGRES_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sagres/nominal.hpp"
#include "sagres/plant.hpp"
#include "sagres/sag.hpp"

namespace sagres {

enum class Method { Frozen, ResidualFull, ResidualUnconstrained };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct ResidualConfig {
  std::uint64_t seed = 12345;
  int features = 64;
  double alpha_e = 0.2;
  double alpha_i = 0.05;
  double eta_fast0 = 5e-3;
  double eta_slow = 5e-4;
  double lambda_fast = 1e-3;
  double lambda_slow = 1e-5;
  double w_max = 50.0;
  bool include_position_error = true;
  // Velocity/position coupling and the channel map from tracking error to
  // the action-space teaching signal. Left empty they are derived from the
  // nominal controller's own linear law at setup.
  Vector lambda_track;
  Matrix error_map;
  Vector task_weights;
};

struct GateConfig {
  // eps/eps_j <= 0 means "derive from the action limits" (0.3 * ||limits||
  // and 0.5 * limit_j respectively).
  double eps = -1.0;
  Vector eps_j;
  double kappa = 0.2;
  double xi = 1e-8;
  double gamma_min = 0.0;
  double gamma_max = 1.0;
  double k_gamma = 1.0;
  bool gamma_clip_from_zero = false;
  double beta_min = 0.5;
  double beta_max = 2.0;
  double k_beta = 0.05;
  Vector e_bar;
  bool beta_decay = false;
  double b_max = 4.0;
  double rho_b = 0.99;
  double alpha_b = 0.1;
  double eps_bar = 0.5;
  double alpha_j = 0.02;
  double act_drop_frac = 0.1;  // activation threshold as a fraction of J*
  int act_steps = 20;
  bool plastic_when_inactive = false;
};

struct NominalSpec {
  ControllerKind kind = ControllerKind::PD;
  Vector kp;
  Vector kd;
  Vector action_limits;
  Vector lqr_q_diag;  // stage cost diagonals for the synthesized gain
  Vector lqr_r_diag;
  int lqr_iters = 10000;
  double lqr_tol = 1e-10;
};

struct EpisodeConfig {
  int horizon = 3000;
  int fault_step = 500;
  int calib_begin = 250;
  int calib_end = 500;  // exclusive
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  Method method = Method::ResidualFull;
  double delta_frac = 0.05;      // T_delta tolerance as a fraction of J*
  double ttr_frac = 0.5;
  double ssr_window_frac = 0.1;
};

struct ShiftConfig {
  bool enabled = false;
  ShiftSpec spec;
  // Inverts the named teaching-error channel from the fault step onward,
  // emulating a corrective pathway whose calibration the fault breaks.
  // -1 disables.
  int teach_flip_channel = -1;
};

struct ExperimentConfig {
  Plant plant;
  double dt = 0.01;
  Vector init_ball_q;     // half-widths of the initial-condition ball
  Vector init_ball_qdot;
  ReferenceConfig reference;
  RewardWeights reward_weights;
  double dist_bound_nominal = 2.0;  // validated nominal-only distance bound
  NominalSpec nominal;
  ResidualConfig residual;
  GateConfig gate;
  EpisodeConfig episode;
  ShiftConfig shift;
};

/// Fully-populated defaults for one plant.
ExperimentConfig default_config(PlantKind kind);

/// Parses and validates a JSON config file. Missing fields take the
/// per-plant defaults; unknown keys are rejected with their path.
ExperimentConfig parse_config(const std::string& path);

/// Same, from an already-loaded JSON text.
ExperimentConfig parse_config_text(const std::string& text);

/// Checks every cross-field invariant; throws ConfigError naming the field
/// and the violated constraint.
void validate(const ExperimentConfig& config);

/// Serializes a config with every field materialized. Parsing the result
/// reproduces the run exactly.
std::string config_to_json(const ExperimentConfig& config);

/// Sweep description: one shift family, a severity grid, and the number of
/// trials (seeds) per cell.
struct SweepConfig {
  ShiftFamily family = ShiftFamily::Mass;
  std::vector<double> severities;
  int trials = 20;
  std::vector<Method> methods = {Method::Frozen, Method::ResidualFull};
};

SweepConfig parse_sweep(const std::string& path);
SweepConfig parse_sweep_text(const std::string& text);

/// FNV-1a over the raw file bytes; stable across reruns of identical text.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace sagres

#endif  // SAGRES_CONFIG_HPP_
