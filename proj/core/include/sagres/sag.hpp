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

#ifndef SAGRES_SAG_HPP_
#define SAGRES_SAG_HPP_

#include <limits>

#include "sagres/plant.hpp"

namespace sagres {

/// Gate constants. The gate bounds residual magnitude, attenuates
/// corrections that oppose the nominal action, activates only after
/// sustained performance degradation, and scales authority with the depth
/// of the degradation.
struct GateParams {
  double eps = 1.0;          // global L2 bound on the injected correction
  Vector eps_j;              // per-channel bounds
  double kappa = 0.2;        // attenuation when opposing the nominal, [0,1)
  double xi = 1e-8;          // numerical floor
  double gamma_min = 0.0;
  double gamma_max = 1.0;
  double k_gamma = 1.0;
  bool gamma_clip_from_zero = false;  // clip range [0, gamma_max] variant
  double beta_min = 0.5;
  double beta_max = 2.0;
  double k_beta = 0.05;
  Vector e_bar;              // per-channel error thresholds for beta growth
  bool beta_decay = false;   // optional contraction toward beta_min
  double b_max = 4.0;
  double rho_b = 0.99;
  double alpha_b = 0.1;
  double eps_bar = 0.5;      // task-error threshold for the boost
  double alpha_j = 0.02;     // performance smoothing rate
  double act_drop = 0.1;     // absolute drop below J* that counts as degraded
  int act_steps = 20;        // consecutive degraded steps before activation
};

/// Mutable gate state owned by a single episode loop.
struct GateState {
  double gamma = 0.0;
  Vector beta;               // per-channel gains, start at 1
  double b = 0.0;            // plasticity boost
  double j_bar = std::numeric_limits<double>::quiet_NaN();
  double j_star = std::numeric_limits<double>::quiet_NaN();
  double j_min = std::numeric_limits<double>::infinity();
  bool active = false;
  int drop_counter = 0;
};

GateState make_gate_state(int action_dim, const GateParams& params);

/// One EMA step of the smoothed performance signal.
double smooth_performance(double j_bar, double r, double alpha_j);

/// Counts consecutive steps with j_bar < j_star - act_drop; latches the
/// activation flag after act_steps of them. While active, tracks the
/// running minimum of j_bar. No-op until j_star has been calibrated.
void update_activation(GateState& gs, const GateParams& params);

/// Cosine similarity with a floor on the denominator, so a zero residual
/// yields 0 rather than a division by zero.
double cosine_alignment(const Vector& a_nom, const Vector& a_res, double xi);

/// Passes u unchanged when c >= 0, scales it by kappa when c < 0.
Vector directional_gate(const Vector& u, double c, double kappa);

/// gamma = clip(gamma_min + k_gamma (J* - Jbar)/(J* - Jmin + xi)).
/// The lower clip is gamma_min by default; gamma_clip_from_zero selects the
/// [0, gamma_max] variant.
double authority_gain(const GateState& gs, const GateParams& params);

/// beta_j grows by k_beta while |e_j| exceeds its threshold, clipped to
/// [beta_min, beta_max]. With beta_decay, channels at or below threshold
/// contract toward beta_min instead of holding.
void per_joint_gain_update(Vector& beta, const Vector& e,
                           const GateParams& params);

/// b <- clip_[0, b_max](rho_b b + alpha_b 1{eps_t > eps_bar}).
double boost_update(double b, double eps_t, const GateParams& params);

/// eta_f = eta_f0 (1 + b).
double effective_learning_rate(double eta_fast0, double b);

/// Component clamp to [-eps_j, eps_j], then a norm projection onto the
/// eps ball. The result satisfies both bounds.
Vector clip_authority(const Vector& u, const GateParams& params);

struct GateOptions {
  bool constrain = true;       // clip + directional gate (off: diagnostic mode)
  bool dir_align = true;       // directional coherence mechanism
  bool nuclei_gate = true;     // adaptive gamma/beta (off: gamma_max, beta 1)
};

struct GateOutput {
  Vector u;          // injected correction
  double c = 0.0;    // alignment of the scaled correction with the nominal
  double gamma = 0.0;
  double u_norm = 0.0;
  bool active = false;
};

/// Full injection pipeline: activation check, authority scaling,
/// directional gating, magnitude clipping. Updates gs.gamma.
GateOutput apply_gate(const Vector& a_nom, const Vector& a_res, GateState& gs,
                      const GateParams& params,
                      const GateOptions& options = GateOptions{});

}  // namespace sagres

#endif  // SAGRES_SAG_HPP_
