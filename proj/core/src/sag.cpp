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

#include "sagres/sag.hpp"

#include <algorithm>
#include <cmath>

namespace sagres {

GateState make_gate_state(int action_dim, const GateParams& params) {
  GateState gs;
  gs.gamma = params.gamma_min;
  gs.beta = Vector::Ones(action_dim);
  return gs;
}

double smooth_performance(double j_bar, double r, double alpha_j) {
  if (std::isnan(j_bar)) {
    return r;  // first observation seeds the average
  }
  return (1.0 - alpha_j) * j_bar + alpha_j * r;
}

void update_activation(GateState& gs, const GateParams& params) {
  if (std::isnan(gs.j_star) || std::isnan(gs.j_bar)) {
    return;
  }
  if (gs.j_bar < gs.j_star - params.act_drop) {
    ++gs.drop_counter;
  } else {
    gs.drop_counter = 0;
  }
  if (!gs.active && gs.drop_counter >= params.act_steps) {
    gs.active = true;
    gs.j_min = gs.j_bar;
  }
  if (gs.active) {
    gs.j_min = std::min(gs.j_min, gs.j_bar);
  }
}

double cosine_alignment(const Vector& a_nom, const Vector& a_res, double xi) {
  return a_nom.dot(a_res) / (a_nom.norm() * a_res.norm() + xi);
}

Vector directional_gate(const Vector& u, double c, double kappa) {
  if (c >= 0.0) {
    return u;
  }
  return kappa * u;
}

double authority_gain(const GateState& gs, const GateParams& params) {
  const double raw = params.gamma_min +
                     params.k_gamma * (gs.j_star - gs.j_bar) /
                         (gs.j_star - gs.j_min + params.xi);
  const double lo = params.gamma_clip_from_zero ? 0.0 : params.gamma_min;
  return std::clamp(raw, lo, params.gamma_max);
}

void per_joint_gain_update(Vector& beta, const Vector& e,
                           const GateParams& params) {
  for (int j = 0; j < beta.size(); ++j) {
    if (std::abs(e(j)) > params.e_bar(j)) {
      beta(j) = std::clamp(beta(j) + params.k_beta, params.beta_min,
                           params.beta_max);
    } else if (params.beta_decay) {
      beta(j) = std::clamp(beta(j) - params.k_beta, params.beta_min,
                           params.beta_max);
    }
  }
}

double boost_update(double b, double eps_t, const GateParams& params) {
  const double raw =
      params.rho_b * b + (eps_t > params.eps_bar ? params.alpha_b : 0.0);
  return std::clamp(raw, 0.0, params.b_max);
}

double effective_learning_rate(double eta_fast0, double b) {
  return eta_fast0 * (1.0 + b);
}

Vector clip_authority(const Vector& u, const GateParams& params) {
  Vector out = u;
  for (int j = 0; j < out.size(); ++j) {
    out(j) = std::clamp(out(j), -params.eps_j(j), params.eps_j(j));
  }
  const double norm = out.norm();
  if (norm > params.eps) {
    out *= params.eps / norm;
  }
  return out;
}

GateOutput apply_gate(const Vector& a_nom, const Vector& a_res, GateState& gs,
                      const GateParams& params, const GateOptions& options) {
  GateOutput out;
  out.active = gs.active;
  if (!gs.active) {
    // Dormant channel: the closed loop is exactly the nominal one.
    out.u = Vector::Zero(a_nom.size());
    out.gamma = gs.gamma;
    return out;
  }

  double gamma;
  Vector scaled;
  if (options.nuclei_gate) {
    gamma = authority_gain(gs, params);
    scaled = gamma * gs.beta.cwiseProduct(a_res).eval();
  } else {
    gamma = params.gamma_max;
    scaled = gamma * a_res;
  }
  gs.gamma = gamma;
  out.gamma = gamma;

  // Alignment is measured on the correction actually being injected; the
  // positive scaling above cannot change its sign structure.
  out.c = cosine_alignment(a_nom, scaled, params.xi);
  Vector u = scaled;
  if (options.constrain) {
    if (options.dir_align) {
      u = directional_gate(u, out.c, params.kappa);
    }
    u = clip_authority(u, params);
  }
  out.u = u;
  out.u_norm = u.norm();
  return out;
}

}  // namespace sagres
