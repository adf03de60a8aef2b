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

#include "sagres/plant.hpp"

#include <cmath>

#include "sagres/error.hpp"

namespace sagres {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

std::string to_string(ShiftFamily family) {
  switch (family) {
    case ShiftFamily::Actuator: return "actuator";
    case ShiftFamily::Mass: return "mass";
    case ShiftFamily::Friction: return "friction";
  }
  return "unknown";
}

ShiftFamily shift_family_from_string(const std::string& name) {
  if (name == "actuator") return ShiftFamily::Actuator;
  if (name == "mass") return ShiftFamily::Mass;
  if (name == "friction") return ShiftFamily::Friction;
  throw ConfigError("shift.family: unknown family '" + name +
                    "' (expected actuator, mass, or friction)");
}

std::string to_string(PlantKind kind) {
  switch (kind) {
    case PlantKind::Pendulum: return "pendulum";
    case PlantKind::CartPole: return "cartpole";
    case PlantKind::Unicycle: return "unicycle";
  }
  return "unknown";
}

PlantKind plant_kind_from_string(const std::string& name) {
  if (name == "pendulum") return PlantKind::Pendulum;
  if (name == "cartpole") return PlantKind::CartPole;
  if (name == "unicycle") return PlantKind::Unicycle;
  throw ConfigError("plant.kind: unknown plant '" + name +
                    "' (expected pendulum, cartpole, or unicycle)");
}

int Plant::position_dim() const {
  switch (kind) {
    case PlantKind::Pendulum: return 1;
    case PlantKind::CartPole: return 2;
    case PlantKind::Unicycle: return 3;
  }
  return 0;
}

int Plant::velocity_dim() const {
  switch (kind) {
    case PlantKind::Pendulum: return 1;
    case PlantKind::CartPole: return 2;
    case PlantKind::Unicycle: return 2;
  }
  return 0;
}

int Plant::action_dim() const {
  switch (kind) {
    case PlantKind::Pendulum: return 1;
    case PlantKind::CartPole: return 1;
    case PlantKind::Unicycle: return 2;
  }
  return 0;
}

Vector acceleration(const Plant& plant, const Vector& q, const Vector& qdot,
                    const Vector& action, const PlantParams& params) {
  switch (plant.kind) {
    case PlantKind::Pendulum: {
      // Angle measured from the upright vertical; the hanging rest position
      // is q = pi. Gravity pushes away from upright, so both q = 0 and
      // q = pi are fixed points with zero action.
      const auto& c = plant.pendulum;
      const double m = params.mass_scale * c.mass;
      const double inertia = m * c.length * c.length;
      const double torque = params.actuator_scale * action(0) -
                            params.friction * c.damping * qdot(0) +
                            m * c.gravity * c.length * std::sin(q(0));
      Vector acc(1);
      acc(0) = torque / inertia;
      return acc;
    }
    case PlantKind::CartPole: {
      // q = (cart position, pole angle from upright). Force acts on the
      // cart; the pole is a uniform rod of half-length l.
      const auto& c = plant.cartpole;
      const double mc = params.mass_scale * c.cart_mass;
      const double mp = params.mass_scale * c.pole_mass;
      const double total = mc + mp;
      const double l = c.pole_half_length;
      const double g = c.gravity;
      const double x_dot = qdot(0);
      const double th = q(1);
      const double th_dot = qdot(1);
      const double sin_th = std::sin(th);
      const double cos_th = std::cos(th);

      const double force =
          params.actuator_scale * action(0) - params.friction * c.cart_damping * x_dot;
      const double pivot_fric = params.friction * c.pivot_damping * th_dot;

      const double temp = (force + mp * l * th_dot * th_dot * sin_th) / total;
      const double th_acc =
          (g * sin_th - cos_th * temp - pivot_fric / (mp * l)) /
          (l * (4.0 / 3.0 - mp * cos_th * cos_th / total));
      const double x_acc = temp - mp * l * th_acc * cos_th / total;

      Vector acc(2);
      acc(0) = x_acc;
      acc(1) = th_acc;
      return acc;
    }
    case PlantKind::Unicycle: {
      // First-order body-velocity dynamics; pose is integrated kinematically
      // in step(). qdot = (forward speed v, yaw rate w).
      const auto& c = plant.unicycle;
      const double v = qdot(0);
      const double w = qdot(1);
      Vector acc(2);
      acc(0) = (params.actuator_scale * action(0) - params.friction * c.lin_damping * v) /
               (params.mass_scale * c.mass);
      acc(1) = (params.actuator_scale * action(1) - params.friction * c.ang_damping * w) /
               (params.mass_scale * c.inertia);
      return acc;
    }
  }
  throw ConfigError("plant.kind: unhandled plant kind");
}

PlantState step(const Plant& plant, const PlantState& state,
                const Vector& action, const PlantParams& params, double dt) {
  if (!all_finite(state.q) || !all_finite(state.qdot) || !all_finite(action)) {
    throw NumericalError("numerical blowup: non-finite state or action", state.t);
  }

  PlantState next;
  next.t = state.t + 1;

  const Vector acc = acceleration(plant, state.q, state.qdot, action, params);
  next.qdot = state.qdot + dt * acc;

  if (plant.kind == PlantKind::Unicycle) {
    // Pose integration with the updated body velocities.
    const double v = next.qdot(0);
    const double w = next.qdot(1);
    const double heading = state.q(2);
    next.q = state.q;
    next.q(0) += dt * v * std::cos(heading);
    next.q(1) += dt * v * std::sin(heading);
    next.q(2) += dt * w;
  } else {
    next.q = state.q + dt * next.qdot;
  }

  if (!all_finite(next.q) || !all_finite(next.qdot)) {
    throw NumericalError("numerical blowup: non-finite successor state", state.t);
  }
  return next;
}

PlantParams apply_shift(const PlantParams& params, const ShiftSpec& shift) {
  if (shift.severity <= 0.0) {
    throw ConfigError("shift.severity: must be > 0");
  }
  PlantParams out = params;
  switch (shift.family) {
    case ShiftFamily::Actuator: out.actuator_scale *= shift.severity; break;
    case ShiftFamily::Mass: out.mass_scale *= shift.severity; break;
    case ShiftFamily::Friction: out.friction *= shift.severity; break;
  }
  return out;
}

double reward(const RewardWeights& weights, const PlantState& state,
              const Vector& action, const ReferenceSignal& ref) {
  double err_sq = 0.0;
  for (int i = 0; i < state.q.size(); ++i) {
    const double e = weights.w_q(i) * (state.q(i) - ref.q_ref(i));
    err_sq += e * e;
  }
  for (int i = 0; i < state.qdot.size(); ++i) {
    const double e = weights.w_qdot(i) * (state.qdot(i) - ref.qdot_ref(i));
    err_sq += e * e;
  }
  return std::exp(-err_sq) - weights.action_cost * action.squaredNorm();
}

double reference_distance(const RewardWeights& weights,
                          const PlantState& state, const ReferenceSignal& ref) {
  double err_sq = 0.0;
  for (int i = 0; i < state.q.size(); ++i) {
    const double e = weights.w_q(i) * (state.q(i) - ref.q_ref(i));
    err_sq += e * e;
  }
  for (int i = 0; i < state.qdot.size(); ++i) {
    const double e = weights.w_qdot(i) * (state.qdot(i) - ref.qdot_ref(i));
    err_sq += e * e;
  }
  return std::sqrt(err_sq);
}

ReferenceSignal reference(const ReferenceConfig& config, int t) {
  ReferenceSignal out;
  out.q_ref = config.offset_q;
  out.qdot_ref = config.offset_qdot;
  if (config.kind == ReferenceKind::Constant) {
    return out;
  }

  // Integer modulo keeps the phase exactly periodic.
  const int period = config.period_steps;
  const double phase = kTwoPi * static_cast<double>(t % period) /
                       static_cast<double>(period);
  const double omega = kTwoPi / (static_cast<double>(period) * config.dt);
  const double s = std::sin(phase);
  const double cs = std::cos(phase);

  for (int i = 0; i < out.q_ref.size(); ++i) {
    out.q_ref(i) += config.amp_q(i) * s;
  }
  const int n_qd = static_cast<int>(out.qdot_ref.size());
  for (int i = 0; i < n_qd; ++i) {
    // Velocity reference follows the position sinusoid's derivative where a
    // position amplitude exists on the paired coordinate.
    if (i < config.amp_q.size()) {
      out.qdot_ref(i) += config.amp_q(i) * omega * cs;
    }
    out.qdot_ref(i) += config.amp_qdot(i) * s;
  }
  return out;
}

}  // namespace sagres
