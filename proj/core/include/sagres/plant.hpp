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

#ifndef SAGRES_PLANT_HPP_
#define SAGRES_PLANT_HPP_

#include <Eigen/Dense>
#include <string>

namespace sagres {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Generalized positions/velocities plus the current step index.
/// Dimensions are fixed per plant: pendulum 1/1, cart-pole 2/2,
/// unicycle 3 pose / 2 velocity.
struct PlantState {
  Vector q;
  Vector qdot;
  int t = 0;
};

/// Multiplicative scalings of the plant's physical parameters.
/// The nominal value is all ones; base constants live in the Plant itself.
struct PlantParams {
  double actuator_scale = 1.0;
  double mass_scale = 1.0;
  double friction = 1.0;
};

enum class ShiftFamily { Actuator, Mass, Friction };

/// One abrupt, sustained parameter change injected mid-episode.
struct ShiftSpec {
  ShiftFamily family = ShiftFamily::Mass;
  double severity = 1.0;
  int fault_step = 0;
};

std::string to_string(ShiftFamily family);
ShiftFamily shift_family_from_string(const std::string& name);

/// Target positions/velocities the controller tracks at one step.
struct ReferenceSignal {
  Vector q_ref;
  Vector qdot_ref;
};

enum class PlantKind { Pendulum, CartPole, Unicycle };

std::string to_string(PlantKind kind);
PlantKind plant_kind_from_string(const std::string& name);

struct PendulumConstants {
  double mass = 1.0;          // kg
  double length = 0.5;        // m, pivot to center of mass
  double gravity = 9.81;      // m/s^2
  double damping = 0.15;      // N*m*s/rad, viscous
};

struct CartPoleConstants {
  double cart_mass = 1.0;        // kg
  double pole_mass = 0.1;        // kg
  double pole_half_length = 0.5; // m
  double gravity = 9.81;         // m/s^2
  double cart_damping = 0.1;     // N*s/m, viscous on the cart
  double pivot_damping = 0.002;  // N*m*s/rad, viscous at the pivot
};

struct UnicycleConstants {
  double mass = 5.0;          // kg
  double inertia = 0.1;       // kg*m^2, about the vertical axis
  double lin_damping = 1.2;   // N*s/m
  double ang_damping = 0.3;   // N*m*s/rad
};

/// Plant selection plus its base physical constants. PlantParams scale
/// these multiplicatively; the constants themselves never change mid-run.
struct Plant {
  PlantKind kind = PlantKind::Pendulum;
  PendulumConstants pendulum;
  CartPoleConstants cartpole;
  UnicycleConstants unicycle;

  int position_dim() const;
  int velocity_dim() const;
  int action_dim() const;
};

/// Continuous-time accelerations qddot(q, qdot, u) with the parameter
/// scalings applied. The actuator scaling multiplies the total commanded
/// action before it reaches the dynamics.
Vector acceleration(const Plant& plant, const Vector& q, const Vector& qdot,
                    const Vector& action, const PlantParams& params);

/// One semi-implicit Euler step: velocities first, then positions with the
/// updated velocities. Deterministic; throws NumericalError on non-finite
/// inputs or outputs.
PlantState step(const Plant& plant, const PlantState& state,
                const Vector& action, const PlantParams& params, double dt);

/// Multiplies the targeted family's scaling by the shift severity.
/// Exactly one field changes.
PlantParams apply_shift(const PlantParams& params, const ShiftSpec& shift);

/// Per-component weights on tracking error, plus a quadratic action cost.
struct RewardWeights {
  Vector w_q;
  Vector w_qdot;
  double action_cost = 0.001;
};

/// exp(-||weighted tracking error||^2) - action_cost * ||action||^2.
/// Bounded above by 1, attained exactly on-reference with zero action.
double reward(const RewardWeights& weights, const PlantState& state,
              const Vector& action, const ReferenceSignal& ref);

/// Euclidean norm of the same weighted tracking error the reward uses.
double reference_distance(const RewardWeights& weights,
                          const PlantState& state, const ReferenceSignal& ref);

enum class ReferenceKind { Constant, Sine };

/// Setpoint or sinusoidal reference generator. Sine references are phased
/// by the integer step modulo the period, so outputs repeat bit-exactly.
struct ReferenceConfig {
  ReferenceKind kind = ReferenceKind::Constant;
  Vector offset_q;
  Vector offset_qdot;
  Vector amp_q;       // position amplitude; velocity follows the derivative
  Vector amp_qdot;    // direct velocity amplitude (velocity-command plants)
  int period_steps = 200;
  double dt = 0.01;
};

ReferenceSignal reference(const ReferenceConfig& config, int t);

}  // namespace sagres

#endif  // SAGRES_PLANT_HPP_
