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

#ifndef SAGRES_NOMINAL_HPP_
#define SAGRES_NOMINAL_HPP_

#include "sagres/plant.hpp"

namespace sagres {

enum class ControllerKind { PD, LQR };

/// Frozen stabilizing controller. Gains are set once at construction and
/// never mutated afterwards; every output is saturated to action_limits.
struct NominalController {
  ControllerKind kind = ControllerKind::PD;
  // PD: per-channel gains. kp(j) acts on the position error of DOF j when
  // that DOF exists, kd(j) on the velocity error of velocity DOF j.
  Vector kp;
  Vector kd;
  // LQR: u = -K (s - s_ref) with s = (q; qdot).
  Matrix K;
  Vector action_limits;
};

/// Discrete-time linear model with quadratic stage costs.
struct LinearModel {
  Matrix A;
  Matrix B;
  Matrix Q;  // symmetric PSD
  Matrix R;  // symmetric PD
};

/// Solves the discrete algebraic Riccati equation by fixed-point iteration
/// of the value recursion and returns the steady-state feedback gain
/// K = (R + B'PB)^-1 B'PA. Throws if the residual does not fall below tol
/// within iters sweeps.
Matrix lqr_gain(const LinearModel& model, int iters, double tol);

/// Deterministic, stateless control law; saturates to action_limits.
Vector nominal_action(const NominalController& ctrl, const PlantState& state,
                      const ReferenceSignal& ref);

/// Finite-difference linearization of the one-step map around
/// (q_eq, qdot_eq, u = 0) under the given parameters.
LinearModel linearize_step_map(const Plant& plant, const PlantParams& params,
                               const Vector& q_eq, const Vector& qdot_eq,
                               double dt, const Matrix& Q, const Matrix& R);

}  // namespace sagres

#endif  // SAGRES_NOMINAL_HPP_
