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

#ifndef SAGRES_RESIDUAL_HPP_
#define SAGRES_RESIDUAL_HPP_

#include <cstdint>

#include "sagres/plant.hpp"

namespace sagres {

/// Fixed random expansion. V is seeded once and never adapted; only the
/// downstream readout weights learn.
struct ExpansionBasis {
  Matrix V;  // p x m
};

/// V entries are i.i.d. Gaussian with scale 1/sqrt(m).
ExpansionBasis make_basis(int features, int input_dim, std::uint64_t seed);

/// h = tanh(V x). Every entry lies in (-1, 1).
Vector encode(const ExpansionBasis& basis, const Vector& x);

/// Paired exponential traces whose difference band-pass filters the
/// features: fast minus slow emphasizes transients and forgets constants.
struct TracePair {
  Vector phi_e;
  Vector phi_i;
  double alpha_e = 0.2;   // fast rate
  double alpha_i = 0.05;  // slow rate; 0 < alpha_i < alpha_e < 1
};

TracePair make_traces(int features, double alpha_e, double alpha_i);

/// Advances both traces one step and returns phi = phi_e - phi_i.
Vector update_traces(TracePair& traces, const Vector& h);

/// Two linear readouts sharing the features. The fast head learns and
/// forgets quickly; the slow head consolidates what persists.
struct ResidualHeads {
  Matrix w_fast;  // d x p
  Matrix w_slow;  // d x p
  double eta_fast0 = 5e-3;
  double eta_slow = 5e-4;
  double lambda_fast = 1e-3;
  double lambda_slow = 1e-5;
  double w_max = 50.0;  // Frobenius cap, overflow guard
};

ResidualHeads make_heads(int action_dim, int features, double eta_fast0,
                         double eta_slow, double lambda_fast,
                         double lambda_slow, double w_max);

/// a_res = (w_fast + w_slow) phi.
Vector residual_output(const ResidualHeads& heads, const Vector& phi);

/// Diagonal velocity/position coupling for the tracking error, plus the
/// weights of the scalar task-level error.
struct TrackingWeights {
  Vector lambda;        // per velocity DOF, >= 0, units 1/s
  Vector task_weights;  // per velocity DOF, >= 0
};

/// e_i = (qdot_ref_i - qdot_i) + lambda_i (q_ref_i - q_i), with the position
/// term dropped where no paired position DOF exists.
Vector tracking_error(const PlantState& state, const ReferenceSignal& ref,
                      const TrackingWeights& weights);

/// Scalar degradation proxy: sum_i task_weights_i * |e_i|.
double task_error(const PlantState& state, const ReferenceSignal& ref,
                  const TrackingWeights& weights);

/// W <- (1 - lambda) W + eta * e phi^T, then rescaled onto the Frobenius
/// ball of radius w_max. Throws NumericalError (with the step) if the
/// update produces non-finite weights.
void plasticity_update(Matrix& W, const Vector& e, const Vector& phi,
                       double eta, double lambda, double w_max, int step);

/// Residual input x: position error (optional), velocity error, and the
/// reference velocity. No privileged disturbance information.
Vector residual_input(const PlantState& state, const ReferenceSignal& ref,
                      bool include_position_error);

int residual_input_dim(int position_dim, int velocity_dim,
                       bool include_position_error);

}  // namespace sagres

#endif  // SAGRES_RESIDUAL_HPP_
