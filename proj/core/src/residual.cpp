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

#include "sagres/residual.hpp"

#include <cmath>
#include <random>

#include "sagres/error.hpp"

namespace sagres {

ExpansionBasis make_basis(int features, int input_dim, std::uint64_t seed) {
  if (features < 1 || input_dim < 1) {
    throw ConfigError("residual.features/input_dim: must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(input_dim)));
  ExpansionBasis basis;
  basis.V.resize(features, input_dim);
  for (int i = 0; i < features; ++i) {
    for (int j = 0; j < input_dim; ++j) {
      basis.V(i, j) = gauss(rng);
    }
  }
  return basis;
}

Vector encode(const ExpansionBasis& basis, const Vector& x) {
  if (x.size() != basis.V.cols()) {
    throw ConfigError("residual input dimension mismatch");
  }
  return (basis.V * x).array().tanh().matrix();
}

TracePair make_traces(int features, double alpha_e, double alpha_i) {
  TracePair traces;
  traces.phi_e = Vector::Zero(features);
  traces.phi_i = Vector::Zero(features);
  traces.alpha_e = alpha_e;
  traces.alpha_i = alpha_i;
  return traces;
}

Vector update_traces(TracePair& traces, const Vector& h) {
  traces.phi_e = (1.0 - traces.alpha_e) * traces.phi_e + traces.alpha_e * h;
  traces.phi_i = (1.0 - traces.alpha_i) * traces.phi_i + traces.alpha_i * h;
  return traces.phi_e - traces.phi_i;
}

ResidualHeads make_heads(int action_dim, int features, double eta_fast0,
                         double eta_slow, double lambda_fast,
                         double lambda_slow, double w_max) {
  ResidualHeads heads;
  heads.w_fast = Matrix::Zero(action_dim, features);
  heads.w_slow = Matrix::Zero(action_dim, features);
  heads.eta_fast0 = eta_fast0;
  heads.eta_slow = eta_slow;
  heads.lambda_fast = lambda_fast;
  heads.lambda_slow = lambda_slow;
  heads.w_max = w_max;
  return heads;
}

Vector residual_output(const ResidualHeads& heads, const Vector& phi) {
  return heads.w_fast * phi + heads.w_slow * phi;
}

Vector tracking_error(const PlantState& state, const ReferenceSignal& ref,
                      const TrackingWeights& weights) {
  const int n = static_cast<int>(state.qdot.size());
  Vector e(n);
  for (int i = 0; i < n; ++i) {
    e(i) = ref.qdot_ref(i) - state.qdot(i);
    if (i < state.q.size()) {
      e(i) += weights.lambda(i) * (ref.q_ref(i) - state.q(i));
    }
  }
  return e;
}

double task_error(const PlantState& state, const ReferenceSignal& ref,
                  const TrackingWeights& weights) {
  const Vector e = tracking_error(state, ref, weights);
  double eps = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    eps += weights.task_weights(i) * std::abs(e(i));
  }
  return eps;
}

void plasticity_update(Matrix& W, const Vector& e, const Vector& phi,
                       double eta, double lambda, double w_max, int step) {
  W = (1.0 - lambda) * W + eta * (e * phi.transpose());
  if (!W.allFinite()) {
    throw NumericalError("plasticity blowup: non-finite weights", step);
  }
  const double norm = W.norm();
  if (norm > w_max) {
    W *= w_max / norm;
  }
}

Vector residual_input(const PlantState& state, const ReferenceSignal& ref,
                      bool include_position_error) {
  const int nq = static_cast<int>(state.q.size());
  const int nqd = static_cast<int>(state.qdot.size());
  const int m = residual_input_dim(nq, nqd, include_position_error);
  Vector x(m);
  int k = 0;
  if (include_position_error) {
    for (int i = 0; i < nq; ++i) x(k++) = ref.q_ref(i) - state.q(i);
  }
  for (int i = 0; i < nqd; ++i) x(k++) = ref.qdot_ref(i) - state.qdot(i);
  for (int i = 0; i < nqd; ++i) x(k++) = ref.qdot_ref(i);
  return x;
}

int residual_input_dim(int position_dim, int velocity_dim,
                       bool include_position_error) {
  return (include_position_error ? position_dim : 0) + 2 * velocity_dim;
}

}  // namespace sagres
