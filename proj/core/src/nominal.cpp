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

#include "sagres/nominal.hpp"

#include <algorithm>
#include <cmath>

#include "sagres/error.hpp"

namespace sagres {

Matrix lqr_gain(const LinearModel& model, int iters, double tol) {
  if (tol <= 0.0) {
    throw ConfigError("nominal.lqr.tol: must be > 0");
  }
  const Matrix& A = model.A;
  const Matrix& B = model.B;
  Matrix P = model.Q;
  for (int k = 0; k < iters; ++k) {
    const Matrix btp = B.transpose() * P;
    const Matrix gain_term = (model.R + btp * B).ldlt().solve(btp * A);
    const Matrix next = model.Q + A.transpose() * P * A -
                        A.transpose() * P * B * gain_term;
    const double residual = (next - P).cwiseAbs().maxCoeff();
    P = next;
    if (residual <= tol) {
      const Matrix btp_final = B.transpose() * P;
      return (model.R + btp_final * B).ldlt().solve(btp_final * A);
    }
  }
  throw NumericalError("DARE divergence: no fixed point within iteration budget", iters);
}

namespace {

Vector saturate(const Vector& u, const Vector& limits) {
  Vector out = u;
  for (int j = 0; j < out.size(); ++j) {
    out(j) = std::clamp(out(j), -limits(j), limits(j));
  }
  return out;
}

}  // namespace

Vector nominal_action(const NominalController& ctrl, const PlantState& state,
                      const ReferenceSignal& ref) {
  if (!state.q.allFinite() || !state.qdot.allFinite()) {
    throw NumericalError("non-finite state passed to nominal controller", state.t);
  }

  if (ctrl.kind == ControllerKind::LQR) {
    const int nq = static_cast<int>(state.q.size());
    const int nqd = static_cast<int>(state.qdot.size());
    Vector err(nq + nqd);
    err.head(nq) = state.q - ref.q_ref;
    err.tail(nqd) = state.qdot - ref.qdot_ref;
    return saturate(-(ctrl.K * err), ctrl.action_limits);
  }

  const int d = static_cast<int>(ctrl.kp.size());
  Vector u(d);
  for (int j = 0; j < d; ++j) {
    double a = 0.0;
    if (j < state.q.size()) {
      a += ctrl.kp(j) * (ref.q_ref(j) - state.q(j));
    }
    if (j < state.qdot.size()) {
      a += ctrl.kd(j) * (ref.qdot_ref(j) - state.qdot(j));
    }
    u(j) = a;
  }
  return saturate(u, ctrl.action_limits);
}

LinearModel linearize_step_map(const Plant& plant, const PlantParams& params,
                               const Vector& q_eq, const Vector& qdot_eq,
                               double dt, const Matrix& Q, const Matrix& R) {
  const int nq = static_cast<int>(q_eq.size());
  const int nqd = static_cast<int>(qdot_eq.size());
  const int n = nq + nqd;
  const int m = plant.action_dim();
  const double h = 1e-6;

  PlantState eq;
  eq.q = q_eq;
  eq.qdot = qdot_eq;
  eq.t = 0;
  const Vector u0 = Vector::Zero(m);

  auto step_vec = [&](const Vector& s, const Vector& u) {
    PlantState st = eq;
    st.q = s.head(nq);
    st.qdot = s.tail(nqd);
    const PlantState nx = step(plant, st, u, params, dt);
    Vector out(n);
    out.head(nq) = nx.q;
    out.tail(nqd) = nx.qdot;
    return out;
  };

  Vector s0(n);
  s0.head(nq) = q_eq;
  s0.tail(nqd) = qdot_eq;

  LinearModel model;
  model.A.resize(n, n);
  model.B.resize(n, m);
  model.Q = Q;
  model.R = R;

  for (int i = 0; i < n; ++i) {
    Vector sp = s0, sm = s0;
    sp(i) += h;
    sm(i) -= h;
    model.A.col(i) = (step_vec(sp, u0) - step_vec(sm, u0)) / (2.0 * h);
  }
  for (int j = 0; j < m; ++j) {
    Vector up = u0, um = u0;
    up(j) += h;
    um(j) -= h;
    model.B.col(j) = (step_vec(s0, up) - step_vec(s0, um)) / (2.0 * h);
  }
  return model;
}

}  // namespace sagres
