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

#include "sagres/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "sagres/error.hpp"
#include "sagres/nominal.hpp"
#include "sagres/sag.hpp"

namespace sagres {

namespace {

/// Derives the velocity/position coupling from the controller's own linear
/// law, so the teaching signal points along the stabilizing direction.
Vector derive_lambda_track(const ExperimentConfig& cfg,
                           const NominalController& ctrl) {
  const int nq = cfg.plant.position_dim();
  const int nqd = cfg.plant.velocity_dim();
  Vector lambda = Vector::Zero(nqd);
  if (ctrl.kind == ControllerKind::PD) {
    for (int i = 0; i < nqd && i < ctrl.kp.size(); ++i) {
      if (ctrl.kd(i) > 0.0 && i < nq) {
        lambda(i) = ctrl.kp(i) / ctrl.kd(i);
      }
    }
  } else {
    for (int i = 0; i < nqd && i < nq; ++i) {
      const double kv = ctrl.K(0, nq + i);
      if (std::abs(kv) > 1e-12) {
        const double ratio = ctrl.K(0, i) / kv;
        lambda(i) = ratio > 0.0 ? ratio : 0.0;
      }
    }
  }
  return lambda;
}

Matrix derive_error_map(const ExperimentConfig& cfg,
                        const NominalController& ctrl) {
  const int nq = cfg.plant.position_dim();
  const int nqd = cfg.plant.velocity_dim();
  const int d = cfg.plant.action_dim();
  if (ctrl.kind == ControllerKind::LQR) {
    // Velocity block of the feedback gain: maps the tracking error onto the
    // control directions the nominal itself uses.
    Matrix map(d, nqd);
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < nqd; ++i) {
        map(j, i) = ctrl.K(j, nq + i);
      }
    }
    return map;
  }
  Matrix map = Matrix::Zero(d, nqd);
  for (int j = 0; j < d && j < nqd; ++j) {
    map(j, j) = 1.0;
  }
  return map;
}

}  // namespace

Setup build_setup(const ExperimentConfig& config) {
  validate(config);
  Setup setup;
  setup.cfg = config;
  ExperimentConfig& cfg = setup.cfg;

  NominalController ctrl;
  ctrl.kind = cfg.nominal.kind;
  ctrl.action_limits = cfg.nominal.action_limits;
  if (cfg.nominal.kind == ControllerKind::PD) {
    ctrl.kp = cfg.nominal.kp;
    ctrl.kd = cfg.nominal.kd;
  } else {
    // Synthesize the frozen gain about the configured operating point under
    // nominal parameters.
    const Vector q_eq = cfg.reference.offset_q;
    const Vector qdot_eq = Vector::Zero(cfg.plant.velocity_dim());
    const Matrix Q = cfg.nominal.lqr_q_diag.asDiagonal();
    const Matrix R = cfg.nominal.lqr_r_diag.asDiagonal();
    const LinearModel model = linearize_step_map(
        cfg.plant, PlantParams{}, q_eq, qdot_eq, cfg.dt, Q, R);
    ctrl.K = lqr_gain(model, cfg.nominal.lqr_iters, cfg.nominal.lqr_tol);
  }
  setup.controller = ctrl;

  setup.tracking.lambda = cfg.residual.lambda_track.size() > 0
                              ? cfg.residual.lambda_track
                              : derive_lambda_track(cfg, ctrl);
  setup.tracking.task_weights = cfg.residual.task_weights;
  setup.error_map = cfg.residual.error_map.size() > 0
                        ? cfg.residual.error_map
                        : derive_error_map(cfg, ctrl);
  cfg.residual.lambda_track = setup.tracking.lambda;
  cfg.residual.error_map = setup.error_map;

  GateParams gate;
  gate.eps = cfg.gate.eps > 0.0 ? cfg.gate.eps
                                : 0.3 * cfg.nominal.action_limits.norm();
  gate.eps_j = cfg.gate.eps_j.size() > 0
                   ? cfg.gate.eps_j
                   : (0.5 * cfg.nominal.action_limits).eval();
  gate.kappa = cfg.gate.kappa;
  gate.xi = cfg.gate.xi;
  gate.gamma_min = cfg.gate.gamma_min;
  gate.gamma_max = cfg.gate.gamma_max;
  gate.k_gamma = cfg.gate.k_gamma;
  gate.gamma_clip_from_zero = cfg.gate.gamma_clip_from_zero;
  gate.beta_min = cfg.gate.beta_min;
  gate.beta_max = cfg.gate.beta_max;
  gate.k_beta = cfg.gate.k_beta;
  gate.e_bar = cfg.gate.e_bar;
  gate.beta_decay = cfg.gate.beta_decay;
  gate.b_max = cfg.gate.b_max;
  gate.rho_b = cfg.gate.rho_b;
  gate.alpha_b = cfg.gate.alpha_b;
  gate.eps_bar = cfg.gate.eps_bar;
  gate.alpha_j = cfg.gate.alpha_j;
  gate.act_steps = cfg.gate.act_steps;
  gate.act_drop = 0.0;  // set once J* is known
  setup.gate = gate;
  cfg.gate.eps = gate.eps;
  cfg.gate.eps_j = gate.eps_j;

  setup.input_dim = residual_input_dim(cfg.plant.position_dim(),
                                       cfg.plant.velocity_dim(),
                                       cfg.residual.include_position_error);
  setup.basis = make_basis(cfg.residual.features, setup.input_dim,
                           cfg.residual.seed);
  return setup;
}

double calibrate_nominal_level(const std::vector<double>& j_bar_history,
                               int begin, int end) {
  if (begin < 0 || end <= begin ||
      end > static_cast<int>(j_bar_history.size())) {
    throw ConfigError("calibration window outside recorded history");
  }
  double sum = 0.0;
  for (int t = begin; t < end; ++t) {
    sum += j_bar_history[t];
  }
  return sum / static_cast<double>(end - begin);
}

EpisodeResult run_episode(const Setup& setup, std::uint64_t seed,
                          const EpisodeOptions& options) {
  const ExperimentConfig& cfg = setup.cfg;
  const int horizon = cfg.episode.horizon;
  const int fault_step = cfg.episode.fault_step;
  const int d = cfg.plant.action_dim();
  const Method method = options.method;
  const AblationFlags& flags = options.flags;

  std::optional<ShiftSpec> shift = options.shift;
  if (!shift && cfg.shift.enabled) {
    shift = cfg.shift.spec;
  }
  int teach_flip = options.teach_flip_channel;
  if (teach_flip < 0 && cfg.shift.enabled) {
    teach_flip = cfg.shift.teach_flip_channel;
  }

  // Initial condition: uniform in the configured ball around the
  // reference's starting point.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const ReferenceSignal ref0 = reference(cfg.reference, 0);
  PlantState state;
  state.q = ref0.q_ref;
  state.qdot = ref0.qdot_ref;
  state.t = 0;
  for (int i = 0; i < state.q.size(); ++i) {
    state.q(i) += cfg.init_ball_q(i) * unit(rng);
  }
  for (int i = 0; i < state.qdot.size(); ++i) {
    state.qdot(i) += cfg.init_ball_qdot(i) * unit(rng);
  }

  PlantParams params;
  ResidualHeads heads = make_heads(d, cfg.residual.features,
                                   cfg.residual.eta_fast0, cfg.residual.eta_slow,
                                   cfg.residual.lambda_fast, cfg.residual.lambda_slow,
                                   cfg.residual.w_max);
  TracePair traces = make_traces(cfg.residual.features, cfg.residual.alpha_e,
                                 cfg.residual.alpha_i);
  GateParams gate = setup.gate;
  GateState gs = make_gate_state(d, gate);

  EpisodeTrace trace;
  trace.tau = fault_step;
  trace.horizon = horizon;
  trace.rewards.reserve(horizon);
  trace.j_bar.reserve(horizon);
  trace.u_norm.reserve(horizon);
  trace.cosine.reserve(horizon);
  trace.gamma.reserve(horizon);
  trace.boost.reserve(horizon);
  trace.eta_f.reserve(horizon);
  trace.dist.reserve(horizon);
  trace.active.reserve(horizon);

  double j_bar = std::numeric_limits<double>::quiet_NaN();
  double j_star = std::numeric_limits<double>::quiet_NaN();

  for (int t = 0; t < horizon; ++t) {
    const ReferenceSignal ref_t = reference(cfg.reference, t);
    const Vector a_nom = nominal_action(setup.controller, state, ref_t);

    Vector u = Vector::Zero(d);
    Vector phi;
    GateOutput gate_out;
    gate_out.gamma = gs.gamma;

    if (method != Method::Frozen) {
      const Vector x = residual_input(state, ref_t,
                                      cfg.residual.include_position_error);
      const Vector h = encode(setup.basis, x);
      phi = flags.temporal_filter ? update_traces(traces, h) : h;
      const Vector a_res = flags.dual_head
                               ? residual_output(heads, phi)
                               : (heads.w_fast * phi).eval();
      GateOptions gate_opts;
      gate_opts.constrain = method != Method::ResidualUnconstrained;
      gate_opts.dir_align = flags.dir_align;
      gate_opts.nuclei_gate = flags.nuclei_gate;
      gate_out = apply_gate(a_nom, a_res, gs, gate, gate_opts);
      u = gate_out.u;
    }

    if (shift && t == shift->fault_step) {
      params = apply_shift(params, *shift);
    }

    const Vector total = a_nom + u;
    const PlantState next = step(cfg.plant, state, total, params, cfg.dt);
    const ReferenceSignal ref_next = reference(cfg.reference, t + 1);

    const double r = reward(cfg.reward_weights, next, total, ref_next);
    j_bar = smooth_performance(j_bar, r, gate.alpha_j);
    trace.rewards.push_back(r);
    trace.j_bar.push_back(j_bar);

    if (static_cast<int>(trace.j_bar.size()) == cfg.episode.calib_end) {
      j_star = calibrate_nominal_level(trace.j_bar, cfg.episode.calib_begin,
                                       cfg.episode.calib_end);
      gs.j_star = j_star;
      gate.act_drop = cfg.gate.act_drop_frac * j_star;
    }

    gs.j_bar = j_bar;
    update_activation(gs, gate);

    double eta_f = effective_learning_rate(heads.eta_fast0, gs.b);
    if (method != Method::Frozen &&
        (gs.active || cfg.gate.plastic_when_inactive)) {
      const Vector e_track = tracking_error(next, ref_next, setup.tracking);
      Vector e_teach = setup.error_map * e_track;
      if (teach_flip >= 0 && shift && t >= shift->fault_step) {
        e_teach(teach_flip) = -e_teach(teach_flip);
      }
      const double eps_t = task_error(next, ref_next, setup.tracking);
      eta_f = effective_learning_rate(heads.eta_fast0, gs.b);
      plasticity_update(heads.w_fast, e_teach, phi, eta_f, heads.lambda_fast,
                        heads.w_max, t);
      if (flags.dual_head) {
        plasticity_update(heads.w_slow, e_teach, phi, heads.eta_slow,
                          heads.lambda_slow, heads.w_max, t);
      }
      if (flags.boost) {
        gs.b = boost_update(gs.b, eps_t, gate);
      }
      if (flags.nuclei_gate) {
        per_joint_gain_update(gs.beta, e_teach, gate);
      }
    }

    trace.u_norm.push_back(gate_out.u_norm);
    trace.cosine.push_back(gate_out.c);
    trace.gamma.push_back(gate_out.gamma);
    trace.boost.push_back(gs.b);
    trace.eta_f.push_back(eta_f);
    trace.dist.push_back(reference_distance(cfg.reward_weights, next, ref_next));
    trace.active.push_back(gs.active ? 1 : 0);

    state = next;
  }

  if (std::isnan(j_star)) {
    throw ConfigError("calibration window never completed");
  }
  trace.j_star = j_star;

  EpisodeResult result;
  result.j_star = j_star;
  result.metrics = compute_metrics(trace, j_star,
                                   cfg.episode.delta_frac * j_star,
                                   cfg.episode.ttr_frac,
                                   cfg.episode.ssr_window_frac);
  result.trace = std::move(trace);
  return result;
}

EpisodeResult run_episode(const Setup& setup, std::uint64_t seed) {
  EpisodeOptions options;
  options.method = setup.cfg.episode.method;
  return run_episode(setup, seed, options);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int workers = std::max(1, std::min<int>(
      static_cast<int>(std::thread::hardware_concurrency()), n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> index{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = index.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<SweepRow> severity_sweep(const ExperimentConfig& config,
                                     const SweepConfig& sweep) {
  const Setup setup = build_setup(config);

  struct Cell {
    double severity;
    Method method;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double severity : sweep.severities) {
    for (Method method : sweep.methods) {
      for (int k = 0; k < sweep.trials; ++k) {
        cells.push_back({severity, method, static_cast<std::uint64_t>(k + 1)});
      }
    }
  }

  std::vector<SweepRow> rows(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const Cell& cell = cells[i];
    EpisodeOptions options;
    options.method = cell.method;
    ShiftSpec shift;
    shift.family = sweep.family;
    shift.severity = cell.severity;
    shift.fault_step = setup.cfg.episode.fault_step;
    options.shift = shift;
    const EpisodeResult result = run_episode(setup, cell.seed, options);
    rows[i] = SweepRow{sweep.family, cell.severity, cell.method, cell.seed,
                       result.metrics};
  });
  return rows;
}

const std::vector<std::string>& ablation_variants() {
  static const std::vector<std::string> variants = {
      "full",         "no-dual-head",   "no-dir-align",
      "no-temporal-filter", "no-nuclei-gate", "no-boost"};
  return variants;
}

AblationFlags ablation_flags_for(const std::string& variant) {
  AblationFlags flags;
  if (variant == "full") return flags;
  if (variant == "no-dual-head") { flags.dual_head = false; return flags; }
  if (variant == "no-dir-align") { flags.dir_align = false; return flags; }
  if (variant == "no-temporal-filter") { flags.temporal_filter = false; return flags; }
  if (variant == "no-nuclei-gate") { flags.nuclei_gate = false; return flags; }
  if (variant == "no-boost") { flags.boost = false; return flags; }
  throw ConfigError("ablation: unknown variant '" + variant + "'");
}

std::vector<AblationRow> ablation_suite(const ExperimentConfig& config) {
  const Setup setup = build_setup(config);
  const auto& variants = ablation_variants();
  const auto& seeds = config.episode.seeds;

  struct Cell {
    int variant;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (int v = 0; v < static_cast<int>(variants.size()); ++v) {
    for (std::uint64_t seed : seeds) {
      cells.push_back({v, seed});
    }
  }

  std::vector<AblationRow> rows(cells.size());
  parallel_for(static_cast<int>(cells.size()), [&](int i) {
    const Cell& cell = cells[i];
    EpisodeOptions options;
    options.method = Method::ResidualFull;
    options.flags = ablation_flags_for(variants[cell.variant]);
    const EpisodeResult result = run_episode(setup, cell.seed, options);
    rows[i] = AblationRow{variants[cell.variant], cell.seed, result.metrics};
  });
  return rows;
}

}  // namespace sagres
