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

#include "sagres/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sagres/error.hpp"

namespace sagres {

namespace {

using nlohmann::json;

constexpr double kPi = 3.1415926535897932384626433832795;

/// Strict object reader: every key must be consumed, unknown keys fail
/// with their full path.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
  }

  ~Section() = default;

  bool has(const std::string& key) {
    return j_.contains(key);
  }

  const json* take(const std::string& key) {
    if (!j_.contains(key)) return nullptr;
    consumed_.insert(key);
    return &j_.at(key);
  }

  void get(const std::string& key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
      out = v->get<double>();
    }
  }

  void get(const std::string& key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(field(key) + ": expected an integer");
      out = v->get<int>();
    }
  }

  void get(const std::string& key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned() && !v->is_number_integer()) {
        throw ConfigError(field(key) + ": expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void get(const std::string& key, bool& out) {
    if (const json* v = take(key)) {
      if (!v->is_boolean()) throw ConfigError(field(key) + ": expected a boolean");
      out = v->get<bool>();
    }
  }

  void get(const std::string& key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
      out = v->get<std::string>();
    }
  }

  void get(const std::string& key, Vector& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ConfigError(field(key) + ": expected an array");
      out.resize(static_cast<Eigen::Index>(v->size()));
      for (std::size_t i = 0; i < v->size(); ++i) {
        if (!(*v)[i].is_number()) {
          throw ConfigError(field(key) + ": expected numeric entries");
        }
        out(static_cast<Eigen::Index>(i)) = (*v)[i].get<double>();
      }
    }
  }

  void get(const std::string& key, Matrix& out) {
    if (const json* v = take(key)) {
      if (!v->is_array() || v->empty()) {
        throw ConfigError(field(key) + ": expected an array of rows");
      }
      const std::size_t rows = v->size();
      const std::size_t cols = (*v)[0].size();
      out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      for (std::size_t i = 0; i < rows; ++i) {
        const json& row = (*v)[i];
        if (!row.is_array() || row.size() != cols) {
          throw ConfigError(field(key) + ": ragged matrix rows");
        }
        for (std::size_t jj = 0; jj < cols; ++jj) {
          out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(jj)) =
              row[jj].get<double>();
        }
      }
    }
  }

  void get(const std::string& key, std::vector<std::uint64_t>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ConfigError(field(key) + ": expected an array");
      out.clear();
      for (const auto& e : *v) out.push_back(e.get<std::uint64_t>());
    }
  }

  void get(const std::string& key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ConfigError(field(key) + ": expected an array");
      out.clear();
      for (const auto& e : *v) out.push_back(e.get<double>());
    }
  }

  std::optional<Section> sub(const std::string& key) {
    if (const json* v = take(key)) {
      return Section(*v, field(key));
    }
    return std::nullopt;
  }

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!consumed_.count(it.key())) {
        throw ConfigError(field(it.key()) + ": unknown key");
      }
    }
  }

  std::string field(const std::string& key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> consumed_;
};

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::Frozen: return "frozen";
    case Method::ResidualFull: return "residual_full";
    case Method::ResidualUnconstrained: return "residual_unconstrained";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "frozen") return Method::Frozen;
  if (name == "residual_full") return Method::ResidualFull;
  if (name == "residual_unconstrained") return Method::ResidualUnconstrained;
  throw ConfigError("episode.method: unknown method '" + name +
                    "' (expected frozen, residual_full, or residual_unconstrained)");
}

ExperimentConfig default_config(PlantKind kind) {
  ExperimentConfig cfg;
  cfg.plant.kind = kind;
  cfg.dt = 0.01;

  switch (kind) {
    case PlantKind::Pendulum: {
      cfg.init_ball_q = Vector::Constant(1, 0.15);
      cfg.init_ball_qdot = Vector::Constant(1, 0.3);
      cfg.reference.kind = ReferenceKind::Sine;
      cfg.reference.offset_q = Vector::Constant(1, kPi);
      cfg.reference.offset_qdot = Vector::Zero(1);
      cfg.reference.amp_q = Vector::Constant(1, 0.5);
      cfg.reference.amp_qdot = Vector::Zero(1);
      cfg.reference.period_steps = 200;
      cfg.reward_weights.w_q = Vector::Constant(1, 5.0);
      cfg.reward_weights.w_qdot = Vector::Constant(1, 0.25);
      cfg.dist_bound_nominal = 1.8;
      cfg.nominal.kind = ControllerKind::PD;
      cfg.nominal.kp = Vector::Constant(1, 8.0);
      cfg.nominal.kd = Vector::Constant(1, 1.5);
      cfg.nominal.action_limits = Vector::Constant(1, 8.0);
      cfg.residual.task_weights = Vector::Constant(1, 1.0);
      cfg.gate.e_bar = Vector::Constant(1, 0.8);
      cfg.gate.eps_bar = 0.8;
      break;
    }
    case PlantKind::CartPole: {
      cfg.init_ball_q = (Vector(2) << 0.1, 0.04).finished();
      cfg.init_ball_qdot = (Vector(2) << 0.1, 0.05).finished();
      cfg.reference.kind = ReferenceKind::Sine;
      cfg.reference.offset_q = Vector::Zero(2);
      cfg.reference.offset_qdot = Vector::Zero(2);
      cfg.reference.amp_q = (Vector(2) << 0.4, 0.0).finished();
      cfg.reference.amp_qdot = Vector::Zero(2);
      cfg.reference.period_steps = 300;
      cfg.reward_weights.w_q = (Vector(2) << 2.0, 4.0).finished();
      cfg.reward_weights.w_qdot = (Vector(2) << 0.3, 0.3).finished();
      cfg.dist_bound_nominal = 2.0;
      cfg.nominal.kind = ControllerKind::LQR;
      cfg.nominal.lqr_q_diag = (Vector(4) << 4.0, 8.0, 0.5, 0.5).finished();
      cfg.nominal.lqr_r_diag = Vector::Constant(1, 0.2);
      cfg.nominal.action_limits = Vector::Constant(1, 10.0);
      cfg.residual.task_weights = Vector::Constant(2, 1.0);
      cfg.gate.e_bar = Vector::Constant(1, 1.0);
      cfg.gate.eps_bar = 1.0;
      break;
    }
    case PlantKind::Unicycle: {
      cfg.init_ball_q = (Vector(3) << 0.0, 0.0, 0.1).finished();
      cfg.init_ball_qdot = (Vector(2) << 0.1, 0.1).finished();
      cfg.reference.kind = ReferenceKind::Sine;
      cfg.reference.offset_q = Vector::Zero(3);
      cfg.reference.offset_qdot = (Vector(2) << 0.5, 0.0).finished();
      cfg.reference.amp_q = Vector::Zero(3);
      cfg.reference.amp_qdot = (Vector(2) << 0.15, 0.2).finished();
      cfg.reference.period_steps = 250;
      cfg.reward_weights.w_q = Vector::Zero(3);
      cfg.reward_weights.w_qdot = (Vector(2) << 2.0, 1.5).finished();
      cfg.dist_bound_nominal = 1.5;
      cfg.nominal.kind = ControllerKind::PD;
      cfg.nominal.kp = Vector::Zero(2);
      cfg.nominal.kd = (Vector(2) << 6.0, 3.0).finished();
      cfg.nominal.action_limits = (Vector(2) << 4.0, 2.0).finished();
      cfg.residual.lambda_track = Vector::Zero(2);
      cfg.residual.task_weights = Vector::Constant(2, 1.0);
      cfg.residual.include_position_error = false;
      cfg.gate.e_bar = (Vector(2) << 0.3, 0.3).finished();
      cfg.gate.eps_bar = 0.5;
      break;
    }
  }
  cfg.reference.dt = cfg.dt;
  return cfg;
}

namespace {

void read_plant(Section& root, ExperimentConfig& cfg) {
  auto plant = root.sub("plant");
  if (!plant) return;
  // kind was already consumed by the caller to select defaults.
  plant->take("kind");
  plant->get("dt", cfg.dt);
  if (auto constants = plant->sub("constants")) {
    switch (cfg.plant.kind) {
      case PlantKind::Pendulum: {
        auto& c = cfg.plant.pendulum;
        constants->get("mass", c.mass);
        constants->get("length", c.length);
        constants->get("gravity", c.gravity);
        constants->get("damping", c.damping);
        break;
      }
      case PlantKind::CartPole: {
        auto& c = cfg.plant.cartpole;
        constants->get("cart_mass", c.cart_mass);
        constants->get("pole_mass", c.pole_mass);
        constants->get("pole_half_length", c.pole_half_length);
        constants->get("gravity", c.gravity);
        constants->get("cart_damping", c.cart_damping);
        constants->get("pivot_damping", c.pivot_damping);
        break;
      }
      case PlantKind::Unicycle: {
        auto& c = cfg.plant.unicycle;
        constants->get("mass", c.mass);
        constants->get("inertia", c.inertia);
        constants->get("lin_damping", c.lin_damping);
        constants->get("ang_damping", c.ang_damping);
        break;
      }
    }
    constants->finish();
  }
  if (auto ball = plant->sub("init_ball")) {
    ball->get("q", cfg.init_ball_q);
    ball->get("qdot", cfg.init_ball_qdot);
    ball->finish();
  }
  if (auto ref = plant->sub("reference")) {
    std::string kind;
    ref->get("kind", kind);
    if (!kind.empty()) {
      if (kind == "constant") cfg.reference.kind = ReferenceKind::Constant;
      else if (kind == "sine") cfg.reference.kind = ReferenceKind::Sine;
      else throw ConfigError("plant.reference.kind: unknown kind '" + kind + "'");
    }
    ref->get("offset_q", cfg.reference.offset_q);
    ref->get("offset_qdot", cfg.reference.offset_qdot);
    ref->get("amp_q", cfg.reference.amp_q);
    ref->get("amp_qdot", cfg.reference.amp_qdot);
    ref->get("period_steps", cfg.reference.period_steps);
    ref->finish();
  }
  if (auto rw = plant->sub("reward")) {
    rw->get("w_q", cfg.reward_weights.w_q);
    rw->get("w_qdot", cfg.reward_weights.w_qdot);
    rw->get("action_cost", cfg.reward_weights.action_cost);
    rw->finish();
  }
  plant->get("dist_bound_nominal", cfg.dist_bound_nominal);
  plant->finish();
}

void read_nominal(Section& root, ExperimentConfig& cfg) {
  auto nom = root.sub("nominal");
  if (!nom) return;
  std::string kind;
  nom->get("kind", kind);
  if (!kind.empty()) {
    if (kind == "pd") cfg.nominal.kind = ControllerKind::PD;
    else if (kind == "lqr") cfg.nominal.kind = ControllerKind::LQR;
    else throw ConfigError("nominal.kind: unknown kind '" + kind + "'");
  }
  nom->get("kp", cfg.nominal.kp);
  nom->get("kd", cfg.nominal.kd);
  nom->get("action_limits", cfg.nominal.action_limits);
  if (auto lqr = nom->sub("lqr")) {
    lqr->get("q_diag", cfg.nominal.lqr_q_diag);
    lqr->get("r_diag", cfg.nominal.lqr_r_diag);
    lqr->get("iters", cfg.nominal.lqr_iters);
    lqr->get("tol", cfg.nominal.lqr_tol);
    lqr->finish();
  }
  nom->finish();
}

void read_residual(Section& root, ExperimentConfig& cfg) {
  auto res = root.sub("residual");
  if (!res) return;
  res->get("seed", cfg.residual.seed);
  res->get("features", cfg.residual.features);
  res->get("alpha_e", cfg.residual.alpha_e);
  res->get("alpha_i", cfg.residual.alpha_i);
  res->get("eta_fast", cfg.residual.eta_fast0);
  res->get("eta_slow", cfg.residual.eta_slow);
  res->get("lambda_fast", cfg.residual.lambda_fast);
  res->get("lambda_slow", cfg.residual.lambda_slow);
  res->get("w_max", cfg.residual.w_max);
  res->get("include_position_error", cfg.residual.include_position_error);
  res->get("lambda_track", cfg.residual.lambda_track);
  res->get("error_map", cfg.residual.error_map);
  res->get("task_weights", cfg.residual.task_weights);
  res->finish();
}

void read_gate(Section& root, ExperimentConfig& cfg) {
  auto gate = root.sub("gate");
  if (!gate) return;
  gate->get("eps", cfg.gate.eps);
  gate->get("eps_j", cfg.gate.eps_j);
  gate->get("kappa", cfg.gate.kappa);
  gate->get("xi", cfg.gate.xi);
  gate->get("gamma_min", cfg.gate.gamma_min);
  gate->get("gamma_max", cfg.gate.gamma_max);
  gate->get("k_gamma", cfg.gate.k_gamma);
  gate->get("gamma_clip_from_zero", cfg.gate.gamma_clip_from_zero);
  gate->get("beta_min", cfg.gate.beta_min);
  gate->get("beta_max", cfg.gate.beta_max);
  gate->get("k_beta", cfg.gate.k_beta);
  gate->get("e_bar", cfg.gate.e_bar);
  gate->get("beta_decay", cfg.gate.beta_decay);
  gate->get("b_max", cfg.gate.b_max);
  gate->get("rho_b", cfg.gate.rho_b);
  gate->get("alpha_b", cfg.gate.alpha_b);
  gate->get("eps_bar", cfg.gate.eps_bar);
  gate->get("alpha_j", cfg.gate.alpha_j);
  gate->get("act_drop_frac", cfg.gate.act_drop_frac);
  gate->get("act_steps", cfg.gate.act_steps);
  gate->get("plastic_when_inactive", cfg.gate.plastic_when_inactive);
  gate->finish();
}

void read_episode(Section& root, ExperimentConfig& cfg) {
  auto ep = root.sub("episode");
  if (!ep) return;
  ep->get("horizon", cfg.episode.horizon);
  ep->get("fault_step", cfg.episode.fault_step);
  std::vector<double> window;
  ep->get("calib_window", window);
  if (!window.empty()) {
    if (window.size() != 2) {
      throw ConfigError("episode.calib_window: expected [begin, end)");
    }
    cfg.episode.calib_begin = static_cast<int>(window[0]);
    cfg.episode.calib_end = static_cast<int>(window[1]);
  }
  ep->get("seeds", cfg.episode.seeds);
  std::string method;
  ep->get("method", method);
  if (!method.empty()) cfg.episode.method = method_from_string(method);
  ep->get("delta_frac", cfg.episode.delta_frac);
  ep->get("ttr_fraction", cfg.episode.ttr_frac);
  ep->get("ssr_window_frac", cfg.episode.ssr_window_frac);
  ep->finish();
}

void read_shift(Section& root, ExperimentConfig& cfg) {
  auto shift = root.sub("shift");
  if (!shift) return;
  cfg.shift.enabled = true;
  std::string family;
  shift->get("family", family);
  if (!family.empty()) cfg.shift.spec.family = shift_family_from_string(family);
  shift->get("severity", cfg.shift.spec.severity);
  shift->get("teach_flip_channel", cfg.shift.teach_flip_channel);
  bool enabled = true;
  shift->get("enabled", enabled);
  cfg.shift.enabled = enabled;
  shift->finish();
  cfg.shift.spec.fault_step = cfg.episode.fault_step;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  Section root(j, "config");
  PlantKind kind = PlantKind::Pendulum;
  if (j.contains("plant") && j.at("plant").is_object() &&
      j.at("plant").contains("kind")) {
    kind = plant_kind_from_string(j.at("plant").at("kind").get<std::string>());
  }
  ExperimentConfig cfg = default_config(kind);

  read_plant(root, cfg);
  read_nominal(root, cfg);
  read_residual(root, cfg);
  read_gate(root, cfg);
  read_episode(root, cfg);
  read_shift(root, cfg);
  root.finish();

  cfg.reference.dt = cfg.dt;
  cfg.shift.spec.fault_step = cfg.episode.fault_step;
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("config: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate(const ExperimentConfig& cfg) {
  const int nq = cfg.plant.position_dim();
  const int nqd = cfg.plant.velocity_dim();
  const int d = cfg.plant.action_dim();

  require(cfg.dt > 0.0, "plant.dt: must be > 0");
  require(cfg.init_ball_q.size() == nq, "plant.init_ball.q: wrong dimension");
  require(cfg.init_ball_qdot.size() == nqd, "plant.init_ball.qdot: wrong dimension");
  require(cfg.reference.offset_q.size() == nq, "plant.reference.offset_q: wrong dimension");
  require(cfg.reference.offset_qdot.size() == nqd, "plant.reference.offset_qdot: wrong dimension");
  require(cfg.reference.amp_q.size() == nq, "plant.reference.amp_q: wrong dimension");
  require(cfg.reference.amp_qdot.size() == nqd, "plant.reference.amp_qdot: wrong dimension");
  require(cfg.reference.period_steps >= 1, "plant.reference.period_steps: must be >= 1");
  require(cfg.reward_weights.w_q.size() == nq, "plant.reward.w_q: wrong dimension");
  require(cfg.reward_weights.w_qdot.size() == nqd, "plant.reward.w_qdot: wrong dimension");
  require(cfg.reward_weights.action_cost >= 0.0, "plant.reward.action_cost: must be >= 0");
  require(cfg.reward_weights.w_q.minCoeff() >= 0.0, "plant.reward.w_q: must be >= 0");
  require(cfg.reward_weights.w_qdot.minCoeff() >= 0.0, "plant.reward.w_qdot: must be >= 0");
  require(cfg.dist_bound_nominal > 0.0, "plant.dist_bound_nominal: must be > 0");

  require(cfg.nominal.action_limits.size() == d, "nominal.action_limits: wrong dimension");
  require(cfg.nominal.action_limits.minCoeff() > 0.0, "nominal.action_limits: must be > 0");
  if (cfg.nominal.kind == ControllerKind::PD) {
    require(cfg.nominal.kp.size() == d, "nominal.kp: wrong dimension");
    require(cfg.nominal.kd.size() == d, "nominal.kd: wrong dimension");
  } else {
    require(cfg.nominal.lqr_q_diag.size() == nq + nqd, "nominal.lqr.q_diag: wrong dimension");
    require(cfg.nominal.lqr_r_diag.size() == d, "nominal.lqr.r_diag: wrong dimension");
    require(cfg.nominal.lqr_r_diag.minCoeff() > 0.0, "nominal.lqr.r_diag: must be > 0");
    require(cfg.nominal.lqr_q_diag.minCoeff() >= 0.0, "nominal.lqr.q_diag: must be >= 0");
    require(cfg.nominal.lqr_iters >= 1, "nominal.lqr.iters: must be >= 1");
    require(cfg.nominal.lqr_tol > 0.0, "nominal.lqr.tol: must be > 0");
  }

  const auto& r = cfg.residual;
  require(r.features >= 1, "residual.features: must be >= 1");
  require(r.alpha_i > 0.0 && r.alpha_i < r.alpha_e && r.alpha_e < 1.0,
          "residual.alpha_i/alpha_e: must satisfy 0 < alpha_i < alpha_e < 1");
  require(r.eta_slow > 0.0 && r.eta_fast0 > r.eta_slow,
          "residual.eta_fast/eta_slow: must satisfy eta_fast > eta_slow > 0");
  require(r.lambda_slow >= 0.0 && r.lambda_fast > r.lambda_slow && r.lambda_fast < 1.0,
          "residual.lambda_fast/lambda_slow: must satisfy 1 > lambda_fast > lambda_slow >= 0");
  require(r.w_max > 0.0, "residual.w_max: must be > 0");
  if (r.lambda_track.size() > 0) {
    require(r.lambda_track.size() == nqd, "residual.lambda_track: wrong dimension");
    require(r.lambda_track.minCoeff() >= 0.0, "residual.lambda_track: must be >= 0");
  }
  if (r.error_map.size() > 0) {
    require(r.error_map.rows() == d && r.error_map.cols() == nqd,
            "residual.error_map: wrong shape (expected action_dim x velocity_dim)");
  }
  require(r.task_weights.size() == nqd, "residual.task_weights: wrong dimension");
  require(r.task_weights.minCoeff() >= 0.0, "residual.task_weights: must be >= 0");

  const auto& g = cfg.gate;
  if (g.eps > 0.0 || g.eps_j.size() > 0) {
    // Only validate explicit values; non-positive eps means derive-from-limits.
    if (g.eps_j.size() > 0) {
      require(g.eps_j.size() == d, "gate.eps_j: wrong dimension");
      require(g.eps_j.minCoeff() > 0.0, "gate.eps_j: must be > 0");
    }
  }
  require(g.kappa >= 0.0 && g.kappa < 1.0, "gate.kappa: must satisfy 0 <= kappa < 1");
  require(g.xi > 0.0, "gate.xi: must be > 0");
  require(g.gamma_min >= 0.0 && g.gamma_min <= g.gamma_max,
          "gate.gamma_min/gamma_max: must satisfy 0 <= gamma_min <= gamma_max");
  require(g.beta_min <= g.beta_max, "gate.beta_min/beta_max: must satisfy beta_min <= beta_max");
  require(g.e_bar.size() == d, "gate.e_bar: wrong dimension");
  require(g.rho_b > 0.0 && g.rho_b < 1.0, "gate.rho_b: must satisfy 0 < rho_b < 1");
  require(g.b_max >= 0.0, "gate.b_max: must be >= 0");
  require(g.alpha_b >= 0.0, "gate.alpha_b: must be >= 0");
  require(g.alpha_j > 0.0 && g.alpha_j <= 1.0, "gate.alpha_j: must satisfy 0 < alpha_j <= 1");
  require(g.act_drop_frac > 0.0, "gate.act_drop_frac: must be > 0");
  require(g.act_steps >= 1, "gate.act_steps: must be >= 1");

  const auto& ep = cfg.episode;
  require(ep.horizon > ep.fault_step, "episode.horizon: must exceed fault_step");
  require(ep.fault_step >= 0, "episode.fault_step: must be >= 0");
  require(ep.calib_begin >= 0 && ep.calib_end > ep.calib_begin,
          "episode.calib_window: must satisfy 0 <= begin < end");
  require(ep.calib_end <= ep.fault_step,
          "episode.calib_window: must end by the fault step");
  require(!ep.seeds.empty(), "episode.seeds: must be non-empty");
  require(ep.delta_frac > 0.0, "episode.delta_frac: must be > 0");
  require(ep.ttr_frac > 0.0 && ep.ttr_frac <= 1.0,
          "episode.ttr_fraction: must satisfy 0 < frac <= 1");
  require(ep.ssr_window_frac > 0.0 && ep.ssr_window_frac < 1.0,
          "episode.ssr_window_frac: must satisfy 0 < frac < 1");

  if (cfg.shift.enabled) {
    require(cfg.shift.spec.severity > 0.0, "shift.severity: must be > 0");
    require(cfg.shift.teach_flip_channel < d,
            "shift.teach_flip_channel: out of range");
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  json plant;
  plant["kind"] = to_string(cfg.plant.kind);
  plant["dt"] = cfg.dt;
  json constants;
  switch (cfg.plant.kind) {
    case PlantKind::Pendulum: {
      const auto& c = cfg.plant.pendulum;
      constants = {{"mass", c.mass}, {"length", c.length},
                   {"gravity", c.gravity}, {"damping", c.damping}};
      break;
    }
    case PlantKind::CartPole: {
      const auto& c = cfg.plant.cartpole;
      constants = {{"cart_mass", c.cart_mass}, {"pole_mass", c.pole_mass},
                   {"pole_half_length", c.pole_half_length}, {"gravity", c.gravity},
                   {"cart_damping", c.cart_damping}, {"pivot_damping", c.pivot_damping}};
      break;
    }
    case PlantKind::Unicycle: {
      const auto& c = cfg.plant.unicycle;
      constants = {{"mass", c.mass}, {"inertia", c.inertia},
                   {"lin_damping", c.lin_damping}, {"ang_damping", c.ang_damping}};
      break;
    }
  }
  plant["constants"] = constants;
  plant["init_ball"] = {{"q", vector_to_json(cfg.init_ball_q)},
                        {"qdot", vector_to_json(cfg.init_ball_qdot)}};
  plant["reference"] = {
      {"kind", cfg.reference.kind == ReferenceKind::Sine ? "sine" : "constant"},
      {"offset_q", vector_to_json(cfg.reference.offset_q)},
      {"offset_qdot", vector_to_json(cfg.reference.offset_qdot)},
      {"amp_q", vector_to_json(cfg.reference.amp_q)},
      {"amp_qdot", vector_to_json(cfg.reference.amp_qdot)},
      {"period_steps", cfg.reference.period_steps}};
  plant["reward"] = {{"w_q", vector_to_json(cfg.reward_weights.w_q)},
                     {"w_qdot", vector_to_json(cfg.reward_weights.w_qdot)},
                     {"action_cost", cfg.reward_weights.action_cost}};
  plant["dist_bound_nominal"] = cfg.dist_bound_nominal;
  j["plant"] = plant;

  json nominal;
  nominal["kind"] = cfg.nominal.kind == ControllerKind::PD ? "pd" : "lqr";
  if (cfg.nominal.kind == ControllerKind::PD) {
    nominal["kp"] = vector_to_json(cfg.nominal.kp);
    nominal["kd"] = vector_to_json(cfg.nominal.kd);
  } else {
    nominal["lqr"] = {{"q_diag", vector_to_json(cfg.nominal.lqr_q_diag)},
                      {"r_diag", vector_to_json(cfg.nominal.lqr_r_diag)},
                      {"iters", cfg.nominal.lqr_iters},
                      {"tol", cfg.nominal.lqr_tol}};
  }
  nominal["action_limits"] = vector_to_json(cfg.nominal.action_limits);
  j["nominal"] = nominal;

  json residual;
  residual["seed"] = cfg.residual.seed;
  residual["features"] = cfg.residual.features;
  residual["alpha_e"] = cfg.residual.alpha_e;
  residual["alpha_i"] = cfg.residual.alpha_i;
  residual["eta_fast"] = cfg.residual.eta_fast0;
  residual["eta_slow"] = cfg.residual.eta_slow;
  residual["lambda_fast"] = cfg.residual.lambda_fast;
  residual["lambda_slow"] = cfg.residual.lambda_slow;
  residual["w_max"] = cfg.residual.w_max;
  residual["include_position_error"] = cfg.residual.include_position_error;
  if (cfg.residual.lambda_track.size() > 0) {
    residual["lambda_track"] = vector_to_json(cfg.residual.lambda_track);
  }
  if (cfg.residual.error_map.size() > 0) {
    residual["error_map"] = matrix_to_json(cfg.residual.error_map);
  }
  residual["task_weights"] = vector_to_json(cfg.residual.task_weights);
  j["residual"] = residual;

  json gate;
  gate["eps"] = cfg.gate.eps;
  if (cfg.gate.eps_j.size() > 0) gate["eps_j"] = vector_to_json(cfg.gate.eps_j);
  gate["kappa"] = cfg.gate.kappa;
  gate["xi"] = cfg.gate.xi;
  gate["gamma_min"] = cfg.gate.gamma_min;
  gate["gamma_max"] = cfg.gate.gamma_max;
  gate["k_gamma"] = cfg.gate.k_gamma;
  gate["gamma_clip_from_zero"] = cfg.gate.gamma_clip_from_zero;
  gate["beta_min"] = cfg.gate.beta_min;
  gate["beta_max"] = cfg.gate.beta_max;
  gate["k_beta"] = cfg.gate.k_beta;
  gate["e_bar"] = vector_to_json(cfg.gate.e_bar);
  gate["beta_decay"] = cfg.gate.beta_decay;
  gate["b_max"] = cfg.gate.b_max;
  gate["rho_b"] = cfg.gate.rho_b;
  gate["alpha_b"] = cfg.gate.alpha_b;
  gate["eps_bar"] = cfg.gate.eps_bar;
  gate["alpha_j"] = cfg.gate.alpha_j;
  gate["act_drop_frac"] = cfg.gate.act_drop_frac;
  gate["act_steps"] = cfg.gate.act_steps;
  gate["plastic_when_inactive"] = cfg.gate.plastic_when_inactive;
  j["gate"] = gate;

  json episode;
  episode["horizon"] = cfg.episode.horizon;
  episode["fault_step"] = cfg.episode.fault_step;
  episode["calib_window"] = {cfg.episode.calib_begin, cfg.episode.calib_end};
  episode["seeds"] = cfg.episode.seeds;
  episode["method"] = to_string(cfg.episode.method);
  episode["delta_frac"] = cfg.episode.delta_frac;
  episode["ttr_fraction"] = cfg.episode.ttr_frac;
  episode["ssr_window_frac"] = cfg.episode.ssr_window_frac;
  j["episode"] = episode;

  if (cfg.shift.enabled) {
    j["shift"] = {{"family", to_string(cfg.shift.spec.family)},
                  {"severity", cfg.shift.spec.severity},
                  {"teach_flip_channel", cfg.shift.teach_flip_channel},
                  {"enabled", true}};
  }

  return j.dump(2);
}

SweepConfig parse_sweep_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("sweep: invalid JSON: ") + e.what());
  }
  Section root(j, "sweep");
  SweepConfig sweep;
  std::string family;
  root.get("family", family);
  if (!family.empty()) sweep.family = shift_family_from_string(family);
  root.get("severities", sweep.severities);
  root.get("trials", sweep.trials);
  if (const json* v = root.take("methods")) {
    sweep.methods.clear();
    for (const auto& m : *v) {
      sweep.methods.push_back(method_from_string(m.get<std::string>()));
    }
  }
  root.finish();
  require(!sweep.severities.empty(), "sweep.severities: must be non-empty");
  for (double s : sweep.severities) {
    require(s > 0.0, "sweep.severities: must be > 0");
  }
  require(sweep.trials >= 1, "sweep.trials: must be >= 1");
  require(!sweep.methods.empty(), "sweep.methods: must be non-empty");
  return sweep;
}

SweepConfig parse_sweep(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("sweep: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_text(buffer.str());
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace sagres
