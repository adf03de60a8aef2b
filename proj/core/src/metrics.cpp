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

#include "sagres/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sagres/error.hpp"

namespace sagres {

int recovery_time(const EpisodeTrace& trace, double j_star, double delta,
                  bool* censored) {
  const double threshold = j_star - delta;
  for (int t = trace.tau; t < trace.horizon; ++t) {
    if (trace.j_bar[t] >= threshold) {
      if (censored) *censored = false;
      return t - trace.tau;
    }
  }
  if (censored) *censored = true;
  return trace.horizon - trace.tau;
}

int ttr_fraction(const EpisodeTrace& trace, double j_star, double frac,
                 bool* censored) {
  if (censored) *censored = false;

  int t_min = trace.tau;
  double v_min = trace.j_bar[trace.tau];
  for (int t = trace.tau; t < trace.horizon; ++t) {
    if (trace.j_bar[t] < v_min) {
      v_min = trace.j_bar[t];
      t_min = t;
    }
  }

  const double drop = j_star - v_min;
  if (drop <= 0.0) {
    return 0;
  }

  const double threshold = j_star - (1.0 - frac) * drop;
  for (int t = t_min; t < trace.horizon; ++t) {
    if (trace.j_bar[t] >= threshold) {
      return t - trace.tau;
    }
  }
  if (censored) *censored = true;
  return trace.horizon - trace.tau;
}

double recovery_auc(const EpisodeTrace& trace, double j_star) {
  double sum = 0.0;
  for (int t = trace.tau; t < trace.horizon; ++t) {
    sum += trace.j_bar[t];
  }
  return sum / (static_cast<double>(trace.horizon - trace.tau) * j_star);
}

double steady_state_ratio(const EpisodeTrace& trace, double j_star,
                          double window_frac) {
  const int window = std::max(
      1, static_cast<int>(window_frac * static_cast<double>(trace.horizon)));
  double sum = 0.0;
  for (int t = trace.horizon - window; t < trace.horizon; ++t) {
    sum += trace.j_bar[t];
  }
  return sum / (static_cast<double>(window) * j_star);
}

double total_return(const EpisodeTrace& trace) {
  double sum = 0.0;
  for (int t = 0; t < trace.horizon; ++t) {
    sum += trace.rewards[t];
  }
  return sum;
}

RecoveryMetrics compute_metrics(const EpisodeTrace& trace, double j_star,
                                double delta, double ttr_frac,
                                double ssr_window_frac) {
  RecoveryMetrics m;
  m.t_delta = recovery_time(trace, j_star, delta, &m.t_delta_censored);
  m.ttr = ttr_fraction(trace, j_star, ttr_frac, &m.ttr_censored);
  m.auc = recovery_auc(trace, j_star);
  m.ssr = steady_state_ratio(trace, j_star, ssr_window_frac);
  m.total_return = total_return(trace);
  return m;
}

namespace {

MetricSummary summarize(std::vector<double> values, int censored) {
  MetricSummary s;
  s.censored = censored;
  const int n = static_cast<int>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;

  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;

  std::sort(values.begin(), values.end());
  if (n % 2 == 1) {
    s.median = values[n / 2];
  } else {
    s.median = 0.5 * (values[n / 2 - 1] + values[n / 2]);
  }
  return s;
}

}  // namespace

AggregateMetrics aggregate(const std::vector<RecoveryMetrics>& metrics) {
  if (metrics.empty()) {
    throw ConfigError("aggregate: empty metrics list");
  }
  std::vector<double> t_delta, ttr, auc, ssr, total;
  int t_delta_censored = 0;
  int ttr_censored = 0;
  for (const auto& m : metrics) {
    t_delta.push_back(static_cast<double>(m.t_delta));
    ttr.push_back(static_cast<double>(m.ttr));
    auc.push_back(m.auc);
    ssr.push_back(m.ssr);
    total.push_back(m.total_return);
    t_delta_censored += m.t_delta_censored ? 1 : 0;
    ttr_censored += m.ttr_censored ? 1 : 0;
  }
  AggregateMetrics agg;
  agg.t_delta = summarize(std::move(t_delta), t_delta_censored);
  agg.ttr = summarize(std::move(ttr), ttr_censored);
  agg.auc = summarize(std::move(auc), 0);
  agg.ssr = summarize(std::move(ssr), 0);
  agg.total_return = summarize(std::move(total), 0);
  agg.count = static_cast<int>(metrics.size());
  return agg;
}

}  // namespace sagres
