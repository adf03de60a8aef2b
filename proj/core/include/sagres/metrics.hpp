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

#ifndef SAGRES_METRICS_HPP_
#define SAGRES_METRICS_HPP_

#include <cstdint>
#include <vector>

namespace sagres {

/// Per-step record of one episode. All columns have length horizon.
struct EpisodeTrace {
  std::vector<double> rewards;   // raw instantaneous reward
  std::vector<double> j_bar;     // smoothed performance
  std::vector<double> u_norm;    // norm of the injected correction
  std::vector<double> cosine;    // alignment diagnostic
  std::vector<double> gamma;
  std::vector<double> boost;
  std::vector<double> eta_f;     // effective fast learning rate
  std::vector<double> dist;      // weighted distance to the reference
  std::vector<std::uint8_t> active;
  int tau = 0;
  int horizon = 0;
  double j_star = 0.0;           // calibrated nominal level
};

/// Recovery summary of one episode. Step counts are censored at
/// horizon - tau when the threshold is never crossed.
struct RecoveryMetrics {
  int t_delta = 0;
  bool t_delta_censored = false;
  int ttr = 0;
  bool ttr_censored = false;
  double auc = 0.0;
  double ssr = 0.0;
  double total_return = 0.0;
};

/// First t >= tau with j_bar >= j_star - delta, reported relative to tau.
int recovery_time(const EpisodeTrace& trace, double j_star, double delta,
                  bool* censored);

/// Steps to win back `frac` of the post-fault drop. The drop is measured
/// against the global post-fault minimum and the search starts at the first
/// step attaining it. Returns 0 when there is no drop.
int ttr_fraction(const EpisodeTrace& trace, double j_star, double frac,
                 bool* censored);

/// Mean of j_bar / j_star over [tau, horizon). Values above 1 indicate
/// post-fault performance exceeding the calibrated nominal level.
double recovery_auc(const EpisodeTrace& trace, double j_star);

/// Mean of j_bar over the final window_frac of the episode, divided by
/// j_star.
double steady_state_ratio(const EpisodeTrace& trace, double j_star,
                          double window_frac);

/// Sum of raw rewards over the full horizon.
double total_return(const EpisodeTrace& trace);

/// Computes all recovery metrics for one trace with the given thresholds.
RecoveryMetrics compute_metrics(const EpisodeTrace& trace, double j_star,
                                double delta, double ttr_frac,
                                double ssr_window_frac);

struct MetricSummary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double median = 0.0;
  int censored = 0;
};

struct AggregateMetrics {
  MetricSummary t_delta;
  MetricSummary ttr;
  MetricSummary auc;
  MetricSummary ssr;
  MetricSummary total_return;
  int count = 0;
};

/// Per-metric mean, sample std, median, and censoring counts. Throws on an
/// empty list.
AggregateMetrics aggregate(const std::vector<RecoveryMetrics>& metrics);

}  // namespace sagres

#endif  // SAGRES_METRICS_HPP_
