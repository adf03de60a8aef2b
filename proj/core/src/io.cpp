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

#include "sagres/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "sagres/error.hpp"

namespace sagres {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return std::string(buf);
}

std::string trace_to_csv(const EpisodeTrace& trace) {
  std::ostringstream out;
  out << "step,reward,J_bar,u_norm,c,gamma,b,eta_f,active,dist_to_ref\n";
  for (int t = 0; t < trace.horizon; ++t) {
    out << t << ',' << format_double(trace.rewards[t]) << ','
        << format_double(trace.j_bar[t]) << ','
        << format_double(trace.u_norm[t]) << ','
        << format_double(trace.cosine[t]) << ','
        << format_double(trace.gamma[t]) << ','
        << format_double(trace.boost[t]) << ','
        << format_double(trace.eta_f[t]) << ','
        << static_cast<int>(trace.active[t]) << ','
        << format_double(trace.dist[t]) << '\n';
  }
  return out.str();
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {"t_delta", "ttr50", "auc",
                                                 "ssr", "total_return"};
  return names;
}

double metric_value(const RecoveryMetrics& m, const std::string& name) {
  if (name == "t_delta") return static_cast<double>(m.t_delta);
  if (name == "ttr50") return static_cast<double>(m.ttr);
  if (name == "auc") return m.auc;
  if (name == "ssr") return m.ssr;
  if (name == "total_return") return m.total_return;
  throw ConfigError("unknown metric '" + name + "'");
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "family,severity,method,seed,metric,value\n";
  for (const auto& row : rows) {
    for (const auto& name : metric_names()) {
      out << to_string(row.family) << ',' << format_double(row.severity) << ','
          << to_string(row.method) << ',' << row.seed << ',' << name << ','
          << format_double(metric_value(row.metrics, name)) << '\n';
    }
  }
  return out.str();
}

namespace {

struct GroupStats {
  std::vector<double> values;
  int censored = 0;
};

MetricSummary summarize_group(GroupStats& g) {
  MetricSummary s;
  s.censored = g.censored;
  const int n = static_cast<int>(g.values.size());
  double sum = 0.0;
  for (double v : g.values) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : g.values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  std::sort(g.values.begin(), g.values.end());
  s.median = n % 2 == 1 ? g.values[n / 2]
                        : 0.5 * (g.values[n / 2 - 1] + g.values[n / 2]);
  return s;
}

}  // namespace

std::string sweep_aggregate_to_csv(const std::vector<SweepRow>& rows) {
  // Keyed map keeps emission order independent of completion order.
  std::map<std::tuple<std::string, double, std::string, std::string>, GroupStats>
      groups;
  for (const auto& row : rows) {
    for (const auto& name : metric_names()) {
      auto key = std::make_tuple(to_string(row.family), row.severity,
                                 to_string(row.method), name);
      auto& g = groups[key];
      g.values.push_back(metric_value(row.metrics, name));
      if (name == "t_delta" && row.metrics.t_delta_censored) ++g.censored;
      if (name == "ttr50" && row.metrics.ttr_censored) ++g.censored;
    }
  }
  std::ostringstream out;
  out << "family,severity,method,metric,mean,std,median,censored\n";
  for (auto& [key, g] : groups) {
    const MetricSummary s = summarize_group(g);
    out << std::get<0>(key) << ',' << format_double(std::get<1>(key)) << ','
        << std::get<2>(key) << ',' << std::get<3>(key) << ','
        << format_double(s.mean) << ',' << format_double(s.stddev) << ','
        << format_double(s.median) << ',' << s.censored << '\n';
  }
  return out.str();
}

std::string ablation_to_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream out;
  out << "variant,metric,mean,std,median,censored\n";
  for (const auto& variant : ablation_variants()) {
    for (const auto& name : metric_names()) {
      GroupStats g;
      for (const auto& row : rows) {
        if (row.variant != variant) continue;
        g.values.push_back(metric_value(row.metrics, name));
        if (name == "t_delta" && row.metrics.t_delta_censored) ++g.censored;
        if (name == "ttr50" && row.metrics.ttr_censored) ++g.censored;
      }
      if (g.values.empty()) continue;
      const MetricSummary s = summarize_group(g);
      out << variant << ',' << name << ',' << format_double(s.mean) << ','
          << format_double(s.stddev) << ',' << format_double(s.median) << ','
          << s.censored << '\n';
    }
  }
  return out.str();
}

namespace {

nlohmann::json metrics_json_object(const RecoveryMetrics& m) {
  nlohmann::json j;
  j["t_delta"] = m.t_delta;
  j["t_delta_censored"] = m.t_delta_censored;
  j["ttr50"] = m.ttr;
  j["ttr50_censored"] = m.ttr_censored;
  j["auc"] = m.auc;
  j["ssr"] = m.ssr;
  j["total_return"] = m.total_return;
  return j;
}

nlohmann::json summary_json(const MetricSummary& s) {
  return {{"mean", s.mean}, {"std", s.stddev}, {"median", s.median},
          {"censored", s.censored}};
}

/// Rounds every number through the fixed 9-significant-digit formatting so
/// JSON output is as diff-stable as the CSVs.
void round_numbers(nlohmann::json& j) {
  if (j.is_number_float()) {
    j = std::strtod(format_double(j.get<double>()).c_str(), nullptr);
  } else if (j.is_object() || j.is_array()) {
    for (auto& child : j) round_numbers(child);
  }
}

}  // namespace

std::string metrics_to_json(const std::vector<std::uint64_t>& seeds,
                            const std::vector<EpisodeResult>& results) {
  nlohmann::json j;
  nlohmann::json per_seed = nlohmann::json::array();
  std::vector<RecoveryMetrics> all;
  for (std::size_t i = 0; i < results.size(); ++i) {
    nlohmann::json entry = metrics_json_object(results[i].metrics);
    entry["seed"] = seeds[i];
    entry["j_star"] = results[i].j_star;
    per_seed.push_back(entry);
    all.push_back(results[i].metrics);
  }
  j["episodes"] = per_seed;
  const AggregateMetrics agg = aggregate(all);
  j["aggregate"] = {{"t_delta", summary_json(agg.t_delta)},
                    {"ttr50", summary_json(agg.ttr)},
                    {"auc", summary_json(agg.auc)},
                    {"ssr", summary_json(agg.ssr)},
                    {"total_return", summary_json(agg.total_return)},
                    {"count", agg.count}};
  round_numbers(j);
  return j.dump(2);
}

std::string manifest_to_json(const ManifestInfo& info) {
  nlohmann::json j;
  char hash[20];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(info.config_hash));
  j["config_hash"] = std::string(hash);
  j["seeds"] = info.seeds;
  j["tool_version"] = info.tool_version;
  j["outputs"] = info.output_paths;
  j["episode_seconds"] = info.episode_seconds;
  j["resolved_config"] = nlohmann::json::parse(info.resolved_config_json);
  return j.dump(2);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << contents;
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace sagres
