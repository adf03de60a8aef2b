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

#include "sagres/commands.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

#include "sagres/error.hpp"
#include "sagres/harness.hpp"
#include "sagres/io.hpp"

namespace sagres {

namespace {

namespace fs = std::filesystem;

void apply_overrides(ExperimentConfig& cfg, const CommandOverrides& overrides) {
  if (overrides.seeds) {
    cfg.episode.seeds = *overrides.seeds;
  }
  if (overrides.method) {
    cfg.episode.method = method_from_string(*overrides.method);
  }
  validate(cfg);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  }
}

int run_guarded(const CommandOverrides& overrides,
                const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitBlowup;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace

int cmd_run(const std::string& config_path, const std::string& out_dir,
            const CommandOverrides& overrides) {
  return run_guarded(overrides, [&] {
    const std::string config_text = read_file(config_path);
    ExperimentConfig cfg = parse_config_text(config_text);
    apply_overrides(cfg, overrides);
    ensure_dir(out_dir);

    const Setup setup = build_setup(cfg);
    const auto& seeds = cfg.episode.seeds;
    std::vector<EpisodeResult> results(seeds.size());
    std::vector<double> episode_seconds(seeds.size());

    parallel_for(static_cast<int>(seeds.size()), [&](int i) {
      const auto t0 = std::chrono::steady_clock::now();
      results[i] = run_episode(setup, seeds[i]);
      const auto t1 = std::chrono::steady_clock::now();
      episode_seconds[i] = std::chrono::duration<double>(t1 - t0).count();
    });

    ManifestInfo manifest;
    manifest.config_hash = fnv1a64(config_text);
    manifest.seeds = seeds;
    manifest.tool_version = kToolVersion;
    manifest.episode_seconds = episode_seconds;
    manifest.resolved_config_json = config_to_json(setup.cfg);

    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const std::string path =
          (fs::path(out_dir) / ("trace_" + std::to_string(seeds[i]) + ".csv"))
              .string();
      write_file(path, trace_to_csv(results[i].trace));
      manifest.output_paths.push_back(path);
    }
    const std::string metrics_path = (fs::path(out_dir) / "metrics.json").string();
    write_file(metrics_path, metrics_to_json(seeds, results));
    manifest.output_paths.push_back(metrics_path);
    write_file((fs::path(out_dir) / "manifest.json").string(),
               manifest_to_json(manifest));

    if (!overrides.quiet) {
      const AggregateMetrics agg = [&] {
        std::vector<RecoveryMetrics> all;
        for (const auto& r : results) all.push_back(r.metrics);
        return aggregate(all);
      }();
      std::cout << "episodes: " << seeds.size()
                << "  ttr50 median: " << format_double(agg.ttr.median)
                << "  ssr mean: " << format_double(agg.ssr.mean)
                << "  auc mean: " << format_double(agg.auc.mean) << "\n";
    }
  });
}

int cmd_sweep(const std::string& config_path, const std::string& sweep_path,
              const std::string& out_dir, const CommandOverrides& overrides) {
  return run_guarded(overrides, [&] {
    const std::string config_text = read_file(config_path);
    const std::string sweep_text = read_file(sweep_path);
    ExperimentConfig cfg = parse_config_text(config_text);
    apply_overrides(cfg, overrides);
    const SweepConfig sweep = parse_sweep_text(sweep_text);
    ensure_dir(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<SweepRow> rows = severity_sweep(cfg, sweep);
    const auto t1 = std::chrono::steady_clock::now();

    ManifestInfo manifest;
    manifest.config_hash = fnv1a64(config_text + "\n" + sweep_text);
    manifest.tool_version = kToolVersion;
    manifest.episode_seconds = {std::chrono::duration<double>(t1 - t0).count()};
    {
      const Setup setup = build_setup(cfg);
      manifest.resolved_config_json = config_to_json(setup.cfg);
    }

    const std::string long_path = (fs::path(out_dir) / "sweep_long.csv").string();
    const std::string agg_path = (fs::path(out_dir) / "sweep_agg.csv").string();
    write_file(long_path, sweep_to_csv(rows));
    write_file(agg_path, sweep_aggregate_to_csv(rows));
    manifest.output_paths = {long_path, agg_path};
    write_file((fs::path(out_dir) / "manifest.json").string(),
               manifest_to_json(manifest));

    if (!overrides.quiet) {
      std::cout << "sweep cells: " << rows.size() << "  rows: "
                << rows.size() * metric_names().size() << "\n";
    }
  });
}

int cmd_ablate(const std::string& config_path, const std::string& out_dir,
               const CommandOverrides& overrides) {
  return run_guarded(overrides, [&] {
    const std::string config_text = read_file(config_path);
    ExperimentConfig cfg = parse_config_text(config_text);
    apply_overrides(cfg, overrides);
    ensure_dir(out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<AblationRow> rows = ablation_suite(cfg);
    const auto t1 = std::chrono::steady_clock::now();

    ManifestInfo manifest;
    manifest.config_hash = fnv1a64(config_text);
    manifest.seeds = cfg.episode.seeds;
    manifest.tool_version = kToolVersion;
    manifest.episode_seconds = {std::chrono::duration<double>(t1 - t0).count()};
    {
      const Setup setup = build_setup(cfg);
      manifest.resolved_config_json = config_to_json(setup.cfg);
    }

    const std::string path = (fs::path(out_dir) / "ablation.csv").string();
    write_file(path, ablation_to_csv(rows));
    manifest.output_paths = {path};
    write_file((fs::path(out_dir) / "manifest.json").string(),
               manifest_to_json(manifest));

    if (!overrides.quiet) {
      std::cout << "ablation episodes: " << rows.size() << "\n";
    }
  });
}

int cmd_validate(const std::string& config_path,
                 const CommandOverrides& overrides) {
  return run_guarded(overrides, [&] {
    ExperimentConfig cfg = parse_config(config_path);
    apply_overrides(cfg, overrides);
    const Setup setup = build_setup(cfg);
    if (!overrides.quiet) {
      std::cout << config_to_json(setup.cfg) << "\n";
    }
  });
}

}  // namespace sagres
