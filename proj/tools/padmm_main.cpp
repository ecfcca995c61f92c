// Copyright 2026 The padmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end.  Subcommands:
//   run         execute a single (epsilon, l, seed) cell
//   sweep       execute the full (epsilon, l, seed) grid
//   oracle      compute and persist the centralized optimum certificate
//   audit       print privacy audit reports for every (epsilon, l) pair
//   preprocess  turn raw adult files into the preprocessed cache
//
// Exit codes: 0 success, 2 configuration/parse error, 3 runtime or
// convergence error, 4 privacy budget exceeded.

#include <omp.h>

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "padmm/config.hpp"
#include "padmm/dataset.hpp"
#include "padmm/errors.hpp"
#include "padmm/metrics.hpp"
#include "padmm/privacy.hpp"
#include "padmm/runner.hpp"

namespace {

int do_oracle(const padmm::ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  padmm::DataBundle data = padmm::prepare_data(cfg);
  padmm::CentralizedOptimum opt =
      padmm::solve_centralized(data.parts, data.spec, cfg.oracle_tol);
  const std::uint64_t key = padmm::optimum_cache_key(data.parts, data.spec, cfg.oracle_tol);

  char name[64];
  std::snprintf(name, sizeof(name), "oracle_%016" PRIx64 ".txt", key);
  char head[96];
  std::snprintf(head, sizeof(head), "objective_value=%.17g\ngradient_norm=%.17g\n",
                opt.objective_value, opt.gradient_norm);
  std::string text = std::string(head) + "w_star=";
  char buf[32];
  for (std::size_t x = 0; x < opt.w_star.size(); ++x) {
    std::snprintf(buf, sizeof(buf), "%.17g", opt.w_star[x]);
    text += (x ? " " : "");
    text += buf;
  }
  text += "\n";
  padmm::write_text_atomic(out_dir / name, text);
  std::printf("oracle: objective=%.12g gradient_norm=%.3g dim=%zu -> %s\n",
              opt.objective_value, opt.gradient_norm, opt.w_star.size(),
              (out_dir / name).string().c_str());
  return 0;
}

int do_audit(const padmm::ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (double eps : cfg.epsilons) {
    for (int l : cfg.l_values) {
      padmm::PrivacyBudget budget =
          padmm::PrivacyBudget::make(eps, cfg.delta, cfg.t, l, cfg.c0);
      const std::string text = padmm::audit_total_budget(budget).to_text();
      char name[64];
      std::snprintf(name, sizeof(name), "audit_eps%g_l%d.txt", eps, l);
      padmm::write_text_atomic(out_dir / name, text);
      std::printf("# %s\n%s", name, text.c_str());
    }
  }
  return 0;
}

int do_preprocess(const padmm::ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  padmm::Dataset data = padmm::load_adult(cfg.adult_data, cfg.adult_test);
  double max_norm = 0.0;
  for (const padmm::Sample& s : data.samples) {
    double norm_sq = 0.0;
    for (double x : s.features) norm_sq += x * x;
    max_norm = std::max(max_norm, std::sqrt(norm_sq));
  }
  const std::filesystem::path cache = out_dir / "adult.cache";
  padmm::write_cache(data, cache);
  std::printf("preprocess: samples=%zu d=%d max_row_norm=%.15g -> %s\n", data.size(),
              data.dim, max_norm, cache.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private distributed ADMM experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_override;
  int workers = 1;
  long long seed_offset = 0;
  app.add_option("--config", config_path, "experiment config file")->required();
  app.add_option("--out", out_override, "output directory (default: config out_dir)");
  app.add_option("--workers", workers, "parallel workers (sweep cells / engine threads)");
  app.add_option("--seed-offset", seed_offset, "added to every seed in the config");

  CLI::App* cmd_run = app.add_subcommand("run", "single cell");
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "full (epsilon, l, seed) grid");
  CLI::App* cmd_oracle = app.add_subcommand("oracle", "centralized optimum certificate");
  CLI::App* cmd_audit = app.add_subcommand("audit", "privacy audit per (epsilon, l)");
  CLI::App* cmd_preprocess = app.add_subcommand("preprocess", "adult raw files -> cache");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    padmm::ExperimentConfig cfg = padmm::parse_config(config_path);
    for (std::uint64_t& s : cfg.seeds) s += static_cast<std::uint64_t>(seed_offset);
    const std::filesystem::path out_dir =
        out_override.empty() ? std::filesystem::path(cfg.out_dir)
                             : std::filesystem::path(out_override);

    if (cmd_run->parsed()) {
      if (workers > 0) omp_set_num_threads(workers);
      padmm::run_single(cfg, out_dir);
    } else if (cmd_sweep->parsed()) {
      padmm::run_sweep(cfg, out_dir, workers);
    } else if (cmd_oracle->parsed()) {
      return do_oracle(cfg, out_dir);
    } else if (cmd_audit->parsed()) {
      return do_audit(cfg, out_dir);
    } else if (cmd_preprocess->parsed()) {
      return do_preprocess(cfg, out_dir);
    }
    return 0;
  } catch (const padmm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const padmm::BudgetExceededError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const padmm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
