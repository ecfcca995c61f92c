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

#include "padmm/runner.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>

#include "padmm/errors.hpp"
#include "padmm/privacy.hpp"

namespace padmm {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value
};

MeanStd mean_std(const std::vector<double>& xs) {
  // Constant data has sample std exactly 0; skip the two-pass formula, whose
  // rounded mean would otherwise leave an ulp-sized residual.
  const bool constant =
      !xs.empty() &&
      std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); });
  if (constant) {
    return MeanStd{xs.front(), 0.0};
  }
  MeanStd ms;
  for (double x : xs) ms.mean += x;
  ms.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - ms.mean) * (x - ms.mean);
    ms.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return ms;
}

int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

}  // namespace

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

DataBundle prepare_data(const ExperimentConfig& cfg) {
  cfg.validate();
  Graph graph = cfg.topology == "complete" ? Graph::complete(cfg.n)
                : cfg.topology == "ring"   ? Graph::ring(cfg.n)
                                           : Graph::from_edge_list_file(cfg.topology_file);

  Dataset all = cfg.dataset == "synthetic"
                    ? generate_synthetic(cfg.synthetic_samples, cfg.synthetic_dim,
                                         cfg.data_seed, cfg.label_noise)
                    : read_cache(cfg.adult_cache);
  auto [train, test] = split_train_test(all, cfg.data_seed, cfg.test_fraction);
  std::vector<NodePartition> parts = partition_even(train, graph, cfg.data_seed);
  ObjectiveSpec spec =
      ObjectiveSpec::make(cfg.lambda, graph.node_count(), cfg.domain_diameter, cfg.c2);
  const double beta = cfg.beta >= 0.0 ? cfg.beta : cfg.rho * graph.max_degree();

  return DataBundle{std::move(graph), std::move(train), std::move(test), std::move(parts),
                    spec, beta};
}

std::string cell_name(double epsilon, int l, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "eps%g_l%d_seed%llu", epsilon, l,
                static_cast<unsigned long long>(seed));
  return buf;
}

CellOutcome run_cell(const ExperimentConfig& cfg, const DataBundle& data,
                     const CentralizedOptimum& optimum, double epsilon, int l,
                     std::uint64_t seed, const std::filesystem::path& out_dir,
                     std::vector<RunRecord>* records_out) {
  PrivacyBudget budget = PrivacyBudget::make(epsilon, cfg.delta, cfg.t, l, cfg.c0);
  AdmmConfig acfg;
  acfg.rho = cfg.rho;
  acfg.t = cfg.t;
  acfg.l = l;
  acfg.noise_enabled = cfg.noise_enabled;
  acfg.projection_enabled = cfg.projection;
  acfg.minibatch_size = cfg.minibatch;

  RunRecorder recorder(data.graph, data.parts, data.spec, optimum, data.beta, data.test,
                       cfg.report_broadcasts);
  RunResult result =
      run(data.graph, data.parts, data.spec, acfg, budget, seed, recorder.observer());

  const std::string name = cell_name(epsilon, l, seed);
  write_run_csv(recorder.records(), out_dir / ("run_" + name + ".csv"));
  const std::string audit = cfg.noise_enabled
                                ? audit_total_budget(budget, result.noisy_steps).to_text()
                                : std::string("noise=off\n");
  write_text_atomic(out_dir / ("audit_" + name + ".txt"), audit);

  if (records_out != nullptr) *records_out = recorder.records();
  CellOutcome outcome;
  outcome.epsilon = epsilon;
  outcome.l = l;
  outcome.seed = seed;
  outcome.final_record = recorder.records().back();
  outcome.max_dual_sum_norm = result.max_dual_sum_norm;
  return outcome;
}

void run_single(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string echoed = cfg.echo();
  std::cout << "# effective configuration\n" << echoed;
  write_text_atomic(out_dir / "config_echo.txt", echoed);

  DataBundle data = prepare_data(cfg);
  CentralizedOptimum optimum = solve_centralized(data.parts, data.spec, cfg.oracle_tol);
  const CellOutcome out = run_cell(cfg, data, optimum, cfg.epsilons.front(),
                                   cfg.l_values.front(), cfg.seeds.front(), out_dir);

  const RunRecord& fin = out.final_record;
  std::printf("cell %s: total_risk=%.12g excess_risk=%.12g feasibility=%.12g "
              "consensus_error=%.12g accuracy=%.12g\n",
              cell_name(out.epsilon, out.l, out.seed).c_str(), fin.total_risk,
              fin.excess_risk, fin.feasibility, fin.consensus_error, fin.accuracy);
  std::cout << "outputs written to " << out_dir.string() << "\n";
}

void run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
               int workers) {
  std::filesystem::create_directories(out_dir);
  const std::string echoed = cfg.echo();
  std::cout << "# effective configuration\n" << echoed;
  write_text_atomic(out_dir / "config_echo.txt", echoed);

  DataBundle data = prepare_data(cfg);
  CentralizedOptimum optimum = solve_centralized(data.parts, data.spec, cfg.oracle_tol);

  struct Task {
    double epsilon;
    int l;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (double e : cfg.epsilons) {
    for (int l : cfg.l_values) {
      for (std::uint64_t s : cfg.seeds) tasks.push_back({e, l, s});
    }
  }

  std::vector<CellOutcome> outcomes(tasks.size());
  std::vector<std::exception_ptr> failures(tasks.size());
  const int nthreads = resolve_workers(workers);
  // Cells are independent; determinism is per cell, so scheduling order does
  // not matter.  Nested engine parallelism stays serial inside active
  // parallel sweeps.
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    try {
      outcomes[idx] = run_cell(cfg, data, optimum, tasks[idx].epsilon, tasks[idx].l,
                               tasks[idx].seed, out_dir);
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    if (!failures[idx]) continue;
    const std::string id =
        "sweep cell " + cell_name(tasks[idx].epsilon, tasks[idx].l, tasks[idx].seed) + ": ";
    try {
      std::rethrow_exception(failures[idx]);
    } catch (const BudgetExceededError& e) {
      throw BudgetExceededError(id + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError(id + e.what());
    } catch (const std::exception& e) {
      throw Error(id + e.what());
    }
  }

  // Aggregate: one row per (epsilon, l), metrics averaged over seeds.
  std::ostringstream agg;
  agg << "epsilon,l,seeds,total_risk_mean,total_risk_std,excess_risk_mean,excess_risk_std,"
         "feasibility_mean,feasibility_std,consensus_error_mean,consensus_error_std,"
         "accuracy_mean,accuracy_std\n";
  char buf[64];
  std::size_t idx = 0;
  for (double e : cfg.epsilons) {
    for (int l : cfg.l_values) {
      std::vector<double> risk, excess, feas, cons, acc;
      for (std::size_t s = 0; s < cfg.seeds.size(); ++s, ++idx) {
        const RunRecord& r = outcomes[idx].final_record;
        risk.push_back(r.total_risk);
        excess.push_back(r.excess_risk);
        feas.push_back(r.feasibility);
        cons.push_back(r.consensus_error);
        acc.push_back(r.accuracy);
      }
      const MeanStd ms_risk = mean_std(risk), ms_excess = mean_std(excess),
                    ms_feas = mean_std(feas), ms_cons = mean_std(cons),
                    ms_acc = mean_std(acc);
      std::snprintf(buf, sizeof(buf), "%.17g", e);
      agg << buf << ',' << l << ',' << cfg.seeds.size();
      for (double v : {ms_risk.mean, ms_risk.std, ms_excess.mean, ms_excess.std,
                       ms_feas.mean, ms_feas.std, ms_cons.mean, ms_cons.std, ms_acc.mean,
                       ms_acc.std}) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        agg << ',' << buf;
      }
      agg << '\n';
    }
  }
  write_text_atomic(out_dir / "aggregate.csv", agg.str());
  std::cout << "sweep finished: " << tasks.size() << " cells, aggregate at "
            << (out_dir / "aggregate.csv").string() << "\n";
}

}  // namespace padmm
