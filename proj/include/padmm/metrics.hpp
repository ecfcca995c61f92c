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
// Utility metrics for a run: empirical risk against a high-precision
// centralized optimum, feasibility violation, consensus error, and held-out
// classification accuracy.

#ifndef PADMM_METRICS_HPP_
#define PADMM_METRICS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "padmm/admm.hpp"
#include "padmm/dataset.hpp"
#include "padmm/objective.hpp"
#include "padmm/topology.hpp"

namespace padmm {

// One row of the per-iteration metrics stream.
struct RunRecord {
  int k = 0;                   // outer iteration (1-based)
  double total_risk = 0.0;     // Σ_i L_i(ŵ_i)
  double excess_risk = 0.0;    // Σ_i [L_i(ŵ_i) − L_i(w*)]
  double feasibility = 0.0;    // β · Σ_i Σ_{j∈N_i} ‖ŵ_i − ŵ_j‖
  double consensus_error = 0.0;  // max_i ‖ŵ_i − mean ŵ‖
  double accuracy = 0.0;       // fraction correct on the held-out split
};

// Minimizer of the centralized problem Σ_i L_i(w), with a gradient-norm
// certificate.
struct CentralizedOptimum {
  ModelVector w_star;
  double objective_value = 0.0;
  double gradient_norm = 0.0;
};

// Full-gradient descent with Armijo backtracking until ‖∇F‖ < tol.  Requires
// λ > 0 (strong convexity makes the minimizer unique).  Throws
// ConvergenceError with the achieved gradient norm if max_iters is exhausted.
CentralizedOptimum solve_centralized(const std::vector<NodePartition>& parts,
                                     const ObjectiveSpec& spec, double tol = 1e-8,
                                     long long max_iters = 2000000,
                                     const ModelVector* start = nullptr);

// Σ_i L_i(models[i]).
double total_risk(const std::vector<ModelVector>& models,
                  const std::vector<NodePartition>& parts, const ObjectiveSpec& spec);

// (excess_risk, feasibility).  Each undirected edge contributes twice to the
// feasibility sum, once per direction.
std::pair<double, double> utility_metric(const std::vector<ModelVector>& models,
                                         const ModelVector& w_star, double beta,
                                         const Graph& g,
                                         const std::vector<NodePartition>& parts,
                                         const ObjectiveSpec& spec);

// max_i ‖models[i] − mean(models)‖.
double consensus_error(const std::vector<ModelVector>& models);

// Fraction of test samples with sign(w̄ᵀa) = b where w̄ is the mean model;
// zero dot products count as incorrect.
double accuracy(const std::vector<ModelVector>& models, const Dataset& test_split);

// Content hash (FNV-1a over partition bytes and objective constants) used to
// key cached optima, so sweeps over (ε, l, seed) solve each dataset once.
std::uint64_t optimum_cache_key(const std::vector<NodePartition>& parts,
                                const ObjectiveSpec& spec, double tol);

// Thread-safe memo of solve_centralized results.
class OptimumCache {
 public:
  const CentralizedOptimum& get_or_solve(const std::vector<NodePartition>& parts,
                                         const ObjectiveSpec& spec, double tol = 1e-8);

 private:
  std::mutex mu_;
  std::map<std::uint64_t, CentralizedOptimum> memo_;
};

// Per-iteration observer that turns engine snapshots into RunRecords.  When
// evaluate_broadcasts is set, metrics are computed on the iteration's
// broadcasts instead of the running averaged outputs.
class RunRecorder {
 public:
  RunRecorder(const Graph& g, const std::vector<NodePartition>& parts,
              const ObjectiveSpec& spec, const CentralizedOptimum& optimum, double beta,
              const Dataset& test_split, bool evaluate_broadcasts = false);

  IterationObserver observer();
  const std::vector<RunRecord>& records() const { return records_; }

 private:
  const Graph& graph_;
  const std::vector<NodePartition>& parts_;
  ObjectiveSpec spec_;
  CentralizedOptimum optimum_;
  double beta_;
  const Dataset& test_split_;
  bool evaluate_broadcasts_;
  std::vector<RunRecord> records_;
};

// CSV with header "k,total_risk,excess_risk,feasibility,consensus_error,
// accuracy", one row per outer iteration, 17 significant digits.  Written to
// a temp file and renamed into place.
void write_run_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);

}  // namespace padmm

#endif  // PADMM_METRICS_HPP_
