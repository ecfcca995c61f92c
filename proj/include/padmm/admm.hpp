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
// Consensus-ADMM engine with multi-step noisy linearized primal updates.
// Each outer iteration runs l inner primal steps per node, broadcasts the
// average of the l noisy iterates, and applies a dual update.  run() executes
// nodes in parallel with OpenMP; run_reference() is an independently coded
// serial orchestration kept for testing — both produce bitwise-identical
// results for the same (config, seed).

#ifndef PADMM_ADMM_HPP_
#define PADMM_ADMM_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "padmm/dataset.hpp"
#include "padmm/objective.hpp"
#include "padmm/privacy.hpp"
#include "padmm/topology.hpp"

namespace padmm {

// Engine knobs.  When noise_enabled, (t, l) must match the privacy budget's.
struct AdmmConfig {
  double rho = 0.0;       // penalty ρ > 0
  int t = 1;              // outer iterations
  int l = 1;              // inner updates per outer iteration
  bool noise_enabled = true;
  bool projection_enabled = true;  // clamp iterates to the domain ball
  int minibatch_size = 0;          // 0 = full-batch gradients

  void validate() const;  // throws ParameterError on bad ranges
};

// Per-node mutable state.  neighbor_broadcasts is ordered like the graph's
// sorted neighbor list; all vectors share the model dimension d.
struct NodeState {
  ModelVector w_inner;          // current noisy inner iterate
  ModelVector w_prev_broadcast;  // this node's previous broadcast
  std::vector<ModelVector> neighbor_broadcasts;  // neighbors' previous broadcasts
  ModelVector dual;             // γ_i, zero-initialized
  std::vector<ModelVector> inner_history;  // the l iterates of the current outer iteration

  // Running mean of all inner iterates seen so far (the averaged output ŵ_i),
  // updated incrementally to avoid storing t·l vectors.
  ModelVector output_average;
  long long output_count = 0;

  ModelVector scratch;  // gradient workspace, reused across steps
};

// Zeroed state for a node of the given degree.
NodeState make_node_state(int dim, int degree);

// Approximation parameter η evaluated at outer index k and inner index
// r_plus_1 (both 1-based):
//   η = (sqrt(2·k·r⁺)/D) · sqrt(c2²/n² + 8·d·c0²·c1²·t·l·ln(1.25/δ)/(ε²·m_i²)),
// with the second (noise) term dropped when noise is disabled.  Strictly
// increasing in k and r_plus_1.
double eta(int k, int r_plus_1, int dim, int m_i, const ObjectiveSpec& spec,
           const AdmmConfig& cfg, const PrivacyBudget& budget);

// One inner primal step for a node at outer iteration k (1-based) and inner
// index r (0-based), producing the (r+1)-th inner iterate:
//   w ← [−∇L_i(w̃) + 2γ_i + ρ·Σ_j w̃_j_prev + ρ·deg·w̃_i_prev + η·w̃] / (2ρ·deg + η),
// then Gaussian perturbation with std = sensitivity·σ when noise is enabled,
// then optional projection onto the domain ball.  Appends the result to
// inner_history and advances w_inner.  minibatch_rng is required only when
// cfg.minibatch_size > 0.
void primal_inner_update(NodeState& state, int k, int r, const AdmmConfig& cfg,
                         const PrivacyBudget& budget, const NodePartition& part,
                         const ObjectiveSpec& spec, std::mt19937_64& noise_rng,
                         std::mt19937_64* minibatch_rng = nullptr);

// Consumes the l iterates of inner_history: returns their arithmetic mean
// (the iteration's broadcast) and clears the history.  w_inner keeps its
// final value, which seeds the next outer iteration's inner loop.
ModelVector finish_outer_iteration(NodeState& state, int l);

// Dual step γ_i ← γ_i − (ρ/2)·Σ_j (w̃_i − w̃_j) over the current iteration's
// broadcasts, given in the node's sorted neighbor order.
void dual_update(NodeState& state, const ModelVector& own_broadcast,
                 const std::vector<ModelVector>& neighbor_broadcasts, double rho);

// Mean gradient over a with-replacement sample of batch_size points, plus the
// regularizer term; unbiased for local_gradient.
void minibatch_gradient(const NodePartition& part, const ObjectiveSpec& spec,
                        const ModelVector& w, int batch_size, std::mt19937_64& rng,
                        ModelVector& out);

// Snapshot handed to the per-iteration observer after iteration k completes.
struct IterationView {
  int k = 0;  // 1-based outer iteration index
  const std::vector<ModelVector>& outputs;     // running averages ŵ_i
  const std::vector<ModelVector>& broadcasts;  // this iteration's broadcasts
  const std::vector<ModelVector>& duals;       // γ_i after the dual step
};
using IterationObserver = std::function<void(const IterationView&)>;

struct RunResult {
  std::vector<ModelVector> output_models;     // averaged outputs ŵ_i
  std::vector<ModelVector> final_broadcasts;  // w̃_i at the last iteration
  std::vector<ModelVector> duals;             // final γ_i
  double max_dual_sum_norm = 0.0;  // max over k of ‖Σ_i γ_i‖ (should stay ≈ 0)
  long long noisy_steps = 0;       // Gaussian perturbations actually applied
};

// Executes t outer iterations of the full protocol.  Per-node inner loops run
// in parallel (OpenMP); broadcasts and dual updates are synchronized between
// iterations.  Deterministic: per-(node, k, r) RNG substreams and fixed
// summation order make the output independent of thread count.
RunResult run(const Graph& g, const std::vector<NodePartition>& parts,
              const ObjectiveSpec& spec, const AdmmConfig& cfg,
              const PrivacyBudget& budget, std::uint64_t seed,
              const IterationObserver& observer = {});

// Plain serial orchestration of the same protocol, written independently of
// run()'s buffer reuse and scheduling.  Must agree with run() bitwise.
RunResult run_reference(const Graph& g, const std::vector<NodePartition>& parts,
                        const ObjectiveSpec& spec, const AdmmConfig& cfg,
                        const PrivacyBudget& budget, std::uint64_t seed,
                        const IterationObserver& observer = {});

}  // namespace padmm

#endif  // PADMM_ADMM_HPP_
