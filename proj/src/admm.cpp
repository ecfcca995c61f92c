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

#include "padmm/admm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "padmm/errors.hpp"
#include "padmm/rng.hpp"
#include "padmm/vec.hpp"

namespace padmm {

namespace {

// Welford-style fold of the node's current inner iterate into the running
// output average.  Shared by run() and run_reference() so both orchestrations
// perform the identical arithmetic sequence.
void fold_output_average(NodeState& state) {
  state.output_count += 1;
  const double inv = 1.0 / static_cast<double>(state.output_count);
  for (std::size_t x = 0; x < state.output_average.size(); ++x) {
    state.output_average[x] += (state.w_inner[x] - state.output_average[x]) * inv;
  }
}

void check_run_inputs(const Graph& g, const std::vector<NodePartition>& parts,
                      const ObjectiveSpec& spec, const AdmmConfig& cfg,
                      const PrivacyBudget& budget) {
  cfg.validate();
  g.validate();
  const int n = g.node_count();
  if (static_cast<int>(parts.size()) != n) {
    throw PartitionError("run: " + std::to_string(parts.size()) + " partitions for " +
                         std::to_string(n) + " nodes");
  }
  for (int i = 0; i < n; ++i) {
    const NodePartition& p = parts[static_cast<std::size_t>(i)];
    if (p.node_id != i) {
      throw PartitionError("run: partition " + std::to_string(i) + " carries node_id " +
                           std::to_string(p.node_id));
    }
    if (p.dim != parts[0].dim) throw ShapeError("run: partitions disagree on dimension");
    if (p.size() == 0) throw PartitionError("run: node " + std::to_string(i) + " has no data");
    if (cfg.minibatch_size > 0 && static_cast<std::size_t>(cfg.minibatch_size) > p.size()) {
      throw ParameterError("run: minibatch_size exceeds node " + std::to_string(i) +
                           "'s sample count");
    }
  }
  if (spec.n != n) {
    throw ParameterError("run: objective spec built for n=" + std::to_string(spec.n) +
                         " but graph has " + std::to_string(n) + " nodes");
  }
  if (cfg.noise_enabled) {
    if (budget.t != cfg.t || budget.l != cfg.l) {
      throw ConfigError("run: privacy budget calibrated for (t=" + std::to_string(budget.t) +
                        ", l=" + std::to_string(budget.l) + ") but engine configured for (t=" +
                        std::to_string(cfg.t) + ", l=" + std::to_string(cfg.l) + ")");
    }
    if (!(budget.sigma > 0.0)) throw ConfigError("run: noise enabled but sigma is not set");
  }
}

}  // namespace

void AdmmConfig::validate() const {
  if (!(rho > 0.0)) throw ParameterError("AdmmConfig: rho must be > 0");
  if (t < 1) throw ParameterError("AdmmConfig: t must be >= 1");
  if (l < 1) throw ParameterError("AdmmConfig: l must be >= 1");
  if (minibatch_size < 0) throw ParameterError("AdmmConfig: minibatch_size must be >= 0");
}

NodeState make_node_state(int dim, int degree) {
  if (dim < 1) throw ParameterError("make_node_state: dim must be >= 1");
  if (degree < 0) throw ParameterError("make_node_state: degree must be >= 0");
  NodeState s;
  s.w_inner.assign(static_cast<std::size_t>(dim), 0.0);
  s.w_prev_broadcast.assign(static_cast<std::size_t>(dim), 0.0);
  s.neighbor_broadcasts.assign(static_cast<std::size_t>(degree),
                               ModelVector(static_cast<std::size_t>(dim), 0.0));
  s.dual.assign(static_cast<std::size_t>(dim), 0.0);
  s.output_average.assign(static_cast<std::size_t>(dim), 0.0);
  return s;
}

double eta(int k, int r_plus_1, int dim, int m_i, const ObjectiveSpec& spec,
           const AdmmConfig& cfg, const PrivacyBudget& budget) {
  if (k < 1) throw ParameterError("eta: k must be >= 1");
  if (r_plus_1 < 1) throw ParameterError("eta: r_plus_1 must be >= 1");
  if (dim < 1) throw ParameterError("eta: dim must be >= 1");
  if (m_i < 1) throw ParameterError("eta: m_i must be >= 1");
  double inside = spec.c2 * spec.c2 / (static_cast<double>(spec.n) * spec.n);
  if (cfg.noise_enabled) {
    const double steps = static_cast<double>(budget.t) * static_cast<double>(budget.l);
    inside += 8.0 * dim * budget.c0 * budget.c0 * spec.c1 * spec.c1 * steps *
              std::log(1.25 / budget.delta) /
              (budget.epsilon * budget.epsilon * static_cast<double>(m_i) * m_i);
  }
  return std::sqrt(2.0 * k * r_plus_1) / spec.domain_diameter * std::sqrt(inside);
}

void primal_inner_update(NodeState& state, int k, int r, const AdmmConfig& cfg,
                         const PrivacyBudget& budget, const NodePartition& part,
                         const ObjectiveSpec& spec, std::mt19937_64& noise_rng,
                         std::mt19937_64* minibatch_rng) {
  const std::size_t d = state.w_inner.size();
  if (static_cast<int>(d) != part.dim) {
    throw ShapeError("primal_inner_update: state dimension " + std::to_string(d) +
                     " != partition dimension " + std::to_string(part.dim));
  }
  const int degree = static_cast<int>(state.neighbor_broadcasts.size());
  const int m_i = static_cast<int>(part.size());
  const double step_eta = eta(k, r + 1, static_cast<int>(d), m_i, spec, cfg, budget);

  if (cfg.minibatch_size > 0) {
    if (minibatch_rng == nullptr) {
      throw ProtocolError("primal_inner_update: minibatching requires a batch rng");
    }
    minibatch_gradient(part, spec, state.w_inner, cfg.minibatch_size, *minibatch_rng,
                       state.scratch);
  } else {
    local_gradient(part, spec, state.w_inner, state.scratch);
  }

  state.inner_history.emplace_back(d, 0.0);
  ModelVector& next = state.inner_history.back();
  const double denom = 2.0 * cfg.rho * degree + step_eta;
  for (std::size_t x = 0; x < d; ++x) {
    next[x] = -state.scratch[x] + 2.0 * state.dual[x] +
              cfg.rho * degree * state.w_prev_broadcast[x] + step_eta * state.w_inner[x];
  }
  for (const ModelVector& nb : state.neighbor_broadcasts) {
    if (nb.size() != d) throw ShapeError("primal_inner_update: neighbor broadcast dimension");
    for (std::size_t x = 0; x < d; ++x) next[x] += cfg.rho * nb[x];
  }
  for (std::size_t x = 0; x < d; ++x) next[x] /= denom;

  if (cfg.noise_enabled) {
    SensitivityParams sp;
    sp.c1 = spec.c1;
    sp.rho = cfg.rho;
    sp.degree = degree;
    sp.m_i = m_i;
    sp.eta = step_eta;
    gaussian_perturb(next, sensitivity(sp), budget.sigma, noise_rng);
  }
  if (cfg.projection_enabled) project_to_domain_inplace(next, spec.domain_diameter);

  state.w_inner = next;
}

ModelVector finish_outer_iteration(NodeState& state, int l) {
  if (static_cast<int>(state.inner_history.size()) != l) {
    throw ProtocolError("finish_outer_iteration: history holds " +
                        std::to_string(state.inner_history.size()) + " iterates, expected " +
                        std::to_string(l));
  }
  const std::size_t d = state.w_inner.size();
  ModelVector mean(d, 0.0);
  for (const ModelVector& it : state.inner_history) {
    for (std::size_t x = 0; x < d; ++x) mean[x] += it[x];
  }
  const double inv_l = 1.0 / static_cast<double>(l);
  for (std::size_t x = 0; x < d; ++x) mean[x] *= inv_l;
  state.inner_history.clear();
  return mean;
}

void dual_update(NodeState& state, const ModelVector& own_broadcast,
                 const std::vector<ModelVector>& neighbor_broadcasts, double rho) {
  if (neighbor_broadcasts.size() != state.neighbor_broadcasts.size()) {
    throw ProtocolError("dual_update: got " + std::to_string(neighbor_broadcasts.size()) +
                        " neighbor broadcasts, expected " +
                        std::to_string(state.neighbor_broadcasts.size()));
  }
  const std::size_t d = state.dual.size();
  if (own_broadcast.size() != d) throw ShapeError("dual_update: own broadcast dimension");
  const double half_rho = rho / 2.0;
  for (const ModelVector& nb : neighbor_broadcasts) {
    if (nb.size() != d) throw ShapeError("dual_update: neighbor broadcast dimension");
    for (std::size_t x = 0; x < d; ++x) {
      state.dual[x] -= half_rho * (own_broadcast[x] - nb[x]);
    }
  }
}

void minibatch_gradient(const NodePartition& part, const ObjectiveSpec& spec,
                        const ModelVector& w, int batch_size, std::mt19937_64& rng,
                        ModelVector& out) {
  const std::size_t m = part.size();
  if (batch_size < 1 || static_cast<std::size_t>(batch_size) > m) {
    throw ParameterError("minibatch_gradient: batch_size " + std::to_string(batch_size) +
                         " out of range [1, " + std::to_string(m) + "]");
  }
  if (part.dim != static_cast<int>(w.size())) {
    throw ShapeError("minibatch_gradient: dimension mismatch");
  }
  const std::size_t d = w.size();
  out.assign(d, 0.0);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  for (int b = 0; b < batch_size; ++b) {
    const std::size_t j = pick(rng);
    const auto row = part.row(j);
    const double bl = static_cast<double>(part.labels[j]);
    const double coef = -bl / (1.0 + std::exp(bl * dot(row, w)));
    for (std::size_t x = 0; x < d; ++x) out[x] += coef * row[x];
  }
  const double inv_b = 1.0 / static_cast<double>(batch_size);
  const double reg = spec.lambda / spec.n;
  for (std::size_t x = 0; x < d; ++x) out[x] = out[x] * inv_b + reg * w[x];
}

RunResult run(const Graph& g, const std::vector<NodePartition>& parts,
              const ObjectiveSpec& spec, const AdmmConfig& cfg,
              const PrivacyBudget& budget, std::uint64_t seed,
              const IterationObserver& observer) {
  check_run_inputs(g, parts, spec, cfg, budget);
  const int n = g.node_count();
  const int d = parts[0].dim;

  std::vector<NodeState> states;
  states.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) states.push_back(make_node_state(d, g.degree(i)));

  std::vector<ModelVector> broadcasts(static_cast<std::size_t>(n),
                                      ModelVector(static_cast<std::size_t>(d), 0.0));
  std::vector<ModelVector> outputs_snapshot(static_cast<std::size_t>(n));
  std::vector<ModelVector> duals_snapshot(static_cast<std::size_t>(n));
  ModelVector dual_sum(static_cast<std::size_t>(d));

  RunResult result;
  for (int k = 1; k <= cfg.t; ++k) {
    // Inner loops: nodes are independent given last iteration's broadcasts.
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      NodeState& st = states[static_cast<std::size_t>(i)];
      const NodePartition& part = parts[static_cast<std::size_t>(i)];
      for (int r = 0; r < cfg.l; ++r) {
        fold_output_average(st);
        auto noise_rng = substream(seed, Stream::kNoise, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r));
        if (cfg.minibatch_size > 0) {
          auto batch_rng =
              substream(seed, Stream::kMinibatch, static_cast<std::uint64_t>(i),
                        static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r));
          primal_inner_update(st, k, r, cfg, budget, part, spec, noise_rng, &batch_rng);
        } else {
          primal_inner_update(st, k, r, cfg, budget, part, spec, noise_rng);
        }
      }
      broadcasts[static_cast<std::size_t>(i)] = finish_outer_iteration(st, cfg.l);
    }

    // Broadcast exchange and dual step; nodes only read this round's
    // broadcasts, so the loop is again embarrassingly parallel.
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      NodeState& st = states[static_cast<std::size_t>(i)];
      const auto neighbors = g.neighbors(i);
      for (std::size_t j = 0; j < neighbors.size(); ++j) {
        st.neighbor_broadcasts[j] = broadcasts[static_cast<std::size_t>(neighbors[j])];
      }
      dual_update(st, broadcasts[static_cast<std::size_t>(i)], st.neighbor_broadcasts,
                  cfg.rho);
      st.w_prev_broadcast = broadcasts[static_cast<std::size_t>(i)];
    }

    // Serial bookkeeping: dual-sum conservation and the observer snapshot.
    std::fill(dual_sum.begin(), dual_sum.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const ModelVector& gamma = states[static_cast<std::size_t>(i)].dual;
      for (std::size_t x = 0; x < dual_sum.size(); ++x) dual_sum[x] += gamma[x];
    }
    result.max_dual_sum_norm = std::max(result.max_dual_sum_norm, norm(dual_sum));

    if (observer) {
      for (int i = 0; i < n; ++i) {
        outputs_snapshot[static_cast<std::size_t>(i)] =
            states[static_cast<std::size_t>(i)].output_average;
        duals_snapshot[static_cast<std::size_t>(i)] = states[static_cast<std::size_t>(i)].dual;
      }
      observer(IterationView{k, outputs_snapshot, broadcasts, duals_snapshot});
    }
  }

  result.output_models.reserve(static_cast<std::size_t>(n));
  result.final_broadcasts = broadcasts;
  result.duals.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    result.output_models.push_back(states[static_cast<std::size_t>(i)].output_average);
    result.duals.push_back(states[static_cast<std::size_t>(i)].dual);
  }
  result.noisy_steps =
      cfg.noise_enabled ? static_cast<long long>(cfg.t) * static_cast<long long>(cfg.l) : 0;
  return result;
}

RunResult run_reference(const Graph& g, const std::vector<NodePartition>& parts,
                        const ObjectiveSpec& spec, const AdmmConfig& cfg,
                        const PrivacyBudget& budget, std::uint64_t seed,
                        const IterationObserver& observer) {
  check_run_inputs(g, parts, spec, cfg, budget);
  const int n = g.node_count();
  const int d = parts[0].dim;

  std::vector<NodeState> states;
  for (int i = 0; i < n; ++i) states.push_back(make_node_state(d, g.degree(i)));

  std::vector<ModelVector> broadcasts;
  RunResult result;
  for (int k = 1; k <= cfg.t; ++k) {
    broadcasts.assign(static_cast<std::size_t>(n), ModelVector());
    for (int i = 0; i < n; ++i) {
      NodeState& st = states[static_cast<std::size_t>(i)];
      for (int r = 0; r < cfg.l; ++r) {
        fold_output_average(st);
        auto noise_rng = substream(seed, Stream::kNoise, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r));
        if (cfg.minibatch_size > 0) {
          auto batch_rng =
              substream(seed, Stream::kMinibatch, static_cast<std::uint64_t>(i),
                        static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r));
          primal_inner_update(st, k, r, cfg, budget, parts[static_cast<std::size_t>(i)], spec,
                              noise_rng, &batch_rng);
        } else {
          primal_inner_update(st, k, r, cfg, budget, parts[static_cast<std::size_t>(i)], spec,
                              noise_rng);
        }
      }
      broadcasts[static_cast<std::size_t>(i)] = finish_outer_iteration(st, cfg.l);
    }

    for (int i = 0; i < n; ++i) {
      std::vector<ModelVector> gathered;
      for (int nb : g.neighbors(i)) gathered.push_back(broadcasts[static_cast<std::size_t>(nb)]);
      dual_update(states[static_cast<std::size_t>(i)], broadcasts[static_cast<std::size_t>(i)],
                  gathered, cfg.rho);
    }
    for (int i = 0; i < n; ++i) {
      NodeState& st = states[static_cast<std::size_t>(i)];
      st.w_prev_broadcast = broadcasts[static_cast<std::size_t>(i)];
      const auto neighbors = g.neighbors(i);
      for (std::size_t j = 0; j < neighbors.size(); ++j) {
        st.neighbor_broadcasts[j] = broadcasts[static_cast<std::size_t>(neighbors[j])];
      }
    }

    ModelVector dual_sum(static_cast<std::size_t>(d), 0.0);
    for (int i = 0; i < n; ++i) {
      for (std::size_t x = 0; x < dual_sum.size(); ++x) {
        dual_sum[x] += states[static_cast<std::size_t>(i)].dual[x];
      }
    }
    result.max_dual_sum_norm = std::max(result.max_dual_sum_norm, norm(dual_sum));

    if (observer) {
      std::vector<ModelVector> outputs, duals;
      for (int i = 0; i < n; ++i) {
        outputs.push_back(states[static_cast<std::size_t>(i)].output_average);
        duals.push_back(states[static_cast<std::size_t>(i)].dual);
      }
      observer(IterationView{k, outputs, broadcasts, duals});
    }
  }

  result.final_broadcasts = broadcasts;
  for (int i = 0; i < n; ++i) {
    result.output_models.push_back(states[static_cast<std::size_t>(i)].output_average);
    result.duals.push_back(states[static_cast<std::size_t>(i)].dual);
  }
  result.noisy_steps =
      cfg.noise_enabled ? static_cast<long long>(cfg.t) * static_cast<long long>(cfg.l) : 0;
  return result;
}

}  // namespace padmm
