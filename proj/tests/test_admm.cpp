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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "padmm/admm.hpp"
#include "padmm/errors.hpp"
#include "padmm/vec.hpp"

namespace padmm {
namespace {

NodePartition make_partition(int dim, const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels, int node_id = 0) {
  NodePartition part;
  part.node_id = node_id;
  part.dim = dim;
  part.labels = labels;
  for (const auto& r : rows) part.features.insert(part.features.end(), r.begin(), r.end());
  return part;
}

// A small synthetic problem shared by the engine tests.
struct Problem {
  Graph graph;
  std::vector<NodePartition> parts;
  ObjectiveSpec spec;
};

Problem make_problem(const Graph& g, int dim, int samples_per_node, double lambda,
                     double diameter = 2.0) {
  const int n = g.node_count();
  const Dataset data = generate_synthetic(samples_per_node * n, dim, 4242);
  Problem p{g, partition_even(data, g, 17),
            ObjectiveSpec::make(lambda, n, diameter)};
  return p;
}

bool identical(const RunResult& a, const RunResult& b) {
  return a.output_models == b.output_models && a.final_broadcasts == b.final_broadcasts &&
         a.duals == b.duals;
}

TEST_CASE("AdmmConfig::validate rejects bad ranges") {
  AdmmConfig cfg;
  cfg.rho = 0.1;
  CHECK_NOTHROW(cfg.validate());
  cfg.rho = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.rho = 0.1;
  cfg.t = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.t = 1;
  cfg.l = 0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.l = 1;
  cfg.minibatch_size = -1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("make_node_state zero-initializes every buffer") {
  const NodeState st = make_node_state(3, 2);
  CHECK(st.w_inner == ModelVector(3, 0.0));
  CHECK(st.w_prev_broadcast == ModelVector(3, 0.0));
  CHECK(st.dual == ModelVector(3, 0.0));
  REQUIRE(st.neighbor_broadcasts.size() == 2);
  CHECK(st.neighbor_broadcasts[0] == ModelVector(3, 0.0));
  CHECK(st.inner_history.empty());
  CHECK(st.output_average == ModelVector(3, 0.0));
  CHECK(st.output_count == 0);
  CHECK_THROWS_AS(make_node_state(0, 2), ParameterError);
  CHECK_THROWS_AS(make_node_state(3, -1), ParameterError);
}

TEST_CASE("eta is exactly one for normalized inputs") {
  // D = sqrt(2), c2 = n makes the noise-free value sqrt(2)/sqrt(2) * 1.
  const ObjectiveSpec spec = ObjectiveSpec::make(0.0, 2, std::sqrt(2.0), 2.0);
  AdmmConfig cfg;
  cfg.rho = 0.5;
  cfg.noise_enabled = false;
  CHECK(eta(1, 1, 4, 10, spec, cfg, PrivacyBudget{}) == 1.0);
}

TEST_CASE("eta matches frozen references at realistic scales") {
  const ObjectiveSpec spec = ObjectiveSpec::make(1e-4, 100, 2.0);
  AdmmConfig cfg;
  cfg.rho = 0.001;
  cfg.t = 100;
  cfg.l = 10;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, 100, 10);
  CHECK(eta(3, 2, 104, 452, spec, cfg, budget) ==
        doctest::Approx(11.85979454055634).epsilon(1e-14));
  const PrivacyBudget unit_c0 = PrivacyBudget::make(1.0, 1e-5, 100, 10, 1.0);
  CHECK(eta(3, 2, 104, 452, spec, cfg, unit_c0) ==
        doctest::Approx(11.974176005279293).epsilon(1e-14));
}

TEST_CASE("eta without noise reduces to the deterministic schedule") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.0, 7, 3.0, 1.7);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.noise_enabled = false;
  CHECK(eta(5, 4, 10, 10, spec, cfg, PrivacyBudget{}) ==
        doctest::Approx(0.511987811646309).epsilon(1e-14));
  CHECK(eta(5, 4, 10, 10, spec, cfg, PrivacyBudget{}) ==
        doctest::Approx(std::sqrt(2.0 * 5 * 4) / 3.0 * (1.7 / 7.0)).epsilon(1e-14));
}

TEST_CASE("eta doubles exactly when k and r are both doubled") {
  const ObjectiveSpec spec = ObjectiveSpec::make(1e-4, 10, 2.0);
  AdmmConfig cfg;
  cfg.rho = 0.01;
  const PrivacyBudget budget = PrivacyBudget::make(0.5, 1e-5, 40, 8);
  for (int k = 1; k <= 5; ++k) {
    for (int r = 1; r <= 4; ++r) {
      CHECK(eta(2 * k, 2 * r, 6, 50, spec, cfg, budget) ==
            2.0 * eta(k, r, 6, 50, spec, cfg, budget));
    }
  }
}

TEST_CASE("eta grows with the iteration indices and the noise term") {
  const ObjectiveSpec spec = ObjectiveSpec::make(1e-4, 10, 2.0);
  AdmmConfig cfg;
  cfg.rho = 0.01;
  const PrivacyBudget budget = PrivacyBudget::make(0.5, 1e-5, 40, 8);
  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double v = eta(k, 1, 6, 50, spec, cfg, budget);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(eta(3, 4, 6, 50, spec, cfg, budget) > eta(3, 3, 6, 50, spec, cfg, budget));

  AdmmConfig quiet = cfg;
  quiet.noise_enabled = false;
  CHECK(eta(3, 4, 6, 50, spec, quiet, budget) < eta(3, 4, 6, 50, spec, cfg, budget));

  CHECK_THROWS_AS(eta(0, 1, 6, 50, spec, cfg, budget), ParameterError);
  CHECK_THROWS_AS(eta(1, 0, 6, 50, spec, cfg, budget), ParameterError);
  CHECK_THROWS_AS(eta(1, 1, 0, 50, spec, cfg, budget), ParameterError);
  CHECK_THROWS_AS(eta(1, 1, 6, 0, spec, cfg, budget), ParameterError);
}

TEST_CASE("primal_inner_update matches a hand-computed step") {
  // Normalized so eta = 1; single sample with a zero margin makes the
  // gradient coefficient exactly -1/2.
  const ObjectiveSpec spec = ObjectiveSpec::make(0.0, 2, std::sqrt(2.0), 2.0);
  AdmmConfig cfg;
  cfg.rho = 0.5;
  cfg.noise_enabled = false;
  cfg.projection_enabled = false;
  const NodePartition part = make_partition(2, {{0.6, -0.2}}, {1});

  NodeState st = make_node_state(2, 1);
  st.w_inner = {0.1, 0.3};
  st.w_prev_broadcast = {-0.2, 0.5};
  st.neighbor_broadcasts[0] = {0.4, 0.1};
  st.dual = {0.05, -0.02};

  std::mt19937_64 rng(1);
  primal_inner_update(st, 1, 0, cfg, PrivacyBudget{}, part, spec, rng);
  REQUIRE(st.inner_history.size() == 1);
  CHECK(st.w_inner == st.inner_history[0]);
  CHECK(st.w_inner[0] == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(st.w_inner[1] == doctest::Approx(0.23).epsilon(1e-13));
}

TEST_CASE("primal_inner_update with no neighbors is a gradient step") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.2, 3, 4.0);
  AdmmConfig cfg;
  cfg.rho = 0.3;  // irrelevant at degree zero
  cfg.noise_enabled = false;
  cfg.projection_enabled = false;
  const NodePartition part =
      make_partition(2, {{0.5, 0.2}, {-0.3, 0.8}, {0.9, -0.1}}, {1, -1, 1});

  NodeState st = make_node_state(2, 0);
  st.w_inner = {0.4, -0.6};
  const ModelVector w0 = st.w_inner;
  const double step_eta = eta(2, 3, 2, 3, spec, cfg, PrivacyBudget{});
  const ModelVector g = local_gradient(part, spec, w0);

  std::mt19937_64 rng(1);
  primal_inner_update(st, 2, 2, cfg, PrivacyBudget{}, part, spec, rng);
  for (std::size_t x = 0; x < 2; ++x) {
    CHECK(st.w_inner[x] == doctest::Approx(w0[x] - g[x] / step_eta).epsilon(1e-13));
  }
}

TEST_CASE("a consensus point with balancing duals is a fixed point") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.3, 3, 8.0);
  AdmmConfig cfg;
  cfg.rho = 0.7;
  cfg.noise_enabled = false;
  const NodePartition part =
      make_partition(2, {{0.5, 0.2}, {-0.3, 0.8}, {0.9, -0.1}}, {1, -1, 1});
  const ModelVector w = {0.2, -0.1};
  const ModelVector g = local_gradient(part, spec, w);

  NodeState st = make_node_state(2, 2);
  st.w_inner = w;
  st.w_prev_broadcast = w;
  st.neighbor_broadcasts[0] = w;
  st.neighbor_broadcasts[1] = w;
  st.dual = {g[0] / 2.0, g[1] / 2.0};

  std::mt19937_64 rng(1);
  primal_inner_update(st, 3, 1, cfg, PrivacyBudget{}, part, spec, rng);
  CHECK(st.w_inner[0] == doctest::Approx(w[0]).epsilon(1e-12));
  CHECK(st.w_inner[1] == doctest::Approx(w[1]).epsilon(1e-12));
}

TEST_CASE("primal_inner_update validates shapes and the batch rng") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.0, 2, 2.0);
  AdmmConfig cfg;
  cfg.rho = 0.5;
  cfg.noise_enabled = false;
  const NodePartition part = make_partition(2, {{0.6, -0.2}}, {1});
  std::mt19937_64 rng(1);

  NodeState wrong_dim = make_node_state(3, 1);
  CHECK_THROWS_AS(primal_inner_update(wrong_dim, 1, 0, cfg, PrivacyBudget{}, part, spec, rng),
                  ShapeError);

  NodeState st = make_node_state(2, 1);
  AdmmConfig batched = cfg;
  batched.minibatch_size = 1;
  CHECK_THROWS_AS(primal_inner_update(st, 1, 0, batched, PrivacyBudget{}, part, spec, rng),
                  ProtocolError);
}

TEST_CASE("finish_outer_iteration averages and clears the history") {
  NodeState st = make_node_state(2, 0);
  st.inner_history = {{1.0, 2.0}};
  st.w_inner = {1.0, 2.0};
  const ModelVector single = finish_outer_iteration(st, 1);
  CHECK(single == ModelVector{1.0, 2.0});
  CHECK(st.inner_history.empty());
  CHECK(st.w_inner == ModelVector{1.0, 2.0});  // persists into the next loop

  st.inner_history = {{1.0, 0.0}, {2.0, 6.0}, {3.0, 0.0}};
  const ModelVector mean = finish_outer_iteration(st, 3);
  CHECK(mean[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(mean[1] == doctest::Approx(2.0).epsilon(1e-15));

  st.inner_history = {{1.0, 0.0}};
  CHECK_THROWS_AS(finish_outer_iteration(st, 2), ProtocolError);
}

TEST_CASE("dual_update applies the half-rho disagreement sum") {
  NodeState st = make_node_state(2, 1);
  dual_update(st, {1.0, 0.0}, {{0.0, 1.0}}, 2.0);
  CHECK(st.dual == ModelVector{-1.0, 1.0});
  // A second identical call accumulates.
  dual_update(st, {1.0, 0.0}, {{0.0, 1.0}}, 2.0);
  CHECK(st.dual == ModelVector{-2.0, 2.0});

  NodeState agree = make_node_state(2, 2);
  agree.dual = {0.5, -0.5};
  dual_update(agree, {0.3, 0.4}, {{0.3, 0.4}, {0.3, 0.4}}, 1.7);
  CHECK(agree.dual == ModelVector{0.5, -0.5});  // consensus leaves duals alone

  CHECK_THROWS_AS(dual_update(st, {1.0, 0.0}, {}, 1.0), ProtocolError);
  CHECK_THROWS_AS(dual_update(st, {1.0}, {{0.0, 1.0}}, 1.0), ShapeError);
  CHECK_THROWS_AS(dual_update(st, {1.0, 0.0}, {{0.0}}, 1.0), ShapeError);
}

TEST_CASE("minibatch_gradient is deterministic and validated") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.4, 2, 2.0);
  const NodePartition part =
      make_partition(2, {{0.5, 0.2}, {-0.3, 0.8}, {0.9, -0.1}}, {1, -1, 1});
  const ModelVector w = {0.3, -0.2};
  ModelVector a, b;
  std::mt19937_64 rng_a(9), rng_b(9);
  minibatch_gradient(part, spec, w, 2, rng_a, a);
  minibatch_gradient(part, spec, w, 2, rng_b, b);
  CHECK(a == b);

  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(minibatch_gradient(part, spec, w, 0, rng, a), ParameterError);
  CHECK_THROWS_AS(minibatch_gradient(part, spec, w, 4, rng, a), ParameterError);
  ModelVector bad = {0.1};
  CHECK_THROWS_AS(minibatch_gradient(part, spec, bad, 2, rng, a), ShapeError);
}

TEST_CASE("minibatch_gradient on one sample equals the full gradient") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.4, 2, 2.0);
  const NodePartition part = make_partition(2, {{0.5, 0.2}}, {1});
  const ModelVector w = {0.3, -0.2};
  ModelVector batch;
  std::mt19937_64 rng(5);
  minibatch_gradient(part, spec, w, 1, rng, batch);
  const ModelVector full = local_gradient(part, spec, w);
  CHECK(batch[0] == doctest::Approx(full[0]).epsilon(1e-15));
  CHECK(batch[1] == doctest::Approx(full[1]).epsilon(1e-15));
}

TEST_CASE("minibatch_gradient is unbiased for the full gradient") {
  const ObjectiveSpec spec = ObjectiveSpec::make(0.4, 2, 2.0);
  const NodePartition part =
      make_partition(2, {{0.5, 0.2}, {-0.3, 0.8}, {0.9, -0.1}, {0.2, 0.6}}, {1, -1, 1, -1});
  const ModelVector w = {0.3, -0.2};
  const ModelVector full = local_gradient(part, spec, w);
  ModelVector batch, mean(2, 0.0);
  std::mt19937_64 rng(31);
  const int reps = 200000;
  for (int i = 0; i < reps; ++i) {
    minibatch_gradient(part, spec, w, 2, rng, batch);
    mean[0] += batch[0];
    mean[1] += batch[1];
  }
  mean[0] /= reps;
  mean[1] /= reps;
  // Per-coordinate std of the estimator is < 0.5/sqrt(2); 5 sigmas over reps.
  const double tol = 5.0 * 0.5 / std::sqrt(2.0 * reps);
  CHECK(std::fabs(mean[0] - full[0]) < tol);
  CHECK(std::fabs(mean[1] - full[1]) < tol);
}

TEST_CASE("run is reproducible and seed-sensitive") {
  const Problem p = make_problem(Graph::complete(4), 5, 30, 0.01);
  AdmmConfig cfg;
  cfg.rho = 0.05;
  cfg.t = 10;
  cfg.l = 3;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  const RunResult a = run(p.graph, p.parts, p.spec, cfg, budget, 2024);
  const RunResult b = run(p.graph, p.parts, p.spec, cfg, budget, 2024);
  CHECK(identical(a, b));
  CHECK(a.noisy_steps == 30);
  const RunResult c = run(p.graph, p.parts, p.spec, cfg, budget, 2025);
  CHECK_FALSE(a.output_models == c.output_models);
}

TEST_CASE("run matches the serial reference engine bitwise") {
  const Problem p = make_problem(Graph::ring(5), 4, 25, 0.01);
  AdmmConfig cfg;
  cfg.rho = 0.05;
  cfg.t = 12;
  cfg.l = 4;
  const PrivacyBudget budget = PrivacyBudget::make(0.8, 1e-5, cfg.t, cfg.l);

  SUBCASE("with noise") {
    const RunResult a = run(p.graph, p.parts, p.spec, cfg, budget, 7);
    const RunResult b = run_reference(p.graph, p.parts, p.spec, cfg, budget, 7);
    CHECK(identical(a, b));
    CHECK(a.max_dual_sum_norm == b.max_dual_sum_norm);
    CHECK(a.noisy_steps == b.noisy_steps);
  }
  SUBCASE("without noise") {
    AdmmConfig quiet = cfg;
    quiet.noise_enabled = false;
    const RunResult a = run(p.graph, p.parts, p.spec, quiet, budget, 7);
    const RunResult b = run_reference(p.graph, p.parts, p.spec, quiet, budget, 7);
    CHECK(identical(a, b));
    CHECK(a.noisy_steps == 0);
  }
  SUBCASE("with minibatching") {
    AdmmConfig batched = cfg;
    batched.minibatch_size = 5;
    const RunResult a = run(p.graph, p.parts, p.spec, batched, budget, 7);
    const RunResult b = run_reference(p.graph, p.parts, p.spec, batched, budget, 7);
    CHECK(identical(a, b));
  }
}

TEST_CASE("run output is independent of the thread count") {
  const Problem p = make_problem(Graph::complete(6), 4, 20, 0.01);
  AdmmConfig cfg;
  cfg.rho = 0.02;
  cfg.t = 8;
  cfg.l = 3;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const RunResult serial = run(p.graph, p.parts, p.spec, cfg, budget, 99);
  omp_set_num_threads(4);
  const RunResult parallel = run(p.graph, p.parts, p.spec, cfg, budget, 99);
  omp_set_num_threads(saved);
  CHECK(identical(serial, parallel));
}

TEST_CASE("dual variables always sum to zero across the network") {
  AdmmConfig cfg;
  cfg.rho = 0.05;
  cfg.t = 20;
  cfg.l = 3;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  for (const Graph& g : {Graph::ring(6), Graph::complete(4)}) {
    const Problem p = make_problem(g, 4, 20, 0.01);
    const RunResult res = run(p.graph, p.parts, p.spec, cfg, budget, 123);
    CHECK(res.max_dual_sum_norm < 1e-9);
    ModelVector total(4, 0.0);
    for (const ModelVector& gamma : res.duals) {
      for (std::size_t x = 0; x < total.size(); ++x) total[x] += gamma[x];
    }
    CHECK(norm(total) < 1e-9);
  }
}

// An independently coded noise-free single-inner-step protocol, used as an
// external check on the engine's orchestration.
TEST_CASE("run agrees with a standalone reimplementation when l = 1") {
  const Graph g = Graph::complete(3);
  const Problem p = make_problem(g, 3, 15, 0.05, 4.0);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 30;
  cfg.l = 1;
  cfg.noise_enabled = false;
  cfg.projection_enabled = false;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  const RunResult engine = run(p.graph, p.parts, p.spec, cfg, budget, 5);

  const int n = 3, d = 3;
  std::vector<ModelVector> w(n, ModelVector(d, 0.0));
  std::vector<ModelVector> gamma(n, ModelVector(d, 0.0));
  std::vector<ModelVector> sum_pre(n, ModelVector(d, 0.0));
  for (int k = 1; k <= cfg.t; ++k) {
    std::vector<ModelVector> next(n, ModelVector(d, 0.0));
    for (int i = 0; i < n; ++i) {
      for (int x = 0; x < d; ++x) {
        sum_pre[i][static_cast<std::size_t>(x)] += w[i][static_cast<std::size_t>(x)];
      }
      const auto& part = p.parts[static_cast<std::size_t>(i)];
      const int deg = g.degree(i);
      const double step = std::sqrt(2.0 * k) / p.spec.domain_diameter *
                          (p.spec.c2 / static_cast<double>(p.spec.n));
      // Hand-rolled logistic gradient, written without the library helpers.
      ModelVector grad(d, 0.0);
      for (std::size_t j = 0; j < part.size(); ++j) {
        const auto row = part.row(j);
        double z = 0.0;
        for (int x = 0; x < d; ++x) z += row[static_cast<std::size_t>(x)] * w[i][static_cast<std::size_t>(x)];
        const double bl = part.labels[j];
        const double coef = -bl / (1.0 + std::exp(bl * z));
        for (int x = 0; x < d; ++x) grad[static_cast<std::size_t>(x)] += coef * row[static_cast<std::size_t>(x)];
      }
      for (int x = 0; x < d; ++x) {
        grad[static_cast<std::size_t>(x)] =
            grad[static_cast<std::size_t>(x)] / static_cast<double>(part.size()) +
            p.spec.lambda / p.spec.n * w[i][static_cast<std::size_t>(x)];
      }
      for (int x = 0; x < d; ++x) {
        double num = -grad[static_cast<std::size_t>(x)] + 2.0 * gamma[i][static_cast<std::size_t>(x)] +
                     cfg.rho * deg * w[i][static_cast<std::size_t>(x)] +
                     step * w[i][static_cast<std::size_t>(x)];
        for (int nb : g.neighbors(i)) num += cfg.rho * w[nb][static_cast<std::size_t>(x)];
        next[i][static_cast<std::size_t>(x)] = num / (2.0 * cfg.rho * deg + step);
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int nb : g.neighbors(i)) {
        for (int x = 0; x < d; ++x) {
          gamma[i][static_cast<std::size_t>(x)] -=
              cfg.rho / 2.0 *
              (next[i][static_cast<std::size_t>(x)] - next[nb][static_cast<std::size_t>(x)]);
        }
      }
    }
    w = next;
  }

  for (int i = 0; i < n; ++i) {
    ModelVector avg(d, 0.0);
    for (int x = 0; x < d; ++x) {
      avg[static_cast<std::size_t>(x)] = sum_pre[i][static_cast<std::size_t>(x)] / cfg.t;
    }
    CHECK(distance(engine.final_broadcasts[static_cast<std::size_t>(i)], w[i]) < 1e-11);
    CHECK(distance(engine.duals[static_cast<std::size_t>(i)], gamma[i]) < 1e-11);
    CHECK(distance(engine.output_models[static_cast<std::size_t>(i)], avg) < 1e-11);
  }
}

TEST_CASE("run folds the pre-update iterates into the output average") {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  const Problem p = make_problem(g, 2, 10, 0.05);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 1;
  cfg.l = 3;
  cfg.noise_enabled = false;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  const RunResult engine = run(p.graph, p.parts, p.spec, cfg, budget, 1);

  // Replay node 0 with the unit ops: outputs average w^{1,0..l-1}, the
  // broadcast averages w^{1,1..l}.
  NodeState st = make_node_state(2, 1);
  std::mt19937_64 rng(1);
  ModelVector out_sum(2, 0.0);
  for (int r = 0; r < cfg.l; ++r) {
    out_sum[0] += st.w_inner[0];
    out_sum[1] += st.w_inner[1];
    primal_inner_update(st, 1, r, cfg, budget, p.parts[0], p.spec, rng);
  }
  const ModelVector broadcast = finish_outer_iteration(st, cfg.l);
  CHECK(distance(engine.final_broadcasts[0], broadcast) < 1e-14);
  CHECK(engine.output_models[0][0] == doctest::Approx(out_sum[0] / 3.0).epsilon(1e-14));
  CHECK(engine.output_models[0][1] == doctest::Approx(out_sum[1] / 3.0).epsilon(1e-14));
}

TEST_CASE("projection keeps every broadcast inside the domain ball") {
  const double diameter = 0.5;
  const Problem p = make_problem(Graph::complete(3), 3, 15, 0.05, diameter);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 10;
  cfg.l = 2;
  const PrivacyBudget budget = PrivacyBudget::make(0.5, 1e-5, cfg.t, cfg.l);
  const RunResult res = run(p.graph, p.parts, p.spec, cfg, budget, 3);
  for (const ModelVector& w : res.final_broadcasts) CHECK(norm(w) <= diameter / 2.0 + 1e-12);
  for (const ModelVector& w : res.output_models) CHECK(norm(w) <= diameter / 2.0 + 1e-12);
}

TEST_CASE("noise changes the trajectory and its accounting") {
  const Problem p = make_problem(Graph::complete(3), 3, 15, 0.05);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 5;
  cfg.l = 2;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  const RunResult noisy = run(p.graph, p.parts, p.spec, cfg, budget, 11);
  AdmmConfig quiet = cfg;
  quiet.noise_enabled = false;
  const RunResult clean = run(p.graph, p.parts, p.spec, quiet, budget, 11);
  CHECK_FALSE(noisy.output_models == clean.output_models);
  CHECK(noisy.noisy_steps == 10);
  CHECK(clean.noisy_steps == 0);
}

TEST_CASE("the observer sees every iteration in order") {
  const Problem p = make_problem(Graph::complete(3), 3, 15, 0.05);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 6;
  cfg.l = 2;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);
  std::vector<int> seen;
  std::vector<ModelVector> last_outputs;
  const IterationObserver obs = [&](const IterationView& view) {
    seen.push_back(view.k);
    CHECK(view.outputs.size() == 3);
    CHECK(view.broadcasts.size() == 3);
    CHECK(view.duals.size() == 3);
    last_outputs = view.outputs;
  };
  const RunResult res = run(p.graph, p.parts, p.spec, cfg, budget, 21, obs);
  CHECK(seen == std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(last_outputs == res.output_models);

  seen.clear();
  const RunResult ref = run_reference(p.graph, p.parts, p.spec, cfg, budget, 21, obs);
  CHECK(seen == std::vector<int>{1, 2, 3, 4, 5, 6});
  CHECK(last_outputs == ref.output_models);
}

TEST_CASE("run validates its inputs") {
  const Problem p = make_problem(Graph::complete(3), 3, 15, 0.05);
  AdmmConfig cfg;
  cfg.rho = 0.1;
  cfg.t = 5;
  cfg.l = 2;
  const PrivacyBudget budget = PrivacyBudget::make(1.0, 1e-5, cfg.t, cfg.l);

  SUBCASE("budget must match the iteration plan when noise is on") {
    const PrivacyBudget stale = PrivacyBudget::make(1.0, 1e-5, 99, 2);
    CHECK_THROWS_AS(run(p.graph, p.parts, p.spec, cfg, stale, 1), ConfigError);
    AdmmConfig quiet = cfg;
    quiet.noise_enabled = false;
    CHECK_NOTHROW(run(p.graph, p.parts, p.spec, quiet, stale, 1));
  }
  SUBCASE("an uncalibrated budget is rejected") {
    PrivacyBudget raw;
    raw.t = cfg.t;
    raw.l = cfg.l;
    CHECK_THROWS_AS(run(p.graph, p.parts, p.spec, cfg, raw, 1), ConfigError);
  }
  SUBCASE("partition list must match the graph") {
    auto short_parts = p.parts;
    short_parts.pop_back();
    CHECK_THROWS_AS(run(p.graph, short_parts, p.spec, cfg, budget, 1), PartitionError);
    auto swapped = p.parts;
    std::swap(swapped[0], swapped[1]);
    CHECK_THROWS_AS(run(p.graph, swapped, p.spec, cfg, budget, 1), PartitionError);
  }
  SUBCASE("spec node count must match the graph") {
    const ObjectiveSpec other = ObjectiveSpec::make(0.05, 7, 2.0);
    CHECK_THROWS_AS(run(p.graph, p.parts, other, cfg, budget, 1), ParameterError);
  }
  SUBCASE("minibatch size may not exceed a node's data") {
    AdmmConfig batched = cfg;
    batched.minibatch_size = 1000;
    CHECK_THROWS_AS(run(p.graph, p.parts, p.spec, batched, budget, 1), ParameterError);
  }
}

}  // namespace
}  // namespace padmm
