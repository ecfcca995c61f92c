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
// Benchmark: serial reference engine vs. the OpenMP engine at increasing
// thread counts, on one synthetic workload.  Verifies that every variant
// produces bitwise-identical outputs before reporting speedups.
//
// Usage: bench_engine [nodes] [t] [l] [samples_per_node] [dim]

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <vector>

#include "padmm/admm.hpp"
#include "padmm/dataset.hpp"
#include "padmm/objective.hpp"
#include "padmm/privacy.hpp"
#include "padmm/topology.hpp"

namespace {

bool identical(const padmm::RunResult& a, const padmm::RunResult& b) {
  if (a.output_models != b.output_models) return false;
  if (a.final_broadcasts != b.final_broadcasts) return false;
  if (a.duals != b.duals) return false;
  return true;
}

int run_bench(int nodes, int t, int l, int per_node, int dim) {
  const padmm::Graph graph = padmm::Graph::complete(nodes);
  const padmm::Dataset data =
      padmm::generate_synthetic(nodes * per_node, dim, /*seed=*/99, /*label_noise=*/0.05);
  const std::vector<padmm::NodePartition> parts =
      padmm::partition_even(data, graph, /*seed=*/99);
  const padmm::ObjectiveSpec spec = padmm::ObjectiveSpec::make(0.0001, nodes, 2.0);
  const padmm::PrivacyBudget budget = padmm::PrivacyBudget::make(1.0, 1e-5, t, l);

  padmm::AdmmConfig cfg;
  cfg.rho = 0.01;
  cfg.t = t;
  cfg.l = l;
  cfg.noise_enabled = true;

  std::printf("workload: n=%d t=%d l=%d samples/node=%d d=%d\n", nodes, t, l, per_node, dim);
  std::printf("%-24s %10s %10s %8s\n", "engine", "seconds", "speedup", "match");

  double start = omp_get_wtime();
  const padmm::RunResult ref = padmm::run_reference(graph, parts, spec, cfg, budget, 7);
  const double serial_seconds = omp_get_wtime() - start;
  std::printf("%-24s %10.3f %10.2fx %8s\n", "serial reference", serial_seconds, 1.0, "-");

  const int max_threads = omp_get_max_threads();
  for (int threads = 1; threads <= max_threads; threads *= 2) {
    omp_set_num_threads(threads);
    start = omp_get_wtime();
    const padmm::RunResult par = padmm::run(graph, parts, spec, cfg, budget, 7);
    const double seconds = omp_get_wtime() - start;
    const bool match = identical(ref, par);
    char label[32];
    std::snprintf(label, sizeof(label), "openmp (%d threads)", threads);
    std::printf("%-24s %10.3f %10.2fx %8s\n", label, seconds, serial_seconds / seconds,
                match ? "yes" : "NO");
    if (!match) {
      std::fprintf(stderr, "error: parallel result diverged from the serial reference\n");
      return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--help") == 0 || std::strcmp(argv[i], "-h") == 0) {
      std::printf("usage: %s [nodes] [t] [l] [samples_per_node] [dim]\n", argv[0]);
      std::printf("defaults: 16 50 10 400 50\n");
      return 0;
    }
  }
  const int nodes = argc > 1 ? std::atoi(argv[1]) : 16;
  const int t = argc > 2 ? std::atoi(argv[2]) : 50;
  const int l = argc > 3 ? std::atoi(argv[3]) : 10;
  const int per_node = argc > 4 ? std::atoi(argv[4]) : 400;
  const int dim = argc > 5 ? std::atoi(argv[5]) : 50;
  if (nodes < 2 || t < 1 || l < 1 || per_node < 1 || dim < 1) {
    std::fprintf(stderr, "invalid workload; see --help\n");
    return 2;
  }

  try {
    return run_bench(nodes, t, l, per_node, dim);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
