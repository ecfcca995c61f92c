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
// Experiment orchestration: dataset preparation, single-cell runs, and
// parallel sweeps over the (epsilon, l, seed) grid with per-cell CSV/audit
// outputs and an aggregate table.

#ifndef PADMM_RUNNER_HPP_
#define PADMM_RUNNER_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "padmm/admm.hpp"
#include "padmm/config.hpp"
#include "padmm/dataset.hpp"
#include "padmm/metrics.hpp"
#include "padmm/objective.hpp"
#include "padmm/topology.hpp"

namespace padmm {

// Everything a sweep shares across cells: the graph, the train/test split,
// per-node partitions, the objective constants, and the feasibility weight.
struct DataBundle {
  Graph graph;
  Dataset train;
  Dataset test;
  std::vector<NodePartition> parts;
  ObjectiveSpec spec;
  double beta = 0.0;
};

// Builds the bundle from the config: generates or loads the dataset, splits
// off the held-out fraction, partitions the rest over the graph.  All
// randomness comes from cfg.data_seed, so every (epsilon, l, seed) cell of a
// sweep sees identical data.
DataBundle prepare_data(const ExperimentConfig& cfg);

// Final-iteration metrics of one executed cell.
struct CellOutcome {
  double epsilon = 0.0;
  int l = 0;
  std::uint64_t seed = 0;
  RunRecord final_record;
  double max_dual_sum_norm = 0.0;
};

// Executes one (epsilon, l, seed) cell: runs the engine, writes the
// RunRecord CSV and the privacy audit into out_dir (atomic writes), and
// returns the final record.  When records_out is non-null it receives the
// full per-iteration stream.
CellOutcome run_cell(const ExperimentConfig& cfg, const DataBundle& data,
                     const CentralizedOptimum& optimum, double epsilon, int l,
                     std::uint64_t seed, const std::filesystem::path& out_dir,
                     std::vector<RunRecord>* records_out = nullptr);

// File-name stem for a cell, e.g. "eps0.5_l10_seed3".
std::string cell_name(double epsilon, int l, std::uint64_t seed);

// `run` subcommand: first (epsilon, l, seed) of the grid, one cell.
void run_single(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

// `sweep` subcommand: all cells, up to `workers` in parallel (0 = one worker
// per hardware thread).  Writes per-cell outputs plus aggregate.csv with one
// row per (epsilon, l) holding mean and sample std of the final metrics over
// seeds.  A failing cell aborts the sweep naming the cell.
void run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
               int workers);

// Writes content to path via a temp file and rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace padmm

#endif  // PADMM_RUNNER_HPP_
