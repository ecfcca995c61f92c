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

#ifndef PADMM_DATASET_HPP_
#define PADMM_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "padmm/topology.hpp"

namespace padmm {

// One training sample: features with Euclidean norm <= 1 (enforced by
// preprocessing) and a label in {+1, -1}.
struct Sample {
  std::vector<double> features;
  int label = 1;
};

struct Dataset {
  int dim = 0;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
};

// A node's local training data, stored as a compact row-major matrix so the
// per-sample gradient loop touches contiguous memory.  Immutable once built.
struct NodePartition {
  int node_id = -1;
  int dim = 0;
  std::vector<double> features;  // size() * dim, row-major
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t j) const {
    return {features.data() + j * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
};

// Runs the standard preprocessing pipeline on raw comma-separated rows in
// the UCI Adult schema (14 attributes + income label):
//   - rows with any missing field ("?") are dropped,
//   - categorical attributes are one-hot encoded (education-num is dropped
//     as a numeric duplicate of education),
//   - each column is scaled so its maximum absolute value is 1,
//   - each row is scaled by max(1, ||row||) so its norm is <= 1,
//   - labels {>50K, <=50K} map to {+1, -1}; trailing periods are accepted.
// Throws ParseError with the 1-based row number on malformed rows.
Dataset preprocess_adult(const std::vector<std::string>& raw_rows);

// Reads and merges adult.data and adult.test, then preprocesses.  Emits a
// warning on stderr when the encoded dimension differs from the expected
// 104 but proceeds.
Dataset load_adult(const std::filesystem::path& data_path,
                   const std::filesystem::path& test_path);

// Seeded synthetic classification data: features are standard normal draws
// scaled by max(1, ||row||); labels come from a fixed random unit separator
// with optional label-flip noise (sign convention: sign(0) = +1).  When
// separator_out is non-null it receives the ground-truth separator.
Dataset generate_synthetic(int n_samples, int dim, std::uint64_t seed,
                           double label_noise = 0.0,
                           std::vector<double>* separator_out = nullptr);

// Seeded shuffle split; the second element holds the test fraction.
std::pair<Dataset, Dataset> split_train_test(const Dataset& all, std::uint64_t seed,
                                             double test_fraction = 0.2);

// Shuffles samples by seed and splits into node_count contiguous blocks
// whose sizes differ by at most one.  Throws PartitionError when there are
// fewer samples than nodes.
std::vector<NodePartition> partition_even(const Dataset& data, const Graph& g,
                                          std::uint64_t seed);

// Preprocessed cache: header "d=<int> n=<int>" then one "label f1 ... fd"
// line per sample.  Values round-trip exactly.
void write_cache(const Dataset& data, const std::filesystem::path& path);
Dataset read_cache(const std::filesystem::path& path);

}  // namespace padmm

#endif  // PADMM_DATASET_HPP_
