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
// Experiment configuration: flat "key = value" files, comma-separated lists,
// documented defaults for every key, and strict validation.

#ifndef PADMM_CONFIG_HPP_
#define PADMM_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace padmm {

// Every field has a usable default; parse_config overrides from file and
// validates.  Lists (epsilon, l, seeds) drive the sweep grid; `run` uses
// their first elements.
struct ExperimentConfig {
  // Data source.
  std::string dataset = "synthetic";  // "synthetic" | "adult"
  int synthetic_samples = 2000;
  int synthetic_dim = 10;
  double label_noise = 0.0;           // synthetic label-flip probability
  std::string adult_data = "data/adult.data";   // raw files (preprocess)
  std::string adult_test = "data/adult.test";
  std::string adult_cache = "";       // preprocessed cache (run/sweep)

  // Communication graph.
  std::string topology = "complete";  // "complete" | "ring" | "file"
  std::string topology_file = "";
  int n = 100;                        // node count (ignored for "file")

  // Optimization.
  double rho = 0.001;
  double lambda = 0.0001;
  double domain_diameter = 2.0;
  int t = 100;
  std::vector<int> l_values = {10};
  bool projection = true;
  int minibatch = 0;                  // 0 = full batch

  // Privacy.
  std::vector<double> epsilons = {1.0};
  double delta = 1e-5;
  bool noise_enabled = true;
  double c0 = 0.0;                    // <= 0: default composition constant
  double c2 = 0.0;                    // <= 0: derived objective constant

  // Experiment harness.
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::uint64_t data_seed = 1234;     // dataset generation / split / partition
  double test_fraction = 0.2;
  double beta = -1.0;                 // < 0: default rho * max_degree
  double oracle_tol = 1e-8;
  bool report_broadcasts = false;     // metrics on broadcasts, not averages
  std::string out_dir = "out";

  // Throws ConfigError naming the offending key.
  void validate() const;

  // Effective configuration as re-parseable "key = value" lines.
  std::string echo() const;
};

// Parses a config file / raw text.  Unknown keys, type mismatches, and range
// violations raise ConfigError naming the key and line.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace padmm

#endif  // PADMM_CONFIG_HPP_
