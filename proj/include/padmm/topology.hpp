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

#ifndef PADMM_TOPOLOGY_HPP_
#define PADMM_TOPOLOGY_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace padmm {

// Undirected communication graph over which nodes exchange iterates.
// Node ids are 0-based contiguous integers.  Neighbor lists are stored
// sorted ascending so that iteration order (and hence floating-point
// summation order) is deterministic.  Immutable after construction and
// safe to share read-only across workers.
class Graph {
 public:
  // Complete graph on n >= 2 nodes.
  static Graph complete(int n);

  // Ring (cycle) on n >= 3 nodes.
  static Graph ring(int n);

  // Builds a graph from undirected edges over nodes 0..n-1.  Duplicate and
  // reversed pairs are deduplicated.  Validates the result.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  // Loads an edge-list file: one "i j" pair per line, whitespace separated,
  // 0-based indices.  The node count is max index + 1.
  static Graph from_edge_list_file(const std::filesystem::path& path);

  // Builds directly from adjacency lists without checking any invariant.
  // Callers are expected to validate(); exists so that tests can construct
  // deliberately broken graphs.
  static Graph unchecked_from_adjacency(std::vector<std::vector<int>> adjacency);

  int node_count() const { return static_cast<int>(neighbors_.size()); }
  std::span<const int> neighbors(int i) const { return neighbors_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return static_cast<int>(neighbors_[static_cast<std::size_t>(i)].size()); }
  int max_degree() const;

  // Number of undirected edges.
  std::size_t edge_count() const;

  // Throws TopologyError naming the violated invariant: asymmetry,
  // self-loop, or disconnection.
  void validate() const;

 private:
  Graph() = default;
  std::vector<std::vector<int>> neighbors_;
};

}  // namespace padmm

#endif  // PADMM_TOPOLOGY_HPP_
