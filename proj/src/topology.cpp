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

#include "padmm/topology.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "padmm/errors.hpp"

namespace padmm {

Graph Graph::complete(int n) {
  if (n < 2) {
    throw TopologyError("complete graph requires n >= 2, got n=" + std::to_string(n));
  }
  Graph g;
  g.neighbors_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& nbrs = g.neighbors_[static_cast<std::size_t>(i)];
    nbrs.reserve(static_cast<std::size_t>(n - 1));
    for (int j = 0; j < n; ++j) {
      if (j != i) nbrs.push_back(j);
    }
  }
  return g;
}

Graph Graph::ring(int n) {
  if (n < 3) {
    throw TopologyError("ring graph requires n >= 3, got n=" + std::to_string(n));
  }
  Graph g;
  g.neighbors_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int prev = (i + n - 1) % n;
    int next = (i + 1) % n;
    auto& nbrs = g.neighbors_[static_cast<std::size_t>(i)];
    nbrs = {prev, next};
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

Graph Graph::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 2) {
    throw TopologyError("graph requires n >= 2, got n=" + std::to_string(n));
  }
  std::set<std::pair<int, int>> canon;
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      throw TopologyError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") out of range for n=" + std::to_string(n));
    }
    if (a == b) {
      throw TopologyError("self-loop at node " + std::to_string(a));
    }
    canon.emplace(std::min(a, b), std::max(a, b));
  }
  Graph g;
  g.neighbors_.resize(static_cast<std::size_t>(n));
  for (const auto& [a, b] : canon) {
    g.neighbors_[static_cast<std::size_t>(a)].push_back(b);
    g.neighbors_[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& nbrs : g.neighbors_) std::sort(nbrs.begin(), nbrs.end());
  g.validate();
  return g;
}

Graph Graph::from_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open edge-list file: " + path.string());
  }
  std::vector<std::pair<int, int>> edges;
  int max_node = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    int a = 0, b = 0;
    if (!(ss >> a >> b)) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected two node indices");
    }
    edges.emplace_back(a, b);
    max_node = std::max({max_node, a, b});
  }
  if (max_node < 1) {
    throw TopologyError("edge-list file " + path.string() + " describes fewer than 2 nodes");
  }
  return from_edges(max_node + 1, edges);
}

Graph Graph::unchecked_from_adjacency(std::vector<std::vector<int>> adjacency) {
  Graph g;
  g.neighbors_ = std::move(adjacency);
  return g;
}

int Graph::max_degree() const {
  int m = 0;
  for (const auto& nbrs : neighbors_) m = std::max(m, static_cast<int>(nbrs.size()));
  return m;
}

std::size_t Graph::edge_count() const {
  std::size_t directed = 0;
  for (const auto& nbrs : neighbors_) directed += nbrs.size();
  return directed / 2;
}

void Graph::validate() const {
  const int n = node_count();
  if (n < 2) {
    throw TopologyError("graph has fewer than 2 nodes");
  }
  for (int i = 0; i < n; ++i) {
    for (int j : neighbors(i)) {
      if (j < 0 || j >= n) {
        throw TopologyError("neighbor index " + std::to_string(j) + " of node " +
                            std::to_string(i) + " out of range");
      }
      if (j == i) {
        throw TopologyError("self-loop at node " + std::to_string(i));
      }
      auto back = neighbors(j);
      if (!std::binary_search(back.begin(), back.end(), i)) {
        throw TopologyError("asymmetry: edge " + std::to_string(i) + "->" + std::to_string(j) +
                            " has no reverse edge");
      }
    }
  }
  // Connectivity by breadth-first search from node 0.
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    int i = frontier.front();
    frontier.pop();
    for (int j : neighbors(i)) {
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        frontier.push(j);
      }
    }
  }
  if (reached != n) {
    throw TopologyError("disconnection: only " + std::to_string(reached) + " of " +
                        std::to_string(n) + " nodes reachable from node 0");
  }
}

}  // namespace padmm
