/* Copyright 2026 The PeerHOL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PEERHOL_TESTS_RANDOM_GRAPH_HPP_
#define PEERHOL_TESTS_RANDOM_GRAPH_HPP_

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "peerhol/chronicle.hpp"

namespace peerhol::testing {

// Random version graph plus an independent closure computed with
// Floyd-Warshall over an adjacency matrix.
struct RandomGraph {
  VersionGraph graph;
  std::vector<VersionKey> nodes;
  std::vector<std::vector<bool>> reach;  // reach[i][j]: i depends on j

  explicit RandomGraph(std::mt19937& rng) {
    const int n = 2 + static_cast<int>(rng() % 29);
    const int chronicles = 1 + static_cast<int>(rng() % 6);
    std::map<std::string, std::uint64_t> next;
    std::vector<std::vector<int>> direct;
    for (int i = 0; i < n; ++i) {
      const std::string name = "c" + std::to_string(rng() % chronicles);
      const VersionKey v{"u", name, ++next[name]};
      // candidate deps: earlier versions of other chronicles that do not
      // lead back to this chronicle
      std::vector<int> deps;
      std::set<VersionKey> dep_keys;
      for (int j = 0; j < i; ++j) {
        if (rng() % 4 != 0) continue;
        if (nodes[j].name == name) continue;
        bool bad = false;
        for (int k = 0; k < i; ++k) {
          if (reach[j][k] && nodes[k].name == name) bad = true;
        }
        if (bad) continue;
        deps.push_back(j);
        dep_keys.insert(nodes[j]);
      }
      graph.add_version(v, dep_keys);
      nodes.push_back(v);
      direct.push_back(deps);
      // recompute the closure from scratch
      const int m = static_cast<int>(nodes.size());
      reach.assign(m, std::vector<bool>(m, false));
      for (int a = 0; a < m; ++a) {
        for (int b : direct[a]) reach[a][b] = true;
      }
      for (int k = 0; k < m; ++k) {
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) {
            if (reach[a][k] && reach[k][b]) reach[a][b] = true;
          }
        }
      }
    }
  }

  bool oracle_up_to_date(const std::string& name) const {
    int newest = -1;
    std::map<std::string, std::uint64_t> top;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      top[nodes[i].name] = std::max(top[nodes[i].name], nodes[i].version);
      if (nodes[i].name == name) newest = i;
    }
    if (newest < 0) return true;
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j) {
      if (reach[newest][j] && nodes[j].version != top.at(nodes[j].name)) return false;
    }
    return true;
  }
};

}  // namespace peerhol::testing

#endif  // PEERHOL_TESTS_RANDOM_GRAPH_HPP_
