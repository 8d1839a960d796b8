#pragma once

// Weighted graphs with known clique-complex homology.

#include "toponet/network.hpp"

#include <random>
#include <utility>
#include <vector>

namespace fixture {

/// Distinct random weights on the given edge list, zero elsewhere.
inline toponet::WeightedNetwork weighted(int n, const std::vector<std::pair<int, int>>& edges, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [i, j] : edges) w(i, j) = w(j, i) = u(rng);
  return toponet::jitter(toponet::WeightedNetwork(w), seed + 1, 1e-6);
}

inline std::vector<std::pair<int, int>> cycle_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return e;
}

inline std::vector<std::pair<int, int>> complete_edges(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return e;
}

/// Octahedron: three pairs of opposite vertices, all other pairs joined.
inline std::vector<std::pair<int, int>> octahedron_edges() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if (j != i + 3) e.emplace_back(i, j);
  return e;
}

// Four 20-node graphs that share one component and one 1-cycle.

/// Ring lattice, each node joined to its two nearest neighbours per side.
inline std::vector<std::pair<int, int>> ring_lattice_edges() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 20; ++i) {
    e.emplace_back(i, (i + 1) % 20);
    e.emplace_back(i, (i + 2) % 20);
  }
  return e;
}

/// Sparse hub-dominated graph: a 6-cycle of hubs with trees grown by
/// preferential attachment hanging off it.
inline std::vector<std::pair<int, int>> scale_free_ring_edges() {
  auto e = cycle_edges(6);
  std::vector<int> ends;
  for (auto [a, b] : e) ends.insert(ends.end(), {a, b});
  std::mt19937_64 rng(20);
  for (int v = 6; v < 20; ++v) {
    const int target = ends[rng() % ends.size()];
    e.emplace_back(target, v);
    ends.insert(ends.end(), {target, v});
  }
  return e;
}

/// Four dense 5-node modules, joined in a circuit through hub nodes.
inline std::vector<std::pair<int, int>> module_ring_edges() {
  std::vector<std::pair<int, int>> e;
  for (int m = 0; m < 4; ++m) {
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) e.emplace_back(5 * m + i, 5 * m + j);
    e.emplace_back(5 * m, 5 * ((m + 1) % 4) + 1);
  }
  return e;
}

/// Long cycle: the largest characteristic path length of the four.
inline std::vector<std::pair<int, int>> long_cycle_edges() { return cycle_edges(20); }

}  // namespace fixture
