#pragma once

// Brute-force reference implementations used only by the tests. None of
// these share code with the library beyond the plain weight-matrix type.

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Symmetric matrix with distinct weights in (0, 1) on a random edge subset
/// (each pair present with probability `p`).
Eigen::MatrixXd random_weights(int n, std::mt19937_64& rng, double p = 1.0);

/// Adjacency as bit masks, for n <= 64.
std::vector<std::uint64_t> masks_of(const Eigen::MatrixXd& w);
std::vector<std::uint64_t> random_graph(int n, double p, std::mt19937_64& rng);

struct SubsetCliques {
  std::vector<std::int64_t> total;    // [k-1] = k-cliques
  std::vector<std::int64_t> maximal;  // [k-1] = maximal k-cliques
  int omega = 0;
};

/// Every vertex subset is tested, so keep n <= 16.
SubsetCliques subset_cliques(const std::vector<std::uint64_t>& adj);

/// Betti numbers of the clique complex, all dimensions, by Z/2 ranks of
/// explicit boundary matrices. n <= 12.
std::vector<int> clique_betti(const std::vector<std::uint64_t>& adj);

/// Persistence pairs of the strongest-first clique filtration, dimensions
/// 0..d_max (d_max <= 2, n <= 10), from persistent Betti numbers
///   mult(i,j) = b(i,j-1) - b(i,j) - b(i-1,j-1) + b(i-1,j).
/// Keys are (birth step, death step); essential classes die at step -1.
/// Also returns the Betti numbers of every prefix.
struct RankPersistence {
  std::vector<std::map<std::pair<int, int>, int>> pairs;  // [dim]
  std::vector<std::vector<int>> betti;                    // [dim][step]
  int steps = 0;
};
RankPersistence rank_persistence(const Eigen::MatrixXd& w, int d_max);

/// All-pairs shortest paths with edge length 1/w.
Eigen::MatrixXd floyd_warshall(const Eigen::MatrixXd& w);

// Direct evaluations of the weighted statistics, written from the formulas.
double clustering(const Eigen::MatrixXd& w);
double global_efficiency(const Eigen::MatrixXd& w);
double local_efficiency(const Eigen::MatrixXd& w);
double path_length(const Eigen::MatrixXd& w);
double modularity(const Eigen::MatrixXd& w, const std::vector<int>& membership);

/// Binary clustering coefficient: mean over nodes of closed triples over
/// connected pairs of neighbours.
double binary_clustering(const std::vector<std::uint64_t>& adj);

}  // namespace oracle
