#pragma once

#include "toponet/network.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace toponet {

struct GraphStatistics {
  double clustering = 0;
  double path_length = 0;
  double local_efficiency = 0;
  double global_efficiency = 0;
  double modularity = 0;
};

namespace detail {

// Dense Dijkstra from `source` with edge length 1/w. Nodes with skip[v] set
// are treated as deleted.
template <typename Derived>
Eigen::VectorXd dijkstra(const Eigen::MatrixBase<Derived>& w, Eigen::Index source,
                         const std::vector<char>* skip = nullptr) {
  const Eigen::Index n = w.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd dist = Eigen::VectorXd::Constant(n, inf);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  dist(source) = 0;
  for (;;) {
    Eigen::Index u = -1;
    for (Eigen::Index v = 0; v < n; ++v)
      if (!done[v] && std::isfinite(dist(v)) && (u < 0 || dist(v) < dist(u))) u = v;
    if (u < 0) break;
    done[u] = 1;
    for (Eigen::Index v = 0; v < n; ++v) {
      if (done[v] || w(u, v) <= 0 || (skip && (*skip)[v])) continue;
      const double cand = dist(u) + 1.0 / w(u, v);
      if (cand < dist(v)) dist(v) = cand;
    }
  }
  return dist;
}

struct Communities {
  double q = 0;
  std::vector<int> membership;
};

Communities louvain(const Eigen::MatrixXd& w, int restarts, std::uint64_t seed);
double partition_modularity(const Eigen::MatrixXd& w, const std::vector<int>& membership);

}  // namespace detail

/// Mean weighted clustering coefficient with weights scaled by the largest
/// weight: C_i = sum over ordered neighbour pairs of the cube root of the
/// triangle's weight product, divided by k_i(k_i - 1).
template <typename Derived>
double clustering_coefficient(const Eigen::MatrixBase<Derived>& w) {
  const Eigen::Index n = w.rows();
  if (n < 3) throw std::invalid_argument("clustering coefficient needs at least 3 nodes");
  const double top = w.maxCoeff();
  if (top <= 0) return 0;
  const Eigen::MatrixXd s = w / top;
  double total = 0;
  std::vector<Eigen::Index> nb;
  for (Eigen::Index i = 0; i < n; ++i) {
    nb.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i && s(i, j) > 0) nb.push_back(j);
    const auto k = static_cast<double>(nb.size());
    if (nb.size() < 2) continue;
    double sum = 0;
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (s(nb[a], nb[b]) > 0) sum += 2 * std::cbrt(s(i, nb[a]) * s(i, nb[b]) * s(nb[a], nb[b]));
    total += sum / (k * (k - 1));
  }
  return total / static_cast<double>(n);
}

/// All-pairs shortest paths with edge length 1/w; unreachable pairs are inf.
template <typename Derived>
Eigen::MatrixXd weighted_distances(const Eigen::MatrixBase<Derived>& w) {
  const Eigen::Index n = w.rows();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d.row(i) = detail::dijkstra(w, i).transpose();
  return d;
}

/// Mean over nodes of (1/(n-1)) sum_j 1/d_ij.
template <typename Derived>
double global_efficiency(const Eigen::MatrixBase<Derived>& w) {
  const Eigen::Index n = w.rows();
  if (n < 2) throw std::invalid_argument("efficiency needs at least 2 nodes");
  const Eigen::MatrixXd d = weighted_distances(w);
  double total = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && std::isfinite(d(i, j))) total += 1.0 / d(i, j);
  return total / static_cast<double>(n * (n - 1));
}

/// Mean over nodes of the neighbourhood efficiency. Distances between
/// neighbours j, h of i are taken in the graph with i removed, and the cube
/// root covers w_ij w_ih / d_jh.
template <typename Derived>
double local_efficiency(const Eigen::MatrixBase<Derived>& w) {
  const Eigen::Index n = w.rows();
  if (n < 2) throw std::invalid_argument("efficiency needs at least 2 nodes");
  double total = 0;
  std::vector<char> skip(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> nb;
  for (Eigen::Index i = 0; i < n; ++i) {
    nb.clear();
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i && w(i, j) > 0) nb.push_back(j);
    if (nb.size() < 2) continue;
    skip[i] = 1;
    double sum = 0;
    for (auto j : nb) {
      const Eigen::VectorXd dj = detail::dijkstra(w, j, &skip);
      for (auto h : nb)
        if (h != j && std::isfinite(dj(h))) sum += std::cbrt(w(i, j) * w(i, h) / dj(h));
    }
    skip[i] = 0;
    const auto k = static_cast<double>(nb.size());
    total += sum / (k * (k - 1));
  }
  return total / static_cast<double>(n);
}

/// Mean over nodes of the mean finite distance to the other nodes. Nodes
/// with no reachable partner are left out; inf if no node has one.
template <typename Derived>
double char_path_length(const Eigen::MatrixBase<Derived>& w) {
  const Eigen::Index n = w.rows();
  if (n < 2) throw std::invalid_argument("path length needs at least 2 nodes");
  const Eigen::MatrixXd d = weighted_distances(w);
  double total = 0;
  int counted = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double sum = 0;
    int reach = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i && std::isfinite(d(i, j))) sum += d(i, j), ++reach;
    if (reach == 0) continue;
    total += sum / reach;
    ++counted;
  }
  return counted ? total / counted : std::numeric_limits<double>::infinity();
}

/// Q of a given community assignment.
template <typename Derived>
double modularity_of(const Eigen::MatrixBase<Derived>& w, const std::vector<int>& membership) {
  if (membership.size() != static_cast<std::size_t>(w.rows()))
    throw std::invalid_argument("membership length differs from node count");
  return detail::partition_modularity(w.eval(), membership);
}

/// Louvain optimisation of Q, best of `restarts` seeded node orders.
template <typename Derived>
detail::Communities modularity(const Eigen::MatrixBase<Derived>& w, int restarts = 20, std::uint64_t seed = 1) {
  return detail::louvain(w.eval(), restarts, seed);
}

GraphStatistics compute_statistics(const WeightedNetwork& net, int restarts = 20, std::uint64_t seed = 1);

// "model,sample,clustering,path_length,local_efficiency,global_efficiency,modularity"
struct StatisticsRow {
  std::string network;
  int sample = 0;
  GraphStatistics stats;
};
void write_statistics_table(std::ostream& out, const std::vector<StatisticsRow>& rows);
std::vector<StatisticsRow> read_statistics_table(std::istream& in);

}  // namespace toponet
