#pragma once

#include "toponet/node_set.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace toponet {

/// Number of unordered node pairs, C(n, 2).
constexpr std::int64_t pair_count(std::int64_t n) { return n * (n - 1) / 2; }

class network_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Undirected weighted network on n nodes. Weights are a symmetric,
/// nonnegative, finite matrix with zero diagonal; a zero off-diagonal entry
/// means the edge is absent.
class WeightedNetwork {
public:
  WeightedNetwork() = default;
  explicit WeightedNetwork(Eigen::MatrixXd weights, std::vector<std::string> labels = {});

  Eigen::Index size() const { return weights_.rows(); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(Eigen::Index i, Eigen::Index j) const { return weights_(i, j); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Number of node pairs with positive weight.
  std::int64_t edge_count() const;

private:
  Eigen::MatrixXd weights_;
  std::vector<std::string> labels_;
};

/// Throws network_error naming the first violating entry when `w` is not a
/// valid weight matrix.
void validate_weights(const Eigen::MatrixXd& w);

/// Adds one independent Uniform[0, amplitude] draw to every present edge.
/// Absent (zero) pairs stay absent.
WeightedNetwork jitter(const WeightedNetwork& net, std::uint64_t seed, double amplitude = 0.001);

/// True when every positive off-diagonal weight is distinct.
bool has_distinct_weights(const WeightedNetwork& net);

struct FiltrationEdge {
  int i;
  int j;
  double weight;
};

/// Edges in strongest-first order. Step t (1-based) has density t / C(n,2).
class Filtration {
public:
  Filtration(int n, std::vector<FiltrationEdge> edges);

  int node_count() const { return n_; }
  std::int64_t pair_total() const { return pair_count(n_); }
  std::size_t step_count() const { return edges_.size(); }
  const std::vector<FiltrationEdge>& edges() const { return edges_; }

  /// Density after `steps` edges have been added.
  double density(std::int64_t steps) const {
    return static_cast<double>(steps) / static_cast<double>(pair_total());
  }
  /// Densities of steps 1..step_count().
  std::vector<double> densities() const;

  /// Number of edges present at density rho: floor(rho * C(n,2)) capped at
  /// the edge count.
  std::size_t steps_at(double rho) const;

  /// rank(i,j) = 1-based filtration step of edge (i,j); 0 when absent.
  std::vector<std::int32_t> rank_matrix() const;

private:
  int n_;
  std::vector<FiltrationEdge> edges_;
};

/// Sorts positive-weight edges strongest-first. Throws network_error when two
/// positive weights tie (apply jitter first).
Filtration build_filtration(const WeightedNetwork& net);

/// Simple undirected graph stored as adjacency bit rows.
class BinaryGraph {
public:
  explicit BinaryGraph(int n = 0) : n_(n), rows_(static_cast<std::size_t>(n), NodeSet(n)) {}

  int node_count() const { return n_; }
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const { return rows_[i].contains(j); }
  const NodeSet& neighbors(int i) const { return rows_[i]; }
  int degree(int i) const { return static_cast<int>(rows_[i].count()); }
  std::int64_t edge_count() const;

private:
  int n_;
  std::vector<NodeSet> rows_;
};

/// Graph of the first floor(rho * C(n,2)) filtration edges.
BinaryGraph threshold(const Filtration& filt, double rho);
/// Graph of the first `steps` filtration edges.
BinaryGraph threshold_steps(const Filtration& filt, std::size_t steps);

// Adjacency CSV: n rows of n comma-separated decimals, no header.
WeightedNetwork read_adjacency_csv(std::istream& in);
WeightedNetwork read_adjacency_csv(const std::filesystem::path& path);
void write_adjacency_csv(std::ostream& out, const WeightedNetwork& net);
void write_adjacency_csv(const std::filesystem::path& path, const WeightedNetwork& net);

/// Like read_adjacency_csv, but accepts tied weights by jittering them.
/// `jittered` reports whether that happened.
WeightedNetwork ingest(const std::filesystem::path& path, std::uint64_t seed, bool* jittered = nullptr);

}  // namespace toponet
