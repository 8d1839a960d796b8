#include "toponet/network.hpp"

#include "toponet/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace toponet {

void validate_weights(const Eigen::MatrixXd& w) {
  if (w.rows() != w.cols())
    throw network_error("weight matrix is not square (" + std::to_string(w.rows()) + "x" +
                        std::to_string(w.cols()) + ")");
  if (w.rows() < 1) throw network_error("weight matrix is empty");
  const Eigen::Index n = w.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double a = w(i, j), b = w(j, i);
      const std::string where = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      if (!std::isfinite(a) || !std::isfinite(b)) throw network_error("non-finite weight at " + where);
      if (a < 0 || b < 0) throw network_error("negative weight at " + where);
      if (i == j && a != 0) throw network_error("nonzero diagonal at " + where);
      if (a != b) throw network_error("asymmetric weights at " + where);
    }
  }
}

WeightedNetwork::WeightedNetwork(Eigen::MatrixXd weights, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  validate_weights(weights_);
  if (!labels_.empty() && static_cast<Eigen::Index>(labels_.size()) != weights_.rows())
    throw network_error("label count does not match node count");
}

std::int64_t WeightedNetwork::edge_count() const {
  std::int64_t c = 0;
  for (Eigen::Index i = 0; i < size(); ++i)
    for (Eigen::Index j = i + 1; j < size(); ++j)
      if (weights_(i, j) > 0) ++c;
  return c;
}

WeightedNetwork jitter(const WeightedNetwork& net, std::uint64_t seed, double amplitude) {
  if (!(amplitude > 0)) throw network_error("jitter amplitude must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(0.0, amplitude);
  Eigen::MatrixXd w = net.weights();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < w.cols(); ++j) {
      if (w(i, j) <= 0) continue;
      w(i, j) += noise(rng);
      w(j, i) = w(i, j);
    }
  }
  return WeightedNetwork(std::move(w), net.labels());
}

bool has_distinct_weights(const WeightedNetwork& net) {
  std::unordered_set<double> seen;
  const auto& w = net.weights();
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = i + 1; j < w.cols(); ++j)
      if (w(i, j) > 0 && !seen.insert(w(i, j)).second) return false;
  return true;
}

Filtration::Filtration(int n, std::vector<FiltrationEdge> edges) : n_(n), edges_(std::move(edges)) {
  for (std::size_t t = 1; t < edges_.size(); ++t)
    if (!(edges_[t].weight < edges_[t - 1].weight))
      throw network_error("filtration edge weights must be strictly decreasing");
}

std::vector<double> Filtration::densities() const {
  std::vector<double> out(edges_.size());
  for (std::size_t t = 0; t < edges_.size(); ++t) out[t] = density(static_cast<std::int64_t>(t + 1));
  return out;
}

std::size_t Filtration::steps_at(double rho) const {
  if (rho <= 0) return 0;
  const double exact = rho * static_cast<double>(pair_total());
  const auto steps = static_cast<std::size_t>(std::floor(exact + 1e-9));
  return std::min(steps, edges_.size());
}

std::vector<std::int32_t> Filtration::rank_matrix() const {
  std::vector<std::int32_t> rank(static_cast<std::size_t>(n_) * n_, 0);
  for (std::size_t t = 0; t < edges_.size(); ++t) {
    const auto& e = edges_[t];
    rank[static_cast<std::size_t>(e.i) * n_ + e.j] = static_cast<std::int32_t>(t + 1);
    rank[static_cast<std::size_t>(e.j) * n_ + e.i] = static_cast<std::int32_t>(t + 1);
  }
  return rank;
}

Filtration build_filtration(const WeightedNetwork& net) {
  const int n = static_cast<int>(net.size());
  std::vector<FiltrationEdge> edges;
  edges.reserve(static_cast<std::size_t>(pair_count(n)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (net.weight(i, j) > 0) edges.push_back({i, j, net.weight(i, j)});
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  for (std::size_t t = 1; t < edges.size(); ++t) {
    if (edges[t].weight == edges[t - 1].weight) {
      const auto& a = edges[t - 1];
      const auto& b = edges[t];
      throw network_error("tied edge weights at (" + std::to_string(a.i) + "," + std::to_string(a.j) +
                          ") and (" + std::to_string(b.i) + "," + std::to_string(b.j) +
                          "); jitter the network first");
    }
  }
  return Filtration(n, std::move(edges));
}

void BinaryGraph::add_edge(int i, int j) {
  if (i == j) throw network_error("self-loop at node " + std::to_string(i));
  rows_[i].insert(j);
  rows_[j].insert(i);
}

std::int64_t BinaryGraph::edge_count() const {
  std::int64_t twice = 0;
  for (const auto& r : rows_) twice += static_cast<std::int64_t>(r.count());
  return twice / 2;
}

BinaryGraph threshold_steps(const Filtration& filt, std::size_t steps) {
  BinaryGraph g(filt.node_count());
  steps = std::min(steps, filt.step_count());
  for (std::size_t t = 0; t < steps; ++t) g.add_edge(filt.edges()[t].i, filt.edges()[t].j);
  return g;
}

BinaryGraph threshold(const Filtration& filt, double rho) { return threshold_steps(filt, filt.steps_at(rho)); }

WeightedNetwork read_adjacency_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    for (auto field : io::split(line)) {
      try {
        const double v = io::parse_double(field);
        if (std::isnan(v)) throw network_error("NaN weight on line " + std::to_string(lineno));
        row.push_back(v);
      } catch (const std::invalid_argument&) {
        throw network_error("line " + std::to_string(lineno) + ": cannot parse '" + std::string(field) + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  if (n == 0) throw network_error("adjacency file is empty");
  Eigen::MatrixXd w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw network_error("adjacency matrix is not square: row " + std::to_string(i) + " has " +
                          std::to_string(rows[i].size()) + " columns, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) w(i, j) = rows[i][j];
  }
  return WeightedNetwork(std::move(w));
}

WeightedNetwork read_adjacency_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw network_error("cannot open " + path.string());
  return read_adjacency_csv(in);
}

void write_adjacency_csv(std::ostream& out, const WeightedNetwork& net) {
  const auto& w = net.weights();
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (j) out << ',';
      out << io::format_double(w(i, j));
    }
    out << '\n';
  }
}

void write_adjacency_csv(const std::filesystem::path& path, const WeightedNetwork& net) {
  std::ostringstream ss;
  write_adjacency_csv(ss, net);
  io::write_file(path, ss.str());
}

WeightedNetwork ingest(const std::filesystem::path& path, std::uint64_t seed, bool* jittered) {
  WeightedNetwork net = read_adjacency_csv(path);
  const bool ties = !has_distinct_weights(net);
  if (jittered) *jittered = ties;
  return ties ? jitter(net, seed) : net;
}

}  // namespace toponet
