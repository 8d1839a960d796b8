#include "toponet/graphstats.hpp"

#include "toponet/io.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

namespace toponet {
namespace detail {

double partition_modularity(const Eigen::MatrixXd& w, const std::vector<int>& membership) {
  const double v = w.sum();
  if (v <= 0) throw std::invalid_argument("modularity of a network with no weight");
  const Eigen::VectorXd s = w.rowwise().sum();
  const Eigen::Index n = w.rows();
  double q = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (membership[i] == membership[j]) q += w(i, j) - s(i) * s(j) / v;
  return q / v;
}

namespace {

// One level of local moves on an aggregated graph `g` (self-loops allowed).
// Returns true if any node changed community.
bool local_moves(const Eigen::MatrixXd& g, std::vector<int>& comm, std::mt19937_64& rng) {
  const Eigen::Index n = g.rows();
  const double v = g.sum();
  const Eigen::VectorXd s = g.rowwise().sum();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) total(comm[i]) += s(i);

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  Eigen::VectorXd link = Eigen::VectorXd::Zero(n);
  std::vector<int> touched;
  bool moved_any = false;
  for (bool improved = true; improved;) {
    improved = false;
    for (auto i : order) {
      const int own = comm[i];
      touched.clear();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i || g(i, j) <= 0) continue;
        if (link(comm[j]) == 0 && std::find(touched.begin(), touched.end(), comm[j]) == touched.end())
          touched.push_back(comm[j]);
        link(comm[j]) += g(i, j);
      }
      total(own) -= s(i);
      // Gain of joining c, up to a common factor: link(c) - s_i * total(c) / v.
      const double stay = (std::find(touched.begin(), touched.end(), own) != touched.end() ? link(own) : 0) -
                          s(i) * total(own) / v;
      int best = own;
      double best_gain = stay;
      for (int c : touched) {
        const double gain = link(c) - s(i) * total(c) / v;
        if (gain > best_gain + 1e-12) best = c, best_gain = gain;
      }
      total(best) += s(i);
      for (int c : touched) link(c) = 0;
      if (best != own) {
        comm[i] = best;
        improved = moved_any = true;
      }
    }
  }
  return moved_any;
}

std::vector<int> renumber(std::vector<int>& comm) {
  std::vector<int> map(comm.size(), -1);
  int next = 0;
  for (auto& c : comm) {
    if (map[c] < 0) map[c] = next++;
    c = map[c];
  }
  return map;
}

std::vector<int> louvain_once(const Eigen::MatrixXd& w, std::mt19937_64& rng) {
  const Eigen::Index n = w.rows();
  std::vector<int> node_comm(static_cast<std::size_t>(n));
  std::iota(node_comm.begin(), node_comm.end(), 0);
  Eigen::MatrixXd g = w;
  for (;;) {
    std::vector<int> comm(static_cast<std::size_t>(g.rows()));
    std::iota(comm.begin(), comm.end(), 0);
    if (!local_moves(g, comm, rng)) break;
    renumber(comm);
    const int k = *std::max_element(comm.begin(), comm.end()) + 1;
    for (auto& c : node_comm) c = comm[c];
    if (k == g.rows()) break;
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index a = 0; a < g.rows(); ++a)
      for (Eigen::Index b = 0; b < g.rows(); ++b) next(comm[a], comm[b]) += g(a, b);
    g = std::move(next);
  }
  renumber(node_comm);
  return node_comm;
}

}  // namespace

Communities louvain(const Eigen::MatrixXd& w, int restarts, std::uint64_t seed) {
  if (w.rows() == 0) throw std::invalid_argument("modularity of an empty network");
  if (w.sum() <= 0) throw std::invalid_argument("modularity of a network with no weight");
  if (restarts < 1) throw std::invalid_argument("louvain needs at least one restart");
  Communities best;
  best.q = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    std::mt19937_64 rng(io::derive_seed(seed, static_cast<std::uint64_t>(r)));
    auto membership = louvain_once(w, rng);
    const double q = partition_modularity(w, membership);
    if (q > best.q + 1e-12) best = {q, std::move(membership)};
  }
  return best;
}

}  // namespace detail

GraphStatistics compute_statistics(const WeightedNetwork& net, int restarts, std::uint64_t seed) {
  const auto& w = net.weights();
  GraphStatistics s;
  s.clustering = clustering_coefficient(w);
  s.path_length = char_path_length(w);
  s.local_efficiency = local_efficiency(w);
  s.global_efficiency = global_efficiency(w);
  s.modularity = modularity(w, restarts, seed).q;
  return s;
}

void write_statistics_table(std::ostream& out, const std::vector<StatisticsRow>& rows) {
  out << "model,sample,clustering,path_length,local_efficiency,global_efficiency,modularity\n";
  for (const auto& r : rows) {
    const auto& s = r.stats;
    out << r.network << ',' << r.sample << ',' << io::format_double(s.clustering) << ','
        << io::format_double(s.path_length) << ',' << io::format_double(s.local_efficiency) << ','
        << io::format_double(s.global_efficiency) << ',' << io::format_double(s.modularity) << '\n';
  }
}

std::vector<StatisticsRow> read_statistics_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty statistics table");
  std::vector<StatisticsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = io::split(line);
    if (f.size() != 7) throw std::runtime_error("statistics row has wrong column count: " + line);
    StatisticsRow r;
    r.network = std::string(f[0]);
    r.sample = static_cast<int>(io::parse_double(f[1]));
    r.stats = {io::parse_double(f[2]), io::parse_double(f[3]), io::parse_double(f[4]), io::parse_double(f[5]),
               io::parse_double(f[6])};
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace toponet
