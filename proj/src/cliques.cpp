#include "toponet/cliques.hpp"

#include "toponet/io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace toponet {

namespace {

// Degeneracy (smallest-last) ordering.
std::vector<int> degeneracy_order(const BinaryGraph& g) {
  const int n = g.node_count();
  std::vector<int> degree(n);
  int max_degree = 0;
  for (int v = 0; v < n; ++v) max_degree = std::max(max_degree, degree[v] = g.degree(v));
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(max_degree) + 1);
  for (int v = 0; v < n; ++v) buckets[degree[v]].push_back(v);
  std::vector<char> removed(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int d = 0;
  while (static_cast<int>(order.size()) < n) {
    d = std::max(d - 1, 0);
    while (buckets[d].empty()) ++d;
    const int v = buckets[d].back();
    buckets[d].pop_back();
    if (removed[v] || degree[v] != d) continue;
    removed[v] = 1;
    order.push_back(v);
    g.neighbors(v).for_each([&](std::size_t u) {
      if (!removed[u]) buckets[--degree[u]].push_back(static_cast<int>(u));
    });
  }
  return order;
}

class BronKerbosch {
public:
  BronKerbosch(const BinaryGraph& g, const std::function<void(const std::vector<int>&)>& visit)
      : g_(g), visit_(visit) {}

  void run() {
    const int n = g_.node_count();
    NodeSet later = NodeSet::full(static_cast<std::size_t>(n));
    NodeSet earlier(static_cast<std::size_t>(n));
    for (int v : degeneracy_order(g_)) {
      later.erase(v);
      clique_.assign(1, v);
      expand(g_.neighbors(v) & later, g_.neighbors(v) & earlier);
      earlier.insert(v);
    }
  }

private:
  void expand(NodeSet candidates, NodeSet excluded) {
    if (candidates.empty()) {
      if (excluded.empty()) {
        sorted_ = clique_;
        std::sort(sorted_.begin(), sorted_.end());
        visit_(sorted_);
      }
      return;
    }
    // Tomita pivot: maximize |candidates ∩ N(u)| over candidates ∪ excluded.
    int pivot = -1;
    std::size_t best = 0;
    auto consider = [&](std::size_t u) {
      const std::size_t c = candidates.intersection_count(g_.neighbors(static_cast<int>(u)));
      if (pivot < 0 || c > best) {
        pivot = static_cast<int>(u);
        best = c;
      }
    };
    candidates.for_each(consider);
    excluded.for_each(consider);

    NodeSet branch = candidates;
    branch.subtract(g_.neighbors(pivot));
    for (int v : branch.members()) {
      const NodeSet& nv = g_.neighbors(v);
      clique_.push_back(v);
      expand(candidates & nv, excluded & nv);
      clique_.pop_back();
      candidates.erase(v);
      excluded.insert(v);
    }
  }

  const BinaryGraph& g_;
  const std::function<void(const std::vector<int>&)>& visit_;
  std::vector<int> clique_;
  std::vector<int> sorted_;
};

void extend_cliques(const BinaryGraph& g, std::vector<int>& clique, const NodeSet& common, int remaining,
                    const std::function<void(const std::vector<int>&)>& visit) {
  visit(clique);
  if (remaining == 0) return;
  // extend only with nodes above the current maximum so each clique is produced once
  const int top = clique.back();
  common.for_each([&](std::size_t u) {
    if (static_cast<int>(u) <= top) return;
    clique.push_back(static_cast<int>(u));
    extend_cliques(g, clique, common & g.neighbors(static_cast<int>(u)), remaining - 1, visit);
    clique.pop_back();
  });
}

void for_each_clique(const BinaryGraph& g, int max_size, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> clique;
  for (int v = 0; v < g.node_count(); ++v) {
    clique.assign(1, v);
    extend_cliques(g, clique, g.neighbors(v), max_size - 1, visit);
  }
}

}  // namespace

void for_each_maximal_clique(const BinaryGraph& g, const std::function<void(const std::vector<int>&)>& visit) {
  BronKerbosch(g, visit).run();
}

MaximalCliqueVector enumerate_maximal(const BinaryGraph& g, std::optional<int> size_cap) {
  if (size_cap && *size_cap < 1) throw std::invalid_argument("size_cap must be at least 1");
  MaximalCliqueVector out;
  for_each_maximal_clique(g, [&](const std::vector<int>& c) {
    const int k = static_cast<int>(c.size());
    out.omega = std::max(out.omega, k);
    if (size_cap && k > *size_cap) return;
    if (static_cast<int>(out.counts.size()) < k) out.counts.resize(k, 0);
    ++out.counts[k - 1];
  });
  return out;
}

CliqueComplex build_complex(const BinaryGraph& g, int dim_cap) {
  if (dim_cap < 1) throw std::invalid_argument("dim_cap must be at least 1");
  CliqueComplex cx;
  cx.dim_cap = dim_cap;
  cx.by_dim.resize(static_cast<std::size_t>(dim_cap) + 1);
  for_each_clique(g, dim_cap + 1, [&](const std::vector<int>& c) { cx.by_dim[c.size() - 1].push_back(c); });
  for (auto& layer : cx.by_dim) std::sort(layer.begin(), layer.end());
  return cx;
}

std::vector<std::int64_t> count_cliques(const BinaryGraph& g, int max_size) {
  if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
  std::vector<std::int64_t> totals(static_cast<std::size_t>(max_size), 0);
  for_each_clique(g, max_size, [&](const std::vector<int>& c) { ++totals[c.size() - 1]; });
  return totals;
}

int CliqueProfile::max_omega() const {
  int w = 0;
  for (const auto& r : rows) w = std::max(w, r.omega);
  return w;
}

CliqueProfile track_profile(const Filtration& filt, double rho_max, double grid_step) {
  if (!(rho_max > 0 && rho_max <= 1)) throw std::invalid_argument("rho_max must lie in (0, 1]");
  const std::size_t last = filt.steps_at(rho_max);
  std::size_t stride = 1;
  if (grid_step > 0)
    stride = std::max<std::size_t>(1, static_cast<std::size_t>(grid_step * static_cast<double>(filt.pair_total()) + 0.5));

  std::vector<std::size_t> steps;
  for (std::size_t t = stride; t <= last; t += stride) steps.push_back(t);
  if (steps.empty() || steps.back() != last) steps.push_back(last);

  CliqueProfile profile;
  BinaryGraph g(filt.node_count());
  std::size_t added = 0;
  for (std::size_t t : steps) {
    for (; added < t; ++added) g.add_edge(filt.edges()[added].i, filt.edges()[added].j);
    profile.steps.push_back(t);
    profile.grid.push_back(filt.density(static_cast<std::int64_t>(t)));
    profile.rows.push_back(enumerate_maximal(g));
  }
  return profile;
}

void write_profile_csv(std::ostream& out, const CliqueProfile& profile) {
  const int width = std::max(1, profile.max_omega());
  out << "rho";
  for (int k = 1; k <= width; ++k) out << ",M" << k;
  out << '\n';
  for (std::size_t r = 0; r < profile.rows.size(); ++r) {
    out << io::format_double(profile.grid[r]);
    for (int k = 1; k <= width; ++k) out << ',' << profile.rows[r].at(k);
    out << '\n';
  }
}

CliqueProfile read_profile_csv(std::istream& in) {
  CliqueProfile profile;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty clique profile");
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = io::split(line);
    profile.grid.push_back(io::parse_double(fields[0]));
    MaximalCliqueVector row;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto c = static_cast<std::int64_t>(io::parse_double(fields[k]));
      row.counts.push_back(c);
      if (c > 0) row.omega = static_cast<int>(k);
    }
    row.counts.resize(static_cast<std::size_t>(row.omega));
    profile.rows.push_back(std::move(row));
  }
  return profile;
}

}  // namespace toponet
