#include "toponet/persistence.hpp"

#include "toponet/io.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include <absl/container/flat_hash_map.h>

namespace toponet {

namespace {

// Simplices are indexed with the combinatorial number system: vertices
// v0 > v1 > ... > vd map to sum_i C(v_i, d + 1 - i). A simplex's filtration
// value is the largest 1-based step among its edges.
using Index = std::int64_t;
using Value = std::int32_t;
constexpr Value kAbsent = std::numeric_limits<Value>::max();
constexpr int kMaxVertices = 8;

struct Cell {
  Index index;
  Value value;
};

// Within one dimension, cells are ordered by value, then by decreasing index.
struct LaterInFiltration {
  bool operator()(const Cell& a, const Cell& b) const {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
  }
};

class BinomialTable {
public:
  BinomialTable(int n, int k) : k_(k + 1), table_(static_cast<std::size_t>(n + 1) * (k + 1), 0) {
    for (int v = 0; v <= n; ++v) {
      at(v, 0) = 1;
      for (int j = 1; j <= std::min(v, k); ++j) at(v, j) = at(v - 1, j - 1) + (j <= v - 1 ? at(v - 1, j) : 0);
    }
  }
  Index operator()(int v, int k) const { return k < k_ ? table_[static_cast<std::size_t>(v) * k_ + k] : 0; }

private:
  Index& at(int v, int k) { return table_[static_cast<std::size_t>(v) * k_ + k]; }
  int k_;
  std::vector<Index> table_;
};

class FlagComplex {
public:
  FlagComplex(const Filtration& filt, int max_dim)
      : n_(filt.node_count()),
        binom_(filt.node_count(), max_dim + 2),
        label_(vertex_labels(filt)),
        rank_(static_cast<std::size_t>(n_) * n_, kAbsent) {
    for (int i = 0; i < n_; ++i) rank_[static_cast<std::size_t>(i) * n_ + i] = 0;
    const auto& edges = filt.edges();
    for (std::size_t t = 0; t < edges.size(); ++t) {
      const int a = label_[edges[t].i], b = label_[edges[t].j];
      rank_[static_cast<std::size_t>(a) * n_ + b] = rank_[static_cast<std::size_t>(b) * n_ + a] =
          static_cast<Value>(t + 1);
    }
  }

  // Internal vertex label of node i.
  int label(int i) const { return label_[i]; }

  int node_count() const { return n_; }
  Value edge_value(int i, int j) const { return rank_[static_cast<std::size_t>(i) * n_ + j]; }
  Index edge_index(int i, int j) const { return i > j ? binom_(i, 2) + j : binom_(j, 2) + i; }

  // Vertices in decreasing order.
  void vertices(Index index, int dim, std::array<int, kMaxVertices>& out) const {
    int upper = n_;
    for (int pos = 0, k = dim + 1; pos <= dim; ++pos, --k) {
      int lo = k - 1, hi = upper - 1;
      while (lo < hi) {
        const int mid = (lo + hi + 1) / 2;
        if (binom_(mid, k) <= index)
          lo = mid;
        else
          hi = mid - 1;
      }
      out[pos] = lo;
      index -= binom_(lo, k);
      upper = lo;
    }
  }

  // Visits cofacets in decreasing index order while visit returns true.
  // With only_above, just the cofacets whose new vertex exceeds every vertex
  // of the simplex.
  template <typename Visit>
  void cofacets(const Cell& s, int dim, bool only_above, Visit&& visit) const {
    std::array<int, kMaxVertices> v{};
    vertices(s.index, dim, v);
    Index below = s.index, above = 0;
    int k = dim + 1, pos = 0;
    for (int j = n_ - 1; j >= 0; --j) {
      if (pos <= dim && j == v[pos]) {
        if (only_above) return;
        below -= binom_(v[pos], k);
        above += binom_(v[pos], k + 1);
        ++pos;
        --k;
        continue;
      }
      const Value* row = &rank_[static_cast<std::size_t>(j) * n_];
      Value value = s.value;
      for (int p = 0; p <= dim; ++p) value = std::max(value, row[v[p]]);
      if (value == kAbsent) continue;
      if (!visit(Cell{above + binom_(j, k + 1) + below, value})) return;
    }
  }

private:
  // Weakest nodes get the lowest labels. Barcodes do not depend on labels,
  // but on random networks this ordering yields far more emergent pairs.
  static std::vector<int> vertex_labels(const Filtration& filt) {
    const int n = filt.node_count();
    const auto steps = static_cast<std::int64_t>(filt.step_count());
    std::vector<std::int64_t> strength(static_cast<std::size_t>(n), 0);
    for (std::int64_t t = 0; t < steps; ++t) {
      strength[filt.edges()[t].i] += steps - t;
      strength[filt.edges()[t].j] += steps - t;
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return strength[a] < strength[b]; });
    std::vector<int> label(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) label[order[k]] = k;
    return label;
  }

  int n_;
  BinomialTable binom_;
  std::vector<int> label_;
  std::vector<Value> rank_;
};

// Working column: a binary heap whose top is the earliest cell. Storage is
// kept across columns.
class Heap {
public:
  bool empty() const { return cells_.empty(); }
  const Cell& top() const { return cells_.front(); }
  void push(const Cell& c) {
    cells_.push_back(c);
    std::push_heap(cells_.begin(), cells_.end(), LaterInFiltration{});
  }
  void pop() {
    std::pop_heap(cells_.begin(), cells_.end(), LaterInFiltration{});
    cells_.pop_back();
  }
  void clear() { cells_.clear(); }

private:
  std::vector<Cell> cells_;
};

// Removes Z/2-cancelling duplicates from the top; returns false when empty.
bool pop_pivot(Heap& heap, Cell& pivot) {
  while (!heap.empty()) {
    pivot = heap.top();
    heap.pop();
    if (!heap.empty() && heap.top().index == pivot.index) {
      heap.pop();
      continue;
    }
    return true;
  }
  return false;
}

bool get_pivot(Heap& heap, Cell& pivot) {
  if (!pop_pivot(heap, pivot)) return false;
  heap.push(pivot);
  return true;
}

using RawPair = std::pair<Value, Value>;

// Cohomology reduction of one dimension with clearing and emergent pairs.
// Reduced columns are stored as reduction chains and their coboundaries
// recomputed on demand.
class CoboundaryReducer {
public:
  CoboundaryReducer(const FlagComplex& cx, int dim) : cx_(cx), dim_(dim) {}

  // columns must be in reverse filtration order.
  void reduce(const std::vector<Cell>& columns, std::vector<RawPair>& pairs) {
    pivots_.reserve(columns.size());
    Heap heap;
    std::vector<Cell> chain;
    for (const Cell& column : columns) {
      heap.clear();
      chain.clear();
      Cell pivot{};
      bool found = false;
      bool check_emergent = true;
      cx_.cofacets(column, dim_, false, [&](const Cell& c) {
        if (c.value == column.value) {
          if (check_emergent && !pivots_.contains(c.index)) {
            pivot = c;
            found = true;
            return false;
          }
          check_emergent = false;
        }
        heap.push(c);
        return true;
      });
      if (!found) found = get_pivot(heap, pivot);

      while (found) {
        const auto it = pivots_.find(pivot.index);
        if (it == pivots_.end()) break;
        const Record& rec = it->second;
        add_coboundary(rec.simplex, heap);
        chain.push_back(rec.simplex);
        for (std::uint32_t k = 0; k < rec.length; ++k) {
          const Cell& c = chains_[rec.offset + k];
          add_coboundary(c, heap);
          chain.push_back(c);
        }
        found = get_pivot(heap, pivot);
      }

      if (!found) {
        pairs.emplace_back(column.value, kAbsent);
        continue;
      }
      if (pivot.value > column.value) pairs.emplace_back(column.value, pivot.value);
      cancel_pairs(chain);
      pivots_.emplace(pivot.index, Record{column, chains_.size(), static_cast<std::uint32_t>(chain.size())});
      chains_.insert(chains_.end(), chain.begin(), chain.end());
    }
  }

  bool is_pivot(Index cofacet) const { return pivots_.contains(cofacet); }

private:
  // The reduced column is the coboundary of `simplex` plus the coboundaries
  // of chains_[offset, offset + length).
  struct Record {
    Cell simplex;
    std::size_t offset;
    std::uint32_t length;
  };

  void add_coboundary(const Cell& s, Heap& heap) const {
    cx_.cofacets(s, dim_, false, [&](const Cell& c) {
      heap.push(c);
      return true;
    });
  }

  static void cancel_pairs(std::vector<Cell>& chain) {
    std::sort(chain.begin(), chain.end(), [](const Cell& a, const Cell& b) { return a.index < b.index; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < chain.size();) {
      std::size_t j = i;
      while (j < chain.size() && chain[j].index == chain[i].index) ++j;
      if ((j - i) % 2 == 1) chain[out++] = chain[i];
      i = j;
    }
    chain.resize(out);
  }

  const FlagComplex& cx_;
  int dim_;
  absl::flat_hash_map<Index, Record> pivots_;
  std::vector<Cell> chains_;
};

class UnionFind {
public:
  explicit UnionFind(int n) : parent_(static_cast<std::size_t>(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

private:
  std::vector<int> parent_;
};

}  // namespace

const std::vector<Interval>& PersistenceDiagram::in_dim(int d) const {
  static const std::vector<Interval> empty;
  return d >= 0 && d < static_cast<int>(intervals.size()) ? intervals[d] : empty;
}

std::size_t PersistenceDiagram::total_pairs() const {
  std::size_t c = 0;
  for (const auto& v : intervals) c += v.size();
  return c;
}

PersistenceDiagram compute_persistence(const Filtration& filt, int d_max) {
  if (d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
  if (d_max + 2 > kMaxVertices) throw std::invalid_argument("d_max too large");
  const int n = filt.node_count();
  const FlagComplex cx(filt, d_max);

  std::vector<std::vector<RawPair>> raw(static_cast<std::size_t>(d_max) + 1);

  // Dimension 0: components merge at the edge joining them.
  std::vector<Cell> simplices;
  std::vector<Cell> columns;
  {
    UnionFind uf(n);
    const auto& edges = filt.edges();
    simplices.reserve(edges.size());
    for (std::size_t t = 0; t < edges.size(); ++t) {
      const Cell e{cx.edge_index(cx.label(edges[t].i), cx.label(edges[t].j)), static_cast<Value>(t + 1)};
      simplices.push_back(e);
      if (uf.unite(edges[t].i, edges[t].j))
        raw[0].emplace_back(0, e.value);
      else
        columns.push_back(e);
    }
    for (int v = 0; v < n; ++v)
      if (uf.find(v) == v) raw[0].emplace_back(0, kAbsent);
    std::reverse(columns.begin(), columns.end());
  }

  for (int dim = 1; dim <= d_max; ++dim) {
    CoboundaryReducer reducer(cx, dim);
    reducer.reduce(columns, raw[dim]);
    if (dim == d_max) break;

    std::vector<Cell> next_simplices;
    std::vector<Cell> next_columns;
    for (const Cell& s : simplices) {
      cx.cofacets(s, dim, true, [&](const Cell& c) {
        next_simplices.push_back(c);
        if (!reducer.is_pivot(c.index)) next_columns.push_back(c);
        return true;
      });
    }
    std::sort(next_columns.begin(), next_columns.end(), [](const Cell& a, const Cell& b) {
      return LaterInFiltration{}(a, b);
    });
    simplices = std::move(next_simplices);
    columns = std::move(next_columns);
  }

  PersistenceDiagram diag;
  diag.node_count = n;
  diag.d_max = d_max;
  diag.intervals.resize(raw.size());
  for (std::size_t d = 0; d < raw.size(); ++d) {
    auto& out = diag.intervals[d];
    out.reserve(raw[d].size());
    for (const auto& [b, e] : raw[d])
      out.push_back({filt.density(b), e == kAbsent ? INFINITY : filt.density(e)});
    std::sort(out.begin(), out.end());
  }
  return diag;
}

std::vector<int> betti_curve(const PersistenceDiagram& diag, int d, const std::vector<double>& grid) {
  std::vector<int> out(grid.size(), 0);
  for (const auto& iv : diag.in_dim(d)) {
    const auto lo = std::lower_bound(grid.begin(), grid.end(), iv.birth);
    const auto hi = std::lower_bound(grid.begin(), grid.end(), iv.death);
    for (auto it = lo; it < hi; ++it) ++out[static_cast<std::size_t>(it - grid.begin())];
  }
  return out;
}

std::vector<std::vector<int>> betti_curves(const PersistenceDiagram& diag, const std::vector<double>& grid) {
  std::vector<std::vector<int>> out;
  for (int d = 0; d <= diag.d_max; ++d) out.push_back(betti_curve(diag, d, grid));
  return out;
}

std::vector<int> final_betti(const PersistenceDiagram& diag) {
  std::vector<int> out(static_cast<std::size_t>(diag.d_max) + 1, 0);
  for (int d = 0; d <= diag.d_max; ++d)
    for (const auto& iv : diag.in_dim(d))
      if (iv.essential()) ++out[d];
  return out;
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diag) {
  out << "# nodes=" << diag.node_count << " dmax=" << diag.d_max << '\n';
  out << "dimension,birth,death\n";
  for (int d = 0; d <= diag.d_max; ++d)
    for (const auto& iv : diag.in_dim(d))
      out << d << ',' << io::format_double(iv.birth) << ',' << io::format_double(iv.death) << '\n';
}

PersistenceDiagram read_diagram_csv(std::istream& in) {
  PersistenceDiagram diag;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (auto p = line.find("nodes="); p != std::string::npos) diag.node_count = std::stoi(line.substr(p + 6));
      if (auto p = line.find("dmax="); p != std::string::npos) diag.d_max = std::stoi(line.substr(p + 5));
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("dimension", 0) == 0) continue;
    }
    const auto f = io::split(line);
    if (f.size() != 3) throw std::runtime_error("diagram row needs 3 columns: " + line);
    const int d = static_cast<int>(io::parse_double(f[0]));
    diag.d_max = std::max(diag.d_max, d);
    if (static_cast<int>(diag.intervals.size()) <= d) diag.intervals.resize(static_cast<std::size_t>(d) + 1);
    diag.intervals[d].push_back({io::parse_double(f[1]), io::parse_double(f[2])});
  }
  diag.intervals.resize(static_cast<std::size_t>(diag.d_max) + 1);
  for (auto& v : diag.intervals) std::sort(v.begin(), v.end());
  return diag;
}

}  // namespace toponet
