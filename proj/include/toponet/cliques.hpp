#pragma once

#include "toponet/network.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace toponet {

/// counts[k-1] is the number of maximal k-cliques; omega is the clique number.
struct MaximalCliqueVector {
  std::vector<std::int64_t> counts;
  int omega = 0;

  std::int64_t at(int k) const {
    return k >= 1 && k <= static_cast<int>(counts.size()) ? counts[k - 1] : 0;
  }
  friend bool operator==(const MaximalCliqueVector&, const MaximalCliqueVector&) = default;
};

/// Counts maximal cliques by size with pivoting Bron-Kerbosch over a
/// degeneracy ordering. With `size_cap`, counts above the cap are dropped but
/// omega is still exact.
MaximalCliqueVector enumerate_maximal(const BinaryGraph& g, std::optional<int> size_cap = std::nullopt);

/// Calls visit(clique) once per maximal clique; the clique is sorted.
void for_each_maximal_clique(const BinaryGraph& g, const std::function<void(const std::vector<int>&)>& visit);

/// by_dim[d] holds every (d+1)-node clique as an increasing node tuple,
/// for d = 0..dim_cap.
struct CliqueComplex {
  using Simplex = std::vector<int>;
  std::vector<std::vector<Simplex>> by_dim;
  int dim_cap = 0;

  std::size_t size(int dim) const {
    return dim >= 0 && dim < static_cast<int>(by_dim.size()) ? by_dim[dim].size() : 0;
  }
};

CliqueComplex build_complex(const BinaryGraph& g, int dim_cap);

/// totals[k-1] = number of k-cliques (not necessarily maximal), k <= max_size.
std::vector<std::int64_t> count_cliques(const BinaryGraph& g, int max_size);

/// Maximal-clique vectors along a filtration, on a density grid.
struct CliqueProfile {
  std::vector<double> grid;
  std::vector<std::size_t> steps;
  std::vector<MaximalCliqueVector> rows;

  /// Largest clique number seen on the grid.
  int max_omega() const;
};

/// Evaluates the maximal-clique vector every `grid_step` in density up to
/// rho_max. A grid_step of 0 means every filtration step.
CliqueProfile track_profile(const Filtration& filt, double rho_max = 0.25, double grid_step = 0.0);

// CSV: header "rho,M1,...,Mk", one row per grid density.
void write_profile_csv(std::ostream& out, const CliqueProfile& profile);
CliqueProfile read_profile_csv(std::istream& in);

}  // namespace toponet
