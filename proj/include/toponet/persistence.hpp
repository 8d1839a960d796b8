#pragma once

#include "toponet/network.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

namespace toponet {

/// Birth and death densities of one homology class. death is +inf for a
/// class still alive at the end of the filtration.
struct Interval {
  double birth;
  double death;

  bool essential() const { return std::isinf(death); }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Persistence intervals per dimension 0..d_max of a clique-complex
/// filtration, with densities measured against C(n,2).
struct PersistenceDiagram {
  int node_count = 0;
  int d_max = 0;
  std::vector<std::vector<Interval>> intervals;  // [dim] sorted

  const std::vector<Interval>& in_dim(int d) const;
  std::size_t total_pairs() const;
  friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Z/2 persistent homology of the clique-complex filtration in dimensions
/// 0..d_max. Every clique enters at the density of the edge that completes
/// it. Zero-length intervals are dropped.
PersistenceDiagram compute_persistence(const Filtration& filt, int d_max = 3);

/// Betti number of dimension d at each grid density: intervals with
/// birth <= rho < death.
std::vector<int> betti_curve(const PersistenceDiagram& diag, int d, const std::vector<double>& grid);
std::vector<std::vector<int>> betti_curves(const PersistenceDiagram& diag, const std::vector<double>& grid);

/// Betti numbers after the last filtration edge (essential classes).
std::vector<int> final_betti(const PersistenceDiagram& diag);

// CSV: "# nodes=<n>" line, header "dimension,birth,death", death "inf" when
// unpaired.
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diag);
PersistenceDiagram read_diagram_csv(std::istream& in);

}  // namespace toponet
