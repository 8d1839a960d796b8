#pragma once

#include "toponet/cliques.hpp"
#include "toponet/persistence.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace toponet {

/// Sum of lifetimes of the d-dimensional intervals. Essential classes die at
/// density 1; dimension-0 classes are born at density 0.
double beta_bar(const PersistenceDiagram& diag, int d);

/// Birth-weighted sum of lifetimes. In dimension 0 the weight is 1/C(n,2)
/// while the lifetime still starts at 0.
double mu_bar(const PersistenceDiagram& diag, int d);

struct LogNormalFit {
  double mu = 0;
  double sigma = 0;
  friend bool operator==(const LogNormalFit&, const LogNormalFit&) = default;
};

/// Treats M_k(rho) as an unnormalized histogram over rho and returns the
/// weighted mean and standard deviation of ln(rho). Returns (0, 0) when no
/// maximal k-clique appears on the grid.
LogNormalFit lognormal_fit(const CliqueProfile& profile, int k);

/// Density of the log-normal distribution at x > 0.
double lognormal_pdf(double x, const LogNormalFit& fit);

/// Topological feature vector of one network:
/// [beta_bar_0..beta_bar_D, mu_bar_0..mu_bar_D, mu_1, sigma_1, ..., mu_K, sigma_K].
struct TopoFeatures {
  std::string network;  // model label or file name
  int sample = 0;
  int d_max = 3;
  int k_max = 0;
  Eigen::VectorXd values;

  double beta_bar(int d) const { return values(d); }
  double mu_bar(int d) const { return values(d_max + 1 + d); }
  LogNormalFit lognormal(int k) const {
    const Eigen::Index base = 2 * (d_max + 1) + 2 * (k - 1);
    return {values(base), values(base + 1)};
  }
};

/// Throws std::invalid_argument naming `network` when the profile's clique
/// number exceeds k_max.
TopoFeatures assemble_features(const PersistenceDiagram& diag, const CliqueProfile& profile, int k_max,
                               std::string network = {}, int sample = 0);

std::vector<std::string> feature_names(int d_max, int k_max);

// Feature table CSV: "model,sample,<feature names>", one row per network.
void write_feature_table(std::ostream& out, const std::vector<TopoFeatures>& rows);
std::vector<TopoFeatures> read_feature_table(std::istream& in);

}  // namespace toponet
