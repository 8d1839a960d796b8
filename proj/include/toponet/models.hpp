#pragma once

#include "toponet/network.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace toponet {

enum class ModelKind { CF_GEO, CF_UNID, CWEN, IID, MD, RL, WRG, WS, CP, DP, PRG, RG, KM };

std::string_view to_string(ModelKind kind);
/// Accepts the enumerator names, case-insensitive ("cf_geo", "MD", ...).
ModelKind parse_model_kind(std::string_view name);

class model_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A model generator and its parameters. Unset parameters take the defaults
/// listed by default_params(kind).
struct ModelSpec {
  ModelKind kind = ModelKind::IID;
  int n = 83;
  std::map<std::string, double> params;
  std::uint64_t seed = 1;
  std::string label;  // display name; defaults to display_name()

  double param(const std::string& key) const;
  std::string display_name() const;
};

std::map<std::string, double> default_params(ModelKind kind);

/// Throws model_error on unknown parameter names or out-of-range values.
void validate(const ModelSpec& spec);

/// The fourteen model networks of the taxonomy, in a fixed order:
/// CF Geo, CF Unid, CWEN, DP, CP, PRG, RG, RL, WS, MD 2, MD 4, IID, WRG, MD 8.
std::vector<ModelSpec> standard_models(int n = 83, std::uint64_t seed = 1);

/// Raw (un-jittered) weights for one draw of the model.
WeightedNetwork generate(const ModelSpec& spec);

/// Draw `index` of a batch: generate with a derived seed, then jitter with
/// amplitude 0.001.
WeightedNetwork sample(const ModelSpec& spec, std::uint64_t index);
std::vector<WeightedNetwork> sample_batch(const ModelSpec& spec, int count);

/// The seed generate() receives for draw `index` of a batch.
std::uint64_t sample_seed(const ModelSpec& spec, std::uint64_t index);
/// The jitter seed used for draw `index` of a batch.
std::uint64_t jitter_seed(const ModelSpec& spec, std::uint64_t index);

// Point-cloud weight rules. Rows of `points` are positions in 3-space.
using PointCloud = Eigen::Matrix<double, Eigen::Dynamic, 3>;

PointCloud uniform_cube_points(int n, std::uint64_t seed);

/// w_ij = <p_i, p_j>
template <typename Derived>
Eigen::MatrixXd dot_product_weights(const Eigen::MatrixBase<Derived>& points) {
  Eigen::MatrixXd w = points * points.transpose();
  w.diagonal().setZero();
  return w;
}

/// w_ij = 1 / |p_i x p_j|
template <typename Derived>
Eigen::MatrixXd cross_product_weights(const Eigen::MatrixBase<Derived>& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d a = points.row(i).transpose();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Eigen::Vector3d b = points.row(j).transpose();
      w(i, j) = w(j, i) = 1.0 / a.cross(b).norm();
    }
  }
  return w;
}

/// w_ij = 1 / |p_i - p_j|
template <typename Derived>
Eigen::MatrixXd inverse_distance_weights(const Eigen::MatrixBase<Derived>& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      w(i, j) = w(j, i) = 1.0 / (points.row(i) - points.row(j)).norm();
  return w;
}

/// Ring lattice: w_ij = 1 / (hop distance of i and j around the ring).
Eigen::MatrixXd ring_lattice_weights(int n);

/// Node -> module index for `modules` contiguous near-equal blocks.
std::vector<int> planted_modules(int n, int modules);

struct KuramotoParams {
  int communities = 2;
  double coupling_intra = 2.5;   // scaled by 1/community size
  double coupling_inter = 0.5;   // scaled by 1/n
  double frequency_sd = 1.0;
  double dt = 0.01;
  double burn_in = 20.0;
  double duration = 50.0;
  int runs = 4;
};

/// Pearson correlation of sin(theta_i(t)) after burn-in, averaged over runs.
/// Symmetric with unit diagonal.
Eigen::MatrixXd kuramoto_correlation(int n, const KuramotoParams& params, std::uint64_t seed);

}  // namespace toponet
