#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace toponet {

enum class Linkage { Average, Complete, Ward };

std::string_view to_string(Linkage linkage);
Linkage parse_linkage(std::string_view name);

/// One agglomeration step. Leaves are clusters 0..n-1; the cluster formed by
/// merge m gets id n + m.
struct Merge {
  int a = 0;
  int b = 0;
  double distance = 0;
  int size = 0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<Merge> merges;
};

/// Pairwise Euclidean distances between rows.
template <typename Derived>
Eigen::MatrixXd pairwise_distances(const Eigen::MatrixBase<Derived>& points) {
  const Eigen::Index n = points.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
  return d;
}

/// Agglomerative clustering of the rows of `points` (Euclidean metric).
/// Equal distances are resolved by the lexicographically smallest pair of
/// cluster names, a cluster being named by its smallest leaf label.
Dendrogram agglomerate(const Eigen::MatrixXd& points, const std::vector<std::string>& labels,
                       Linkage linkage = Linkage::Average);

/// Class index per leaf after undoing the last K-1 merges. Classes are
/// numbered 0..K-1 in order of their first leaf.
std::vector<int> cut(const Dendrogram& tree, int k);

/// Silhouette of every row; members of singleton classes get 0.
Eigen::VectorXd silhouette(const Eigen::MatrixXd& points, const std::vector<int>& classes);

/// Column-wise standardisation applied before clustering. Identity by default.
struct Scaling {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Scaling identity(Eigen::Index dim);
  /// Zero mean, unit population SD; constant columns map to 0.
  static Scaling zscore(const Eigen::MatrixXd& points);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& points) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

struct ClassAssignment {
  std::vector<std::string> models;      // leaf labels
  std::vector<int> classes;             // class per model
  int k = 0;
  Linkage linkage = Linkage::Average;
  bool zscore = false;
  std::vector<std::string> feature_names;
  Scaling scaling;
  Eigen::MatrixXd model_vectors;        // scaled, one row per model
  Eigen::MatrixXd centroids;            // scaled, one row per class
  Eigen::VectorXd silhouettes;

  double mean_silhouette() const { return silhouettes.mean(); }
  int class_of(std::string_view model) const;
  std::vector<std::string> members(int cls) const;
  Eigen::MatrixXd centroid_distances() const { return pairwise_distances(centroids); }
};

struct Clustering {
  Dendrogram tree;
  ClassAssignment assignment;
};

/// Clusters one mean feature vector per model (rows of `model_means`) into k
/// classes.
Clustering cluster(const Eigen::MatrixXd& model_means, const std::vector<std::string>& models, int k,
                   Linkage linkage = Linkage::Average, bool zscore = false);

/// Groups rows by label and averages them. Labels keep first-seen order.
struct GroupedMeans {
  std::vector<std::string> labels;
  Eigen::MatrixXd means;
};
GroupedMeans group_means(const Eigen::MatrixXd& rows, const std::vector<std::string>& labels);

struct Placement {
  int nearest_class = 0;
  Eigen::VectorXd class_distances;   // per class
  Eigen::VectorXd model_distances;   // per model, in assignment order
};

/// Distances from an external feature vector (unscaled) to every class
/// centroid and every model vector, in the clustering's scaled space.
Placement place(const Eigen::VectorXd& features, const ClassAssignment& assignment);

void write_dendrogram_csv(std::ostream& out, const Dendrogram& tree);
Dendrogram read_dendrogram_csv(std::istream& in);

std::string assignment_to_json(const ClassAssignment& a);
ClassAssignment assignment_from_json(std::string_view text);

}  // namespace toponet
