#include "toponet/classify.hpp"

#include "toponet/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace toponet {

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
    case Linkage::Ward: return "ward";
  }
  return "?";
}

Linkage parse_linkage(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "average") return Linkage::Average;
  if (lower == "complete") return Linkage::Complete;
  if (lower == "ward") return Linkage::Ward;
  throw std::invalid_argument("unknown linkage '" + std::string(name) + "'");
}

Dendrogram agglomerate(const Eigen::MatrixXd& points, const std::vector<std::string>& labels, Linkage linkage) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw std::invalid_argument("nothing to cluster");
  if (labels.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("one label per row required");

  const int total = 2 * n - 1;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(total, total);
  d.topLeftCorner(n, n) = pairwise_distances(points);
  std::vector<int> size(total, 1);
  std::vector<std::string> name(labels.begin(), labels.end());
  name.resize(total);
  std::vector<int> active(n);
  std::iota(active.begin(), active.end(), 0);

  Dendrogram tree{labels, {}};
  for (int next = n; next < total; ++next) {
    int bi = -1, bj = -1;
    double best = 0;
    auto key = [&](int i, int j) {
      return std::minmax(name[i], name[j]);
    };
    for (std::size_t x = 0; x < active.size(); ++x)
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const int i = active[x], j = active[y];
        const double dij = d(i, j);
        const double tol = 1e-12 * std::max(1.0, std::abs(best));
        if (bi < 0 || dij < best - tol || (dij <= best + tol && key(i, j) < key(bi, bj))) {
          bi = i, bj = j, best = dij;
        }
      }
    const int a = std::min(bi, bj), b = std::max(bi, bj);
    size[next] = size[a] + size[b];
    name[next] = std::min(name[a], name[b]);
    tree.merges.push_back({a, b, best, size[next]});
    std::erase(active, a);
    std::erase(active, b);
    for (int k : active) {
      const double na = size[a], nb = size[b], nk = size[k];
      double v = 0;
      switch (linkage) {
        case Linkage::Average: v = (na * d(k, a) + nb * d(k, b)) / (na + nb); break;
        case Linkage::Complete: v = std::max(d(k, a), d(k, b)); break;
        case Linkage::Ward:
          v = std::sqrt(std::max(0.0, ((na + nk) * d(k, a) * d(k, a) + (nb + nk) * d(k, b) * d(k, b) -
                                       nk * best * best) /
                                          (na + nb + nk)));
          break;
      }
      d(k, next) = d(next, k) = v;
    }
    active.push_back(next);
  }
  return tree;
}

std::vector<int> cut(const Dendrogram& tree, int k) {
  const int n = static_cast<int>(tree.leaves.size());
  if (k < 1 || k > n) throw std::invalid_argument("cannot cut " + std::to_string(n) + " leaves into " +
                                                  std::to_string(k) + " classes");
  std::vector<int> parent(2 * n - 1);
  std::iota(parent.begin(), parent.end(), 0);
  for (int m = 0; m < n - k; ++m) {
    parent[tree.merges[m].a] = n + m;
    parent[tree.merges[m].b] = n + m;
  }
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  std::vector<int> classes(n), id(2 * n - 1, -1);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int r = root(i);
    if (id[r] < 0) id[r] = next++;
    classes[i] = id[r];
  }
  return classes;
}

Eigen::VectorXd silhouette(const Eigen::MatrixXd& points, const std::vector<int>& classes) {
  const Eigen::Index n = points.rows();
  if (classes.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("one class per row required");
  const int k = n ? *std::max_element(classes.begin(), classes.end()) + 1 : 0;
  if (k < 2) throw std::invalid_argument("silhouette needs at least two classes");
  std::vector<int> count(k, 0);
  for (int c : classes) ++count[c];
  const Eigen::MatrixXd d = pairwise_distances(points);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = classes[i];
    if (count[own] == 1) continue;
    std::vector<double> sum(k, 0.0);
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) sum[classes[j]] += d(i, j);
    const double a = sum[own] / (count[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c)
      if (c != own && count[c] > 0) b = std::min(b, sum[c] / count[c]);
    const double m = std::max(a, b);
    s(i) = m > 0 ? (b - a) / m : 0.0;
  }
  return s;
}

Scaling Scaling::identity(Eigen::Index dim) {
  return {Eigen::RowVectorXd::Zero(dim), Eigen::RowVectorXd::Ones(dim)};
}

Scaling Scaling::zscore(const Eigen::MatrixXd& points) {
  Scaling s;
  s.mean = points.colwise().mean();
  const Eigen::MatrixXd centred = points.rowwise() - s.mean;
  s.scale = (centred.colwise().squaredNorm() / static_cast<double>(points.rows())).cwiseSqrt();
  return s;
}

Eigen::MatrixXd Scaling::apply(const Eigen::MatrixXd& points) const {
  Eigen::MatrixXd out = points.rowwise() - mean;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    if (scale(c) > 0) out.col(c) /= scale(c);
    else out.col(c).setZero();
  }
  return out;
}

Eigen::VectorXd Scaling::apply(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd row = x.transpose();
  return apply(row).row(0).transpose();
}

int ClassAssignment::class_of(std::string_view model) const {
  for (std::size_t i = 0; i < models.size(); ++i)
    if (models[i] == model) return classes[i];
  throw std::out_of_range("model '" + std::string(model) + "' is not in the assignment");
}

std::vector<std::string> ClassAssignment::members(int cls) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < models.size(); ++i)
    if (classes[i] == cls) out.push_back(models[i]);
  return out;
}

Clustering cluster(const Eigen::MatrixXd& model_means, const std::vector<std::string>& models, int k,
                   Linkage linkage, bool zscore) {
  const auto n = static_cast<int>(model_means.rows());
  if (k < 2 || k > n)
    throw std::invalid_argument("class count " + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
  Clustering out;
  auto& a = out.assignment;
  a.models = models;
  a.k = k;
  a.linkage = linkage;
  a.zscore = zscore;
  a.scaling = zscore ? Scaling::zscore(model_means) : Scaling::identity(model_means.cols());
  a.model_vectors = a.scaling.apply(model_means);
  out.tree = agglomerate(a.model_vectors, models, linkage);
  a.classes = cut(out.tree, k);
  a.centroids = Eigen::MatrixXd::Zero(k, model_means.cols());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < n; ++i) {
    a.centroids.row(a.classes[i]) += a.model_vectors.row(i);
    count(a.classes[i]) += 1;
  }
  for (int c = 0; c < k; ++c) a.centroids.row(c) /= count(c);
  a.silhouettes = silhouette(a.model_vectors, a.classes);
  return out;
}

GroupedMeans group_means(const Eigen::MatrixXd& rows, const std::vector<std::string>& labels) {
  if (labels.size() != static_cast<std::size_t>(rows.rows())) throw std::invalid_argument("one label per row required");
  GroupedMeans g;
  std::vector<int> group(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(g.labels.begin(), g.labels.end(), labels[i]);
    group[i] = static_cast<int>(it - g.labels.begin());
    if (it == g.labels.end()) g.labels.push_back(labels[i]);
  }
  const auto m = static_cast<Eigen::Index>(g.labels.size());
  g.means = Eigen::MatrixXd::Zero(m, rows.cols());
  Eigen::VectorXd count = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    g.means.row(group[i]) += rows.row(static_cast<Eigen::Index>(i));
    count(group[i]) += 1;
  }
  for (Eigen::Index c = 0; c < m; ++c) g.means.row(c) /= count(c);
  return g;
}

Placement place(const Eigen::VectorXd& features, const ClassAssignment& a) {
  if (features.size() != a.centroids.cols())
    throw std::invalid_argument("feature vector has length " + std::to_string(features.size()) + ", run uses " +
                                std::to_string(a.centroids.cols()));
  const Eigen::RowVectorXd x = a.scaling.apply(features).transpose();
  Placement p;
  p.class_distances = (a.centroids.rowwise() - x).rowwise().norm();
  p.model_distances = (a.model_vectors.rowwise() - x).rowwise().norm();
  p.class_distances.minCoeff(&p.nearest_class);
  return p;
}

void write_dendrogram_csv(std::ostream& out, const Dendrogram& tree) {
  out << "# leaves";
  for (const auto& l : tree.leaves) out << ',' << l;
  out << "\nstep,cluster_a,cluster_b,distance,size\n";
  for (std::size_t m = 0; m < tree.merges.size(); ++m) {
    const auto& s = tree.merges[m];
    out << m << ',' << s.a << ',' << s.b << ',' << io::format_double(s.distance) << ',' << s.size << '\n';
  }
}

Dendrogram read_dendrogram_csv(std::istream& in) {
  Dendrogram tree;
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("# leaves")) throw std::runtime_error("missing dendrogram leaves");
  auto f = io::split(line);
  for (std::size_t i = 1; i < f.size(); ++i) tree.leaves.emplace_back(f[i]);
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    f = io::split(line);
    if (f.size() != 5) throw std::runtime_error("malformed dendrogram row: " + line);
    tree.merges.push_back({static_cast<int>(io::parse_double(f[1])), static_cast<int>(io::parse_double(f[2])),
                           io::parse_double(f[3]), static_cast<int>(io::parse_double(f[4]))});
  }
  return tree;
}

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd json_matrix(const nlohmann::json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (j[r].size() != static_cast<std::size_t>(cols)) throw std::runtime_error("ragged matrix in assignment");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Eigen::RowVectorXd json_row(const nlohmann::json& j) {
  Eigen::RowVectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

}  // namespace

std::string assignment_to_json(const ClassAssignment& a) {
  nlohmann::ordered_json j;
  j["k"] = a.k;
  j["linkage"] = to_string(a.linkage);
  j["zscore"] = a.zscore;
  nlohmann::ordered_json classes, sil;
  for (std::size_t i = 0; i < a.models.size(); ++i) {
    classes[a.models[i]] = a.classes[i] + 1;
    sil[a.models[i]] = a.silhouettes(static_cast<Eigen::Index>(i));
  }
  j["classes"] = classes;
  j["silhouettes"] = sil;
  j["mean_silhouette"] = a.mean_silhouette();
  j["centroid_distances"] = matrix_json(a.centroid_distances());
  j["feature_names"] = a.feature_names;
  j["models"] = a.models;
  j["model_vectors"] = matrix_json(a.model_vectors);
  j["centroids"] = matrix_json(a.centroids);
  j["scaling"] = {{"mean", matrix_json(a.scaling.mean)[0]}, {"scale", matrix_json(a.scaling.scale)[0]}};
  return j.dump(2) + "\n";
}

ClassAssignment assignment_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  ClassAssignment a;
  a.k = j.at("k").get<int>();
  a.linkage = parse_linkage(j.at("linkage").get<std::string>());
  a.zscore = j.at("zscore").get<bool>();
  a.models = j.at("models").get<std::vector<std::string>>();
  a.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  for (const auto& m : a.models) a.classes.push_back(j.at("classes").at(m).get<int>() - 1);
  a.silhouettes.resize(static_cast<Eigen::Index>(a.models.size()));
  for (std::size_t i = 0; i < a.models.size(); ++i)
    a.silhouettes(static_cast<Eigen::Index>(i)) = j.at("silhouettes").at(a.models[i]).get<double>();
  a.scaling.mean = json_row(j.at("scaling").at("mean"));
  a.scaling.scale = json_row(j.at("scaling").at("scale"));
  const auto dim = a.scaling.mean.size();
  a.model_vectors = json_matrix(j.at("model_vectors"), dim);
  a.centroids = json_matrix(j.at("centroids"), dim);
  return a;
}

}  // namespace toponet
