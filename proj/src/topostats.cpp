#include "toponet/topostats.hpp"

#include "toponet/io.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace toponet {

namespace {

double finite_death(const Interval& iv) { return iv.essential() ? 1.0 : iv.death; }

}  // namespace

double beta_bar(const PersistenceDiagram& diag, int d) {
  double total = 0;
  for (const auto& iv : diag.in_dim(d)) total += finite_death(iv) - (d == 0 ? 0.0 : iv.birth);
  return total;
}

double mu_bar(const PersistenceDiagram& diag, int d) {
  double total = 0;
  if (d == 0) {
    const double first = 1.0 / static_cast<double>(pair_count(diag.node_count));
    for (const auto& iv : diag.in_dim(0)) total += first * finite_death(iv);
    return total;
  }
  for (const auto& iv : diag.in_dim(d)) total += iv.birth * (finite_death(iv) - iv.birth);
  return total;
}

LogNormalFit lognormal_fit(const CliqueProfile& profile, int k) {
  if (k < 1) throw std::invalid_argument("clique size must be at least 1");
  double mass = 0, first = 0;
  for (std::size_t r = 0; r < profile.rows.size(); ++r) {
    if (profile.grid[r] <= 0) continue;
    const auto m = static_cast<double>(profile.rows[r].at(k));
    mass += m;
    first += m * std::log(profile.grid[r]);
  }
  if (mass <= 0) return {};
  const double mu = first / mass;
  double second = 0;
  for (std::size_t r = 0; r < profile.rows.size(); ++r) {
    if (profile.grid[r] <= 0) continue;
    const double dev = std::log(profile.grid[r]) - mu;
    second += static_cast<double>(profile.rows[r].at(k)) * dev * dev;
  }
  return {mu, std::sqrt(second / mass)};
}

double lognormal_pdf(double x, const LogNormalFit& fit) {
  if (x <= 0 || fit.sigma <= 0) return 0;
  const double z = (std::log(x) - fit.mu) / fit.sigma;
  return std::exp(-0.5 * z * z) / (x * fit.sigma * std::sqrt(2 * std::numbers::pi));
}

TopoFeatures assemble_features(const PersistenceDiagram& diag, const CliqueProfile& profile, int k_max,
                               std::string network, int sample) {
  const int omega = profile.max_omega();
  if (k_max < omega)
    throw std::invalid_argument("network '" + network + "' (sample " + std::to_string(sample) +
                                ") has clique number " + std::to_string(omega) + " above k_max " +
                                std::to_string(k_max));
  const int dims = diag.d_max + 1;
  TopoFeatures f;
  f.network = std::move(network);
  f.sample = sample;
  f.d_max = diag.d_max;
  f.k_max = k_max;
  f.values.resize(2 * dims + 2 * k_max);
  for (int d = 0; d < dims; ++d) {
    f.values(d) = beta_bar(diag, d);
    f.values(dims + d) = mu_bar(diag, d);
  }
  for (int k = 1; k <= k_max; ++k) {
    const auto fit = k <= omega ? lognormal_fit(profile, k) : LogNormalFit{};
    f.values(2 * dims + 2 * (k - 1)) = fit.mu;
    f.values(2 * dims + 2 * (k - 1) + 1) = fit.sigma;
  }
  return f;
}

std::vector<std::string> feature_names(int d_max, int k_max) {
  std::vector<std::string> names;
  for (int d = 0; d <= d_max; ++d) names.push_back("beta_bar_" + std::to_string(d));
  for (int d = 0; d <= d_max; ++d) names.push_back("mu_bar_" + std::to_string(d));
  for (int k = 1; k <= k_max; ++k) {
    names.push_back("mu_" + std::to_string(k));
    names.push_back("sigma_" + std::to_string(k));
  }
  return names;
}

void write_feature_table(std::ostream& out, const std::vector<TopoFeatures>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty feature table");
  const int d_max = rows.front().d_max, k_max = rows.front().k_max;
  out << "model,sample";
  for (const auto& name : feature_names(d_max, k_max)) out << ',' << name;
  out << '\n';
  for (const auto& r : rows) {
    if (r.d_max != d_max || r.k_max != k_max) throw std::invalid_argument("feature rows differ in length");
    out << r.network << ',' << r.sample;
    for (Eigen::Index i = 0; i < r.values.size(); ++i) out << ',' << io::format_double(r.values(i));
    out << '\n';
  }
}

std::vector<TopoFeatures> read_feature_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty feature table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = io::split(line);
  int d_max = -1, k_max = 0;
  for (auto h : header) {
    if (h.starts_with("beta_bar_")) ++d_max;
    if (h.starts_with("mu_") && !h.starts_with("mu_bar_")) ++k_max;
  }
  if (d_max < 0 || header.size() != static_cast<std::size_t>(2 + 2 * (d_max + 1) + 2 * k_max))
    throw std::runtime_error("malformed feature table header");
  std::vector<TopoFeatures> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = io::split(line);
    if (f.size() != header.size()) throw std::runtime_error("feature row has wrong column count: " + line);
    TopoFeatures t;
    t.network = std::string(f[0]);
    t.sample = static_cast<int>(io::parse_double(f[1]));
    t.d_max = d_max;
    t.k_max = k_max;
    t.values.resize(static_cast<Eigen::Index>(f.size() - 2));
    for (std::size_t i = 2; i < f.size(); ++i) t.values(static_cast<Eigen::Index>(i - 2)) = io::parse_double(f[i]);
    rows.push_back(std::move(t));
  }
  return rows;
}

}  // namespace toponet
