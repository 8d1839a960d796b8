#include "toponet/models.hpp"

#include "toponet/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>

namespace toponet {

namespace {

constexpr std::array<std::pair<ModelKind, std::string_view>, 13> kKindNames{{
    {ModelKind::CF_GEO, "CF_GEO"},
    {ModelKind::CF_UNID, "CF_UNID"},
    {ModelKind::CWEN, "CWEN"},
    {ModelKind::IID, "IID"},
    {ModelKind::MD, "MD"},
    {ModelKind::RL, "RL"},
    {ModelKind::WRG, "WRG"},
    {ModelKind::WS, "WS"},
    {ModelKind::CP, "CP"},
    {ModelKind::DP, "DP"},
    {ModelKind::PRG, "PRG"},
    {ModelKind::RG, "RG"},
    {ModelKind::KM, "KM"},
}};

using Rng = std::mt19937_64;

Eigen::MatrixXd symmetric_zero(int n) { return Eigen::MatrixXd::Zero(n, n); }

int as_count(const ModelSpec& spec, const std::string& key) { return static_cast<int>(std::lround(spec.param(key))); }

// Draws an index with probability proportional to weights[i] over `allowed`.
template <typename Allowed>
int draw_proportional(const std::vector<double>& weights, Allowed&& allowed, Rng& rng) {
  double total = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (allowed(static_cast<int>(i))) total += weights[i];
  if (total <= 0) return -1;
  double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  int last = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!allowed(static_cast<int>(i))) continue;
    last = static_cast<int>(i);
    if (u < weights[i]) return last;
    u -= weights[i];
  }
  return last;
}

Eigen::MatrixXd iid_weights(int n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd w = symmetric_zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = unit(rng);
  return w;
}

// Weighted configuration model: w_ij = s_i s_j / sum_k s_k.
Eigen::MatrixXd configuration_weights(const Eigen::VectorXd& strength) {
  const double total = strength.sum();
  Eigen::MatrixXd w = strength * strength.transpose() / (total > 0 ? total : 1.0);
  w.diagonal().setZero();
  return w;
}

// Weighted random graph: P(w = k) = (1 - p)^k p, k = 0, 1, ...; zero is no edge.
Eigen::MatrixXd wrg_weights(int n, double p, Rng& rng) {
  std::geometric_distribution<int> geo(p);
  Eigen::MatrixXd w = symmetric_zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w(i, j) = w(j, i) = geo(rng);
  return w;
}

Eigen::MatrixXd modular_weights(int n, int modules, double p_intra, double p_inter, double density, Rng& rng) {
  const auto module = planted_modules(n, modules);
  std::int64_t intra = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) intra += module[i] == module[j];
  const std::int64_t inter = pair_count(n) - intra;
  // Intra-module pairs are always wired; inter-module pairs fill up to the target density.
  const double wire_inter =
      inter > 0 ? std::clamp((density * static_cast<double>(pair_count(n)) - static_cast<double>(intra)) /
                                 static_cast<double>(inter),
                             0.0, 1.0)
                : 0.0;
  std::bernoulli_distribution wire(wire_inter);
  std::geometric_distribution<int> heavy(p_intra), light(p_inter);
  Eigen::MatrixXd w = symmetric_zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (module[i] == module[j])
        w(i, j) = 1 + heavy(rng);
      else if (wire(rng))
        w(i, j) = 1 + light(rng);
      w(j, i) = w(i, j);
    }
  }
  return w;
}

// Rewire each edge's far endpoint with probability p, keeping the graph
// complete by exchanging weights with the new pair.
Eigen::MatrixXd watts_strogatz_weights(int n, double p, Rng& rng) {
  Eigen::MatrixXd w = ring_lattice_weights(n);
  std::bernoulli_distribution rewire(p);
  std::uniform_int_distribution<int> node(0, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!rewire(rng)) continue;
      int k;
      do k = node(rng);
      while (k == i || k == j);
      std::swap(w(i, j), w(i, k));
      w(j, i) = w(i, j);
      w(k, i) = w(i, k);
    }
  }
  return w;
}

// With probability p per edge, exchange its weight with a uniformly chosen edge.
void swap_edge_weights(Eigen::MatrixXd& w, double p, Rng& rng) {
  const int n = static_cast<int>(w.rows());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::bernoulli_distribution swap_it(p);
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  for (const auto& [i, j] : pairs) {
    if (!swap_it(rng)) continue;
    const auto [k, l] = pairs[pick(rng)];
    std::swap(w(i, j), w(k, l));
    w(j, i) = w(i, j);
    w(l, k) = w(k, l);
  }
}

// Strength-driven growth with weight reinforcement. Each new node attaches
// m unit edges preferentially by strength; internal edges are then added
// between strength-preferred pairs to hold the running density at the
// target. Every new edge at node j spreads an extra `delta` of weight over
// j's existing edges in proportion to their weights.
Eigen::MatrixXd cwen_weights(int n, int m, double delta, double density, Rng& rng) {
  Eigen::MatrixXd w = symmetric_zero(n);
  std::vector<double> strength(static_cast<std::size_t>(n), 0.0);

  auto reinforce = [&](int j, int present) {
    if (strength[j] <= 0) return;
    const double s = strength[j];
    for (int k = 0; k < present; ++k) {
      if (w(j, k) <= 0) continue;
      const double add = delta * w(j, k) / s;
      w(j, k) += add;
      w(k, j) = w(j, k);
      strength[j] += add;
      strength[k] += add;
    }
  };
  auto connect = [&](int i, int j, int present) {
    reinforce(i, present);
    reinforce(j, present);
    w(i, j) = w(j, i) = 1.0;
    strength[i] += 1.0;
    strength[j] += 1.0;
  };

  const int seed_nodes = std::min(n, m + 1);
  std::int64_t edges = 0;
  for (int i = 0; i < seed_nodes; ++i)
    for (int j = i + 1; j < seed_nodes; ++j, ++edges) connect(i, j, seed_nodes);

  for (int t = seed_nodes; t < n; ++t) {
    const int present = t + 1;
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    for (int e = 0; e < std::min(m, t); ++e) {
      const int j = draw_proportional(strength, [&](int k) { return k < t && !chosen[k]; }, rng);
      chosen[j] = 1;
    }
    for (int j = 0; j < t; ++j)
      if (chosen[j]) {
        connect(t, j, present);
        ++edges;
      }

    const auto wanted = static_cast<std::int64_t>(std::floor(density * static_cast<double>(pair_count(present))));
    while (edges < wanted) {
      const int i = draw_proportional(strength, [&](int k) {
        if (k >= present) return false;
        for (int l = 0; l < present; ++l)
          if (l != k && w(k, l) <= 0) return true;
        return false;
      }, rng);
      if (i < 0) break;
      const int j = draw_proportional(strength, [&](int k) { return k < present && k != i && w(i, k) <= 0; }, rng);
      if (j < 0) break;
      connect(i, j, present);
      ++edges;
    }
  }
  return w;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "?";
}

ModelKind parse_model_kind(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(c == '-' || c == ' ' ? '_' : std::toupper(static_cast<unsigned char>(c)));
  for (const auto& [k, n] : kKindNames)
    if (n == upper) return k;
  throw model_error("unknown model kind '" + std::string(name) + "'");
}

std::map<std::string, double> default_params(ModelKind kind) {
  switch (kind) {
    case ModelKind::CF_GEO: return {{"p", 0.1}};
    case ModelKind::CF_UNID: return {{"max", 1000}};
    case ModelKind::CWEN: return {{"m", 2}, {"delta", 2.0}, {"density", 0.75}};
    case ModelKind::IID: return {};
    case ModelKind::MD: return {{"modules", 4}, {"p_intra", 0.05}, {"p_inter", 0.5}, {"density", 0.75}};
    case ModelKind::RL: return {};
    case ModelKind::WRG: return {{"p", 0.25}};
    case ModelKind::WS: return {{"p", 0.1}};
    case ModelKind::CP: return {};
    case ModelKind::DP: return {};
    case ModelKind::PRG: return {{"p", 0.1}};
    case ModelKind::RG: return {};
    case ModelKind::KM: {
      const KuramotoParams d;
      return {{"communities", d.communities}, {"coupling_intra", d.coupling_intra},
              {"coupling_inter", d.coupling_inter}, {"frequency_sd", d.frequency_sd},
              {"dt", d.dt}, {"burn_in", d.burn_in}, {"duration", d.duration}, {"runs", d.runs}};
    }
  }
  throw model_error("unknown model kind");
}

double ModelSpec::param(const std::string& key) const {
  if (auto it = params.find(key); it != params.end()) return it->second;
  const auto defaults = default_params(kind);
  if (auto it = defaults.find(key); it != defaults.end()) return it->second;
  throw model_error(std::string(to_string(kind)) + " has no parameter '" + key + "'");
}

std::string ModelSpec::display_name() const {
  if (!label.empty()) return label;
  switch (kind) {
    case ModelKind::CF_GEO: return "CF Geo";
    case ModelKind::CF_UNID: return "CF Unid";
    case ModelKind::MD: return "MD " + std::to_string(as_count(*this, "modules"));
    case ModelKind::KM: return "KM " + std::to_string(as_count(*this, "communities"));
    default: return std::string(to_string(kind));
  }
}

void validate(const ModelSpec& spec) {
  const std::string name(to_string(spec.kind));
  if (spec.n < 3) throw model_error(name + ": node count must be at least 3");
  const auto defaults = default_params(spec.kind);
  for (const auto& [key, value] : spec.params) {
    if (!defaults.contains(key)) throw model_error(name + " has no parameter '" + key + "'");
    if (!std::isfinite(value)) throw model_error(name + ": parameter '" + key + "' is not finite");
  }
  auto probability = [&](const char* key) {
    const double p = spec.param(key);
    if (!(p > 0 && p < 1)) throw model_error(name + ": '" + key + "' must lie in (0, 1)");
  };
  auto positive_count = [&](const char* key) {
    const double v = spec.param(key);
    if (!(v >= 1) || v != std::floor(v)) throw model_error(name + ": '" + key + "' must be a positive integer");
  };
  auto positive = [&](const char* key) {
    if (!(spec.param(key) > 0)) throw model_error(name + ": '" + key + "' must be positive");
  };
  switch (spec.kind) {
    case ModelKind::CF_GEO:
    case ModelKind::WRG:
    case ModelKind::WS:
    case ModelKind::PRG: probability("p"); break;
    case ModelKind::CF_UNID: positive_count("max"); break;
    case ModelKind::CWEN:
      positive_count("m");
      if (spec.param("delta") < 0) throw model_error(name + ": 'delta' must be nonnegative");
      if (!(spec.param("density") > 0 && spec.param("density") <= 1)) throw model_error(name + ": 'density' must lie in (0, 1]");
      if (as_count(spec, "m") >= spec.n) throw model_error(name + ": 'm' must be below the node count");
      break;
    case ModelKind::MD:
      positive_count("modules");
      probability("p_intra");
      probability("p_inter");
      if (!(spec.param("density") > 0 && spec.param("density") <= 1)) throw model_error(name + ": 'density' must lie in (0, 1]");
      if (spec.n / as_count(spec, "modules") < 2) throw model_error(name + ": every module needs at least 2 nodes");
      break;
    case ModelKind::KM:
      positive_count("communities");
      positive_count("runs");
      positive("dt");
      positive("duration");
      positive("frequency_sd");
      if (spec.param("burn_in") < 0) throw model_error(name + ": 'burn_in' must be nonnegative");
      if (spec.n / as_count(spec, "communities") < 2) throw model_error(name + ": every community needs at least 2 nodes");
      break;
    default: break;
  }
}

std::vector<ModelSpec> standard_models(int n, std::uint64_t seed) {
  auto make = [&](ModelKind kind, std::map<std::string, double> params = {}) {
    ModelSpec s{kind, n, std::move(params), 0, {}};
    s.label = s.display_name();
    return s;
  };
  std::vector<ModelSpec> out{
      make(ModelKind::CF_GEO), make(ModelKind::CF_UNID), make(ModelKind::CWEN), make(ModelKind::DP),
      make(ModelKind::CP),     make(ModelKind::PRG),     make(ModelKind::RG),   make(ModelKind::RL),
      make(ModelKind::WS),     make(ModelKind::MD, {{"modules", 2}}),
      make(ModelKind::MD, {{"modules", 4}}),
      make(ModelKind::IID),    make(ModelKind::WRG),     make(ModelKind::MD, {{"modules", 8}}),
  };
  for (std::size_t k = 0; k < out.size(); ++k) out[k].seed = io::derive_seed(seed, 1000 + k);
  return out;
}

Eigen::MatrixXd ring_lattice_weights(int n) {
  Eigen::MatrixXd w = symmetric_zero(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const int hop = std::min(j - i, n - (j - i));
      w(i, j) = w(j, i) = 1.0 / hop;
    }
  return w;
}

std::vector<int> planted_modules(int n, int modules) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = static_cast<int>(static_cast<std::int64_t>(i) * modules / n);
  return out;
}

PointCloud uniform_cube_points(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud pts(n, 3);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c) pts(i, c) = unit(rng);
  return pts;
}

Eigen::MatrixXd kuramoto_correlation(int n, const KuramotoParams& params, std::uint64_t seed) {
  Rng rng(seed);
  const auto community = planted_modules(n, params.communities);
  std::vector<int> size(static_cast<std::size_t>(params.communities), 0);
  for (int c : community) ++size[c];

  Eigen::MatrixXd coupling(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      coupling(i, j) = i == j                         ? 0.0
                       : community[i] == community[j] ? params.coupling_intra / size[community[i]]
                                                      : params.coupling_inter / n;

  const auto burn_steps = static_cast<long>(std::llround(params.burn_in / params.dt));
  const auto record_steps = std::max(2L, static_cast<long>(std::llround(params.duration / params.dt)));
  std::normal_distribution<double> frequency(0.0, params.frequency_sd);
  std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);

  Eigen::MatrixXd mean_corr = Eigen::MatrixXd::Zero(n, n);
  for (int run = 0; run < params.runs; ++run) {
    Eigen::VectorXd omega(n), theta(n);
    for (int i = 0; i < n; ++i) omega(i) = frequency(rng);
    for (int i = 0; i < n; ++i) theta(i) = phase(rng);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(n, n);
    for (long step = 0; step < burn_steps + record_steps; ++step) {
      const Eigen::VectorXd s = theta.array().sin();
      const Eigen::VectorXd c = theta.array().cos();
      if (step >= burn_steps) {
        sum += s;
        outer.selfadjointView<Eigen::Lower>().rankUpdate(s);
      }
      // sum_j K_ij sin(theta_j - theta_i) = cos(theta_i) (K s)_i - sin(theta_i) (K c)_i
      const Eigen::VectorXd drift =
          omega.array() + c.array() * (coupling * s).array() - s.array() * (coupling * c).array();
      theta += params.dt * drift;
    }
    outer = outer.selfadjointView<Eigen::Lower>();
    const double count = static_cast<double>(record_steps);
    const Eigen::VectorXd mean = sum / count;
    Eigen::MatrixXd cov = outer / count - mean * mean.transpose();
    const Eigen::VectorXd sd = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cov(i, j) = sd(i) > 0 && sd(j) > 0 ? cov(i, j) / (sd(i) * sd(j)) : 0.0;
    mean_corr += cov;
  }
  mean_corr /= params.runs;
  mean_corr = (0.5 * (mean_corr + mean_corr.transpose())).cwiseMax(-1.0).cwiseMin(1.0);
  mean_corr.diagonal().setOnes();
  return mean_corr;
}

WeightedNetwork generate(const ModelSpec& spec) {
  validate(spec);
  const int n = spec.n;
  Rng rng(spec.seed);
  Eigen::MatrixXd w;
  switch (spec.kind) {
    case ModelKind::CF_GEO: {
      std::geometric_distribution<int> geo(spec.param("p"));
      Eigen::VectorXd s(n);
      for (int i = 0; i < n; ++i) s(i) = 1 + geo(rng);
      w = configuration_weights(s);
      break;
    }
    case ModelKind::CF_UNID: {
      std::uniform_int_distribution<int> unid(0, as_count(spec, "max"));
      Eigen::VectorXd s(n);
      for (int i = 0; i < n; ++i) s(i) = unid(rng);
      w = configuration_weights(s);
      break;
    }
    case ModelKind::CWEN:
      w = cwen_weights(n, as_count(spec, "m"), spec.param("delta"), spec.param("density"), rng);
      break;
    case ModelKind::IID: w = iid_weights(n, rng); break;
    case ModelKind::MD:
      w = modular_weights(n, as_count(spec, "modules"), spec.param("p_intra"), spec.param("p_inter"),
                          spec.param("density"), rng);
      break;
    case ModelKind::RL: w = ring_lattice_weights(n); break;
    case ModelKind::WRG: w = wrg_weights(n, spec.param("p"), rng); break;
    case ModelKind::WS: w = watts_strogatz_weights(n, spec.param("p"), rng); break;
    case ModelKind::CP: w = cross_product_weights(uniform_cube_points(n, rng())); break;
    case ModelKind::DP: w = dot_product_weights(uniform_cube_points(n, rng())); break;
    case ModelKind::RG: w = inverse_distance_weights(uniform_cube_points(n, rng())); break;
    case ModelKind::PRG:
      w = inverse_distance_weights(uniform_cube_points(n, rng()));
      swap_edge_weights(w, spec.param("p"), rng);
      break;
    case ModelKind::KM: {
      KuramotoParams kp;
      kp.communities = as_count(spec, "communities");
      kp.coupling_intra = spec.param("coupling_intra");
      kp.coupling_inter = spec.param("coupling_inter");
      kp.frequency_sd = spec.param("frequency_sd");
      kp.dt = spec.param("dt");
      kp.burn_in = spec.param("burn_in");
      kp.duration = spec.param("duration");
      kp.runs = as_count(spec, "runs");
      // Correlations in [-1, 1] map affinely onto [0, 1]; edge order is unchanged.
      w = ((kuramoto_correlation(n, kp, rng()).array() + 1.0) / 2.0).matrix();
      w.diagonal().setZero();
      break;
    }
  }
  return WeightedNetwork(std::move(w));
}

std::uint64_t sample_seed(const ModelSpec& spec, std::uint64_t index) { return io::derive_seed(spec.seed, 2 * index); }
std::uint64_t jitter_seed(const ModelSpec& spec, std::uint64_t index) { return io::derive_seed(spec.seed, 2 * index + 1); }

WeightedNetwork sample(const ModelSpec& spec, std::uint64_t index) {
  ModelSpec draw = spec;
  draw.seed = sample_seed(spec, index);
  return jitter(generate(draw), jitter_seed(spec, index));
}

std::vector<WeightedNetwork> sample_batch(const ModelSpec& spec, int count) {
  if (count < 1) throw model_error("sample count must be at least 1");
  std::vector<WeightedNetwork> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out.push_back(sample(spec, static_cast<std::uint64_t>(k)));
  return out;
}

}  // namespace toponet
