#include "toponet/pipeline.hpp"

#include "toponet/cliques.hpp"
#include "toponet/graphstats.hpp"
#include "toponet/io.hpp"
#include "toponet/persistence.hpp"
#include "toponet/topostats.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace toponet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json spec_json(const ModelSpec& s) {
  json j;
  j["kind"] = std::string(to_string(s.kind));
  j["n"] = s.n;
  j["params"] = s.params;
  j["seed"] = s.seed;
  j["label"] = s.label.empty() ? s.display_name() : s.label;
  return j;
}

ModelSpec spec_from(const json& j, int default_n, std::uint64_t default_seed) {
  ModelSpec s;
  s.kind = parse_model_kind(j.at("kind").get<std::string>());
  s.n = j.value("n", default_n);
  if (j.contains("params")) s.params = j.at("params").get<std::map<std::string, double>>();
  s.seed = j.value("seed", default_seed);
  s.label = j.value("label", std::string{});
  return s;
}

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
}

void note(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

std::string read_text(const fs::path& p) { return io::read_file(p); }

template <typename T, typename Reader>
T load(const fs::path& p, Reader reader) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return reader(in);
}

struct Job {
  const ModelSpec* spec;
  int sample;
};

std::vector<Job> jobs_of(const std::vector<ModelSpec>& models, int samples) {
  std::vector<Job> jobs;
  for (const auto& m : models)
    for (int k = 0; k < samples; ++k) jobs.push_back({&m, k});
  return jobs;
}

std::string sample_name(int sample) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%03d.csv", sample);
  return buf;
}

std::vector<double> betti_grid() {
  std::vector<double> g(101);
  for (int i = 0; i <= 100; ++i) g[i] = i / 100.0;
  return g;
}

}  // namespace

std::vector<ModelSpec> RunConfig::resolved_models() const {
  if (models.empty()) return standard_models(n, seed);
  std::vector<ModelSpec> out = models;
  for (auto& m : out)
    if (m.label.empty()) m.label = m.display_name();
  return out;
}

void validate(const RunConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (cfg.n < 3) throw std::invalid_argument("node count must be at least 3");
  if (cfg.d_max < 0) throw std::invalid_argument("d_max must be nonnegative");
  if (!(cfg.rho_max > 0 && cfg.rho_max <= 1)) throw std::invalid_argument("rho_max must lie in (0, 1]");
  if (cfg.profile_step < 0) throw std::invalid_argument("profile step must be nonnegative");
  if (cfg.k_max < 0) throw std::invalid_argument("k_max must be nonnegative");
  if (cfg.clusters < 2) throw std::invalid_argument("class count must be at least 2");
  if (cfg.louvain_restarts < 1) throw std::invalid_argument("louvain restarts must be at least 1");
  if (cfg.workers < 1) throw std::invalid_argument("worker count must be at least 1");
  const auto models = cfg.resolved_models();
  std::vector<std::string> seen;
  for (const auto& m : models) {
    validate(m);
    if (m.label.find_first_of(",\n\"") != std::string::npos)
      throw std::invalid_argument("model label '" + m.label + "' contains a CSV delimiter");
    if (std::find(seen.begin(), seen.end(), slug(m.label)) != seen.end())
      throw std::invalid_argument("duplicate model label '" + m.label + "'");
    seen.push_back(slug(m.label));
  }
  if (static_cast<int>(models.size()) < cfg.clusters)
    throw std::invalid_argument("class count " + std::to_string(cfg.clusters) + " exceeds model count " +
                                std::to_string(models.size()));
}

std::string spec_to_json(const ModelSpec& spec) { return spec_json(spec).dump(2) + "\n"; }

ModelSpec spec_from_json(std::string_view text) { return spec_from(json::parse(text), 83, 1); }

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["samples"] = cfg.samples;
  j["nodes"] = cfg.n;
  j["d_max"] = cfg.d_max;
  j["rho_max"] = cfg.rho_max;
  j["profile_step"] = cfg.profile_step;
  j["k_max"] = cfg.k_max;
  j["clusters"] = cfg.clusters;
  j["seed"] = cfg.seed;
  j["out"] = cfg.out.string();
  j["linkage"] = std::string(to_string(cfg.linkage));
  j["zscore"] = cfg.zscore;
  j["louvain_restarts"] = cfg.louvain_restarts;
  j["workers"] = cfg.workers;
  auto models = json::array();
  for (const auto& m : cfg.models) models.push_back(spec_json(m));
  j["models"] = models;
  return j.dump(2) + "\n";
}

RunConfig config_from_json(std::string_view text) {
  const auto j = json::parse(text);
  RunConfig c;
  c.samples = j.value("samples", c.samples);
  c.n = j.value("nodes", c.n);
  c.d_max = j.value("d_max", c.d_max);
  c.rho_max = j.value("rho_max", c.rho_max);
  c.profile_step = j.value("profile_step", c.profile_step);
  c.k_max = j.value("k_max", c.k_max);
  c.clusters = j.value("clusters", c.clusters);
  c.seed = j.value("seed", c.seed);
  c.out = j.value("out", c.out.string());
  if (j.contains("linkage")) c.linkage = parse_linkage(j.at("linkage").get<std::string>());
  c.zscore = j.value("zscore", c.zscore);
  c.louvain_restarts = j.value("louvain_restarts", c.louvain_restarts);
  c.workers = j.value("workers", c.workers);
  if (j.contains("models")) {
    std::uint64_t k = 0;
    for (const auto& m : j.at("models")) c.models.push_back(spec_from(m, c.n, io::derive_seed(c.seed, 1000 + k++)));
  }
  return c;
}

int default_workers() {
  if (const char* env = std::getenv("TOPONET_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  auto worker = [&] {
    for (int i; (i = next++) < count;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::string slug(std::string_view label) {
  std::string s(label);
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
  return s;
}

fs::path RunLayout::network(const std::string& label, int sample) const {
  return root / "networks" / slug(label) / sample_name(sample);
}
fs::path RunLayout::diagram(const std::string& label, int sample) const {
  return root / "diagrams" / slug(label) / sample_name(sample);
}
fs::path RunLayout::profile(const std::string& label, int sample) const {
  return root / "profiles" / slug(label) / sample_name(sample);
}
fs::path RunLayout::betti(const std::string& label, int sample) const {
  return root / "betti" / slug(label) / sample_name(sample);
}

void generate_stage(const RunConfig& cfg, const Logger& log) {
  in_stage("generate", [&] {
    validate(cfg);
    const RunLayout layout{cfg.out};
    const auto models = cfg.resolved_models();
    RunConfig resolved = cfg;
    resolved.models = models;
    io::write_file(layout.config(), config_to_json(resolved));
    const auto jobs = jobs_of(models, cfg.samples);
    parallel_for(static_cast<int>(jobs.size()), cfg.workers, [&](int i) {
      const auto& [spec, k] = jobs[i];
      const auto path = layout.network(spec->label, k);
      if (fs::exists(path)) return;
      write_adjacency_csv(path, sample(*spec, static_cast<std::uint64_t>(k)));
    });
    note(log, "generate: " + std::to_string(jobs.size()) + " networks in " + (layout.root / "networks").string());
  });
}

void featurize_stage(const RunConfig& cfg, const Logger& log) {
  in_stage("featurize", [&] {
    validate(cfg);
    const RunLayout layout{cfg.out};
    const auto models = cfg.resolved_models();
    const auto jobs = jobs_of(models, cfg.samples);
    std::atomic<int> done{0};
    std::mutex log_guard;
    parallel_for(static_cast<int>(jobs.size()), cfg.workers, [&](int i) {
      const auto& [spec, k] = jobs[i];
      const auto dpath = layout.diagram(spec->label, k), ppath = layout.profile(spec->label, k),
                 bpath = layout.betti(spec->label, k);
      if (!fs::exists(dpath) || !fs::exists(ppath) || !fs::exists(bpath)) {
        const auto net = load<WeightedNetwork>(layout.network(spec->label, k),
                                               [](std::istream& in) { return read_adjacency_csv(in); });
        const auto filt = build_filtration(net);
        const auto diag = compute_persistence(filt, cfg.d_max);
        const auto profile = track_profile(filt, cfg.rho_max, cfg.profile_step);
        std::ostringstream d, p, b;
        write_diagram_csv(d, diag);
        write_profile_csv(p, profile);
        const auto grid = betti_grid();
        const auto curves = betti_curves(diag, grid);
        b << "rho";
        for (int dim = 0; dim <= cfg.d_max; ++dim) b << ",beta_" << dim;
        b << '\n';
        for (std::size_t g = 0; g < grid.size(); ++g) {
          b << io::format_double(grid[g]);
          for (const auto& c : curves) b << ',' << c[g];
          b << '\n';
        }
        io::write_file(dpath, d.str());
        io::write_file(ppath, p.str());
        io::write_file(bpath, b.str());
      }
      const int n = ++done;
      if (log && (n % 10 == 0 || n == static_cast<int>(jobs.size()))) {
        std::lock_guard lock(log_guard);
        log("featurize: " + std::to_string(n) + "/" + std::to_string(jobs.size()));
      }
    });

    std::vector<PersistenceDiagram> diags;
    std::vector<CliqueProfile> profiles;
    int omega = 0;
    for (const auto& [spec, k] : jobs) {
      diags.push_back(load<PersistenceDiagram>(layout.diagram(spec->label, k),
                                               [](std::istream& in) { return read_diagram_csv(in); }));
      profiles.push_back(load<CliqueProfile>(layout.profile(spec->label, k),
                                             [](std::istream& in) { return read_profile_csv(in); }));
      if (diags.back().d_max != cfg.d_max)
        throw std::runtime_error(layout.diagram(spec->label, k).string() + " was computed with a different d_max");
      omega = std::max(omega, profiles.back().max_omega());
    }
    const int k_max = cfg.k_max > 0 ? cfg.k_max : omega;
    std::vector<TopoFeatures> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i)
      rows.push_back(assemble_features(diags[i], profiles[i], k_max, jobs[i].spec->label, jobs[i].sample));
    std::ostringstream out;
    write_feature_table(out, rows);
    io::write_file(layout.features(), out.str());
    note(log, "featurize: feature table with k_max " + std::to_string(k_max) + " in " + layout.features().string());
  });
}

void stats_stage(const RunConfig& cfg, const Logger& log) {
  in_stage("stats", [&] {
    validate(cfg);
    const RunLayout layout{cfg.out};
    const auto models = cfg.resolved_models();
    const auto jobs = jobs_of(models, cfg.samples);
    std::vector<StatisticsRow> rows(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), cfg.workers, [&](int i) {
      const auto& [spec, k] = jobs[i];
      const auto net = load<WeightedNetwork>(layout.network(spec->label, k),
                                             [](std::istream& in) { return read_adjacency_csv(in); });
      rows[i] = {spec->label, k,
                 compute_statistics(net, cfg.louvain_restarts, sample_seed(*spec, static_cast<std::uint64_t>(k)))};
    });
    std::ostringstream out;
    write_statistics_table(out, rows);
    io::write_file(layout.statistics(), out.str());
    note(log, "stats: " + layout.statistics().string());
  });
}

Clustering classify_stage(const RunConfig& cfg, const Logger& log) {
  return in_stage("classify", [&] {
    const RunLayout layout{cfg.out};
    const auto rows = load<std::vector<TopoFeatures>>(layout.features(),
                                                      [](std::istream& in) { return read_feature_table(in); });
    if (rows.empty()) throw std::runtime_error("feature table is empty");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), rows.front().values.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      x.row(static_cast<Eigen::Index>(i)) = rows[i].values.transpose();
      labels.push_back(rows[i].network);
    }
    const auto means = group_means(x, labels);
    auto result = cluster(means.means, means.labels, cfg.clusters, cfg.linkage, cfg.zscore);
    result.assignment.feature_names = feature_names(rows.front().d_max, rows.front().k_max);
    io::write_file(layout.assignment(), assignment_to_json(result.assignment));
    std::ostringstream tree, sweep;
    write_dendrogram_csv(tree, result.tree);
    io::write_file(layout.dendrogram(), tree.str());
    sweep << "k,mean_silhouette\n";
    const int top = std::min<int>(7, static_cast<int>(means.labels.size()));
    for (int k = 2; k <= top; ++k)
      sweep << k << ','
            << io::format_double(cluster(means.means, means.labels, k, cfg.linkage, cfg.zscore)
                                     .assignment.mean_silhouette())
            << '\n';
    io::write_file(layout.silhouette_sweep(), sweep.str());
    for (int c = 0; c < cfg.clusters; ++c) {
      std::string line = "classify: class " + std::to_string(c + 1) + ":";
      for (const auto& m : result.assignment.members(c)) line += " [" + m + "]";
      note(log, line);
    }
    return result;
  });
}

void run_pipeline(const RunConfig& cfg, const Logger& log) {
  generate_stage(cfg, log);
  featurize_stage(cfg, log);
  stats_stage(cfg, log);
  classify_stage(cfg, log);
}

PlacementReport place_stage(const RunConfig& cfg, const fs::path& matrix, std::string name, const Logger& log) {
  return in_stage("place", [&] {
    const RunLayout layout{cfg.out};
    if (name.empty()) name = matrix.stem().string();
    bool jittered = false;
    const auto net = ingest(matrix, cfg.seed, &jittered);
    if (jittered) note(log, "place: warning: " + matrix.string() + " has tied weights; jittered before filtration");
    const auto table = load<std::vector<TopoFeatures>>(layout.features(),
                                                       [](std::istream& in) { return read_feature_table(in); });
    if (table.empty()) throw std::runtime_error("feature table is empty");
    const int d_max = table.front().d_max, k_max = table.front().k_max;
    const auto filt = build_filtration(net);
    const auto features =
        assemble_features(compute_persistence(filt, d_max), track_profile(filt, cfg.rho_max, cfg.profile_step), k_max,
                          name);
    PlacementReport report{name, assignment_from_json(read_text(layout.assignment())), {}};
    report.placement = place(features.values, report.assignment);
    io::write_file(layout.root / ("place_" + slug(name) + ".csv"), placement_csv(report));
    note(log, "place: " + name + " is nearest class " + std::to_string(report.placement.nearest_class + 1));
    return report;
  });
}

std::string placement_csv(const PlacementReport& r) {
  std::ostringstream out;
  out << "kind,name,class,distance\n";
  const auto& p = r.placement;
  for (Eigen::Index c = 0; c < p.class_distances.size(); ++c)
    out << "class,Class " << c + 1 << ',' << c + 1 << ',' << io::format_double(p.class_distances(c)) << '\n';
  for (std::size_t m = 0; m < r.assignment.models.size(); ++m)
    out << "model," << r.assignment.models[m] << ',' << r.assignment.classes[m] + 1 << ','
        << io::format_double(p.model_distances(static_cast<Eigen::Index>(m))) << '\n';
  return out.str();
}

}  // namespace toponet
