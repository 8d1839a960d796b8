// toponet: generate model networks, featurize them, and classify.

#include "toponet/io.hpp"
#include "toponet/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Flags {
  std::string config;
  std::string model;
  std::vector<std::string> params;
  std::string label;
  int samples = 0;
  int nodes = 0;
  std::uint64_t seed = 0;
  int dmax = -1;
  double rho_max = 0;
  int kmax = -1;
  int clusters = 0;
  std::string out;
  std::string linkage;
  bool zscore = false;
  int workers = 0;
  std::string input;
  std::string name;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "run configuration JSON")->check(CLI::ExistingFile);
  app->add_option("--model", f.model, "model kind (CF_GEO, CF_UNID, CWEN, IID, MD, RL, WRG, WS, CP, DP, PRG, RG, KM)");
  app->add_option("--param", f.params, "model parameter override key=value (repeatable)");
  app->add_option("--label", f.label, "label for --model");
  app->add_option("--samples", f.samples, "samples per model")->check(CLI::PositiveNumber);
  app->add_option("--nodes", f.nodes, "nodes per network")->check(CLI::Range(3, 1 << 20));
  app->add_option("--seed", f.seed, "run seed");
  app->add_option("--dmax", f.dmax, "top homology dimension")->check(CLI::NonNegativeNumber);
  app->add_option("--rho-max", f.rho_max, "largest density of the clique profile")->check(CLI::Range(0.0, 1.0));
  app->add_option("--kmax", f.kmax, "clique sizes in the feature vector (0 = clique number of the run)");
  app->add_option("--clusters", f.clusters, "number of classes")->check(CLI::Range(2, 1 << 20));
  app->add_option("--out", f.out, "run directory");
  app->add_option("--linkage", f.linkage, "average, complete or ward");
  app->add_flag("--zscore", f.zscore, "standardize features before clustering");
  app->add_option("--workers", f.workers, "worker threads (default: TOPONET_WORKERS or core count)")
      ->check(CLI::PositiveNumber);
}

toponet::RunConfig resolve(const Flags& f) {
  using namespace toponet;
  RunConfig cfg;
  if (!f.config.empty()) cfg = config_from_json(io::read_file(f.config));
  if (f.samples) cfg.samples = f.samples;
  if (f.nodes) cfg.n = f.nodes;
  if (f.seed) cfg.seed = f.seed;
  if (f.dmax >= 0) cfg.d_max = f.dmax;
  if (f.rho_max > 0) cfg.rho_max = f.rho_max;
  if (f.kmax >= 0) cfg.k_max = f.kmax;
  if (f.clusters) cfg.clusters = f.clusters;
  if (!f.out.empty()) cfg.out = f.out;
  if (!f.linkage.empty()) cfg.linkage = parse_linkage(f.linkage);
  if (f.zscore) cfg.zscore = true;
  cfg.workers = f.workers ? f.workers : (f.config.empty() ? default_workers() : cfg.workers);
  if (f.nodes)
    for (auto& m : cfg.models) m.n = f.nodes;
  if (!f.model.empty()) {
    ModelSpec spec;
    spec.kind = parse_model_kind(f.model);
    spec.n = cfg.n;
    spec.seed = cfg.seed;
    for (const auto& kv : f.params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
      spec.params[kv.substr(0, eq)] = io::parse_double(std::string_view(kv).substr(eq + 1));
    }
    spec.label = f.label.empty() ? spec.display_name() : f.label;
    cfg.models = {spec};
  } else if (!f.params.empty()) {
    throw std::invalid_argument("--param needs --model");
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological classification of weighted networks"};
  app.require_subcommand(1);
  Flags f;
  auto* generate = app.add_subcommand("generate", "sample model networks");
  auto* featurize = app.add_subcommand("featurize", "persistence diagrams, clique profiles and the feature table");
  auto* stats = app.add_subcommand("stats", "classical weighted graph statistics");
  auto* classify = app.add_subcommand("classify", "cluster model feature vectors");
  auto* place = app.add_subcommand("place", "place an external adjacency CSV against the classes");
  auto* run = app.add_subcommand("run", "generate, featurize, stats and classify");
  for (auto* sub : {generate, featurize, stats, classify, place, run}) add_common(sub, f);
  place->add_option("--input", f.input, "adjacency matrix CSV")->required()->check(CLI::ExistingFile);
  place->add_option("--name", f.name, "name in the report (default: file stem)");

  CLI11_PARSE(app, argc, argv);

  const toponet::Logger log = [](const std::string& msg) { std::cerr << msg << '\n'; };
  try {
    const auto cfg = resolve(f);
    if (generate->parsed()) toponet::generate_stage(cfg, log);
    if (featurize->parsed()) toponet::featurize_stage(cfg, log);
    if (stats->parsed()) toponet::stats_stage(cfg, log);
    if (classify->parsed()) toponet::classify_stage(cfg, log);
    if (run->parsed()) toponet::run_pipeline(cfg, log);
    if (place->parsed()) std::cout << toponet::placement_csv(toponet::place_stage(cfg, f.input, f.name, log));
  } catch (const std::exception& e) {
    std::cerr << "toponet: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
