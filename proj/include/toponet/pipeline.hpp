#pragma once

#include "toponet/classify.hpp"
#include "toponet/models.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace toponet {

/// Everything a run needs. An empty model list means the fourteen standard
/// models with seeds derived from `seed`.
struct RunConfig {
  std::vector<ModelSpec> models;
  int samples = 10;
  int n = 83;
  int d_max = 3;
  double rho_max = 0.25;
  double profile_step = 0;  // 0 = every filtration step
  int k_max = 0;            // 0 = largest clique number in the run
  int clusters = 4;
  std::uint64_t seed = 1;
  std::filesystem::path out = "toponet_run";
  Linkage linkage = Linkage::Average;
  bool zscore = false;
  int louvain_restarts = 20;
  int workers = 1;

  /// The model list with defaults filled in (n, labels, standard set).
  std::vector<ModelSpec> resolved_models() const;
};

/// Throws std::invalid_argument on the first bad field.
void validate(const RunConfig& cfg);

std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(std::string_view text);
std::string spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(std::string_view text);

/// Worker count from TOPONET_WORKERS, else the hardware thread count.
int default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by any task is rethrown after all threads finish.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

/// Directory-safe form of a model label ("MD 2" -> "MD_2").
std::string slug(std::string_view label);

// Artifact locations inside cfg.out.
struct RunLayout {
  std::filesystem::path root;
  std::filesystem::path network(const std::string& label, int sample) const;
  std::filesystem::path diagram(const std::string& label, int sample) const;
  std::filesystem::path profile(const std::string& label, int sample) const;
  std::filesystem::path betti(const std::string& label, int sample) const;
  std::filesystem::path features() const { return root / "features.csv"; }
  std::filesystem::path statistics() const { return root / "statistics.csv"; }
  std::filesystem::path assignment() const { return root / "assignment.json"; }
  std::filesystem::path dendrogram() const { return root / "dendrogram.csv"; }
  std::filesystem::path silhouette_sweep() const { return root / "silhouette.csv"; }
  std::filesystem::path config() const { return root / "config.json"; }
};

using Logger = std::function<void(const std::string&)>;

// Each stage skips artifacts that already exist, so an interrupted run can
// be resumed by repeating the command. Errors carry the stage name.
void generate_stage(const RunConfig& cfg, const Logger& log = {});
void featurize_stage(const RunConfig& cfg, const Logger& log = {});
void stats_stage(const RunConfig& cfg, const Logger& log = {});
Clustering classify_stage(const RunConfig& cfg, const Logger& log = {});
void run_pipeline(const RunConfig& cfg, const Logger& log = {});

struct PlacementReport {
  std::string name;
  ClassAssignment assignment;
  Placement placement;
};

/// Featurizes an external adjacency CSV with the run's settings and places it
/// against the run's classes. Writes place_<name>.csv beside the assignment.
PlacementReport place_stage(const RunConfig& cfg, const std::filesystem::path& matrix, std::string name,
                            const Logger& log = {});

/// CSV: "kind,name,class,distance" with one row per class centroid then one
/// per model.
std::string placement_csv(const PlacementReport& report);

}  // namespace toponet
