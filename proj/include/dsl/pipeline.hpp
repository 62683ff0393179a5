#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dsl/config_io.hpp"
#include "dsl/ladder.hpp"
#include "dsl/oracle.hpp"
#include "dsl/spectra.hpp"

namespace dsl {

struct RunOptions {
  bool with_oracle = false;
  std::string preset;  // empty when the config came from a file
};

struct OracleResults {
  Spectrum cavity, fluor_lower, fluor_central, fluor_upper;
  double mean_a = 0.0;
  double max_rel_dev_cavity = 0.0;      // engine vs oracle on the shared grid
  double max_rel_dev_fluor_lower = 0.0;
};

struct RunResult {
  ModelConfig config;
  DressedFrame frame;
  std::vector<std::string> warnings;
  int n_max = 0;
  double tail = 0.0;
  BlockVector steady;
  PhotonStatistics stats;
  Spectrum cavity, fluor_lower;
  LadderPrediction ladder;  // peaks + analytic populations (empty if non-normalizable)
  NumericLadder ladder_numeric;
  std::optional<OracleResults> oracle;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::string run_id;
};

/// Pointwise deviation max_i |a_i - b_i| / (|b_i| + 1e-12 * max|b|);
/// falls back to max|a_i - b_i| when b is identically zero.
double max_relative_deviation(const std::vector<double>& a,
                              const std::vector<double>& b);

/// Full computation for one configuration. The oracle path is limited to
/// n_max <= 30 (dense algebra) and rejects larger resolved truncations.
RunResult run_simulation(const ModelConfig& cfg, const RunOptions& opts);

/// Emits cavity.csv, fluor_lower.csv, stats.json, ladder.json, manifest.json
/// (plus oracle_*.csv and comparison.json when present) into out_dir.
/// Returns the list of written file names.
std::vector<std::string> write_run_outputs(const RunResult& r,
                                           const std::filesystem::path& out_dir,
                                           const std::string& preset);

}  // namespace dsl
