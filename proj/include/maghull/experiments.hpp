#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "maghull/datagen.hpp"
#include "maghull/hull_filter.hpp"

namespace maghull {

/// Table 1 / prefix-curve protocol. JSON keys match the field names in
/// camelCase (dims, trialsPerDim, pointsPerTrial, datasetSpec,
/// quadratureOrder, volumeFraction, seeds, estimateError, trialTimeLimit,
/// writeCurves).
struct ExperimentConfig {
  std::vector<std::size_t> dims{2, 3, 4, 5};
  std::size_t trials_per_dim = 20;
  std::size_t points_per_trial = 1000;
  /// count, dim and seed are overwritten per trial.
  DatasetSpec dataset;
  std::size_t quadrature_order = kDefaultQuadratureOrder;
  double volume_fraction = 0.9;
  /// One base seed, or one seed per trial index.
  std::vector<std::uint64_t> seeds{1};
  bool estimate_error = false;
  double trial_time_limit = 120.0;  ///< seconds
  bool write_curves = true;

  void validate() const;
  /// Dataset seed for (dim, trial).
  std::uint64_t trial_seed(std::size_t dim, std::size_t trial) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct TrialRecord {
  std::size_t dim = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  ///< module error text for failed trials

  std::size_t i90 = 0;
  std::size_t hull_vertex_count = 0;
  double full_volume = 0.0;
  double full_magnitude = 0.0;  ///< |X| at t = 1
  double quadrature_error = 0.0;  ///< NaN unless estimated
  /// Empirical check of the informal threshold discussion: the epsilon at
  /// which the derived rule first removes the N - I90 lowest moments, and the
  /// volume and magnitude lost by that removal.
  double epsilon_at_i90 = 0.0;
  double volume_loss_at_i90 = 0.0;
  double magnitude_loss_at_i90 = 0.0;
  std::vector<PrefixPoint> prefix_curve;
  double wall_time = 0.0;  ///< seconds; the only nondeterministic field
};

nlohmann::json trial_to_json(const TrialRecord& r);

struct SummaryRow {
  std::size_t dim;
  std::size_t trials;  ///< successful trials
  std::size_t failed;
  double mean_i90, stddev_i90;
  double mean_vertices, stddev_vertices;
};

struct ExperimentResult {
  std::vector<TrialRecord> trials;  ///< ordered by (dim, trial)
  std::vector<SummaryRow> summary;  ///< one per dim, config order
  std::vector<std::string> warnings;
};

/// Moments, exact hull and prefix curve of one cloud (dim, trial and seed are
/// left for the caller). Throws on failure.
TrialRecord analyze_cloud(const PointCloud& cloud, const ExperimentConfig& config, const Deadline& deadline = {});

/// One generated dataset: moments, exact hull, prefix curve. Errors are caught and
/// recorded in the returned record.
TrialRecord run_trial(const ExperimentConfig& config, std::size_t dim, std::size_t trial);

/// Every (dim, trial), `threads` trials at a time. Summary statistics use
/// successful trials only (sample standard deviation).
ExperimentResult run_experiments(const ExperimentConfig& config, unsigned threads = 1);

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<TrialRecord>& trials);

std::string format_summary_csv(const std::vector<SummaryRow>& rows);
std::string format_curve_csv(const std::vector<PrefixPoint>& curve);
/// Volume and magnitude, each divided by its final value, against i, with a
/// horizontal rule at `fraction`.
std::string format_curve_svg(const std::vector<PrefixPoint>& curve, double fraction, const std::string& title);

/// Writes summary.csv, trials.jsonl and (if enabled) curves/ under out_dir.
ExperimentResult run_table1(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                            unsigned threads = 1);
/// Writes trials.jsonl and curves/ under out_dir.
ExperimentResult run_prefix_curves(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                   unsigned threads = 1);

}  // namespace maghull
