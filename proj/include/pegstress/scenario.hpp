#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pegstress/funding.hpp"
#include "pegstress/ingest.hpp"
#include "pegstress/peg_metrics.hpp"
#include "pegstress/rail_sim.hpp"
#include "pegstress/report.hpp"

namespace pegstress {

struct DataSource {
  enum class Kind { Synthetic, Csv };
  Kind kind = Kind::Synthetic;
  std::string window_label = "SVB-calibrated";
  std::filesystem::path prices_csv;
  std::filesystem::path redemptions_csv;
  std::filesystem::path full_sample_redemptions_csv;  // optional extra Table 1 row
  IngestPolicy ingest;
  SyntheticScenarioSpec synthetic;
};

struct TailConfig {
  double p = 0.99;
  double p_secondary = 0.95;
  double worst_hour_share = 0.75;
  int worst_hour_utc = 14;
};

struct QueueConfig {
  double service_rate = 2.0;
  int baseline_servers = 5;
  int hybrid_servers = 12;
  double ticket_size_usd = 1e6;
  double sla_seconds = 60.0;
};

struct Thresholds {
  double eps_bps = 5.0;
  double gamma_bps = 10.0;
};

struct ScenarioConfig {
  DataSource data;
  ReservePortfolio portfolio;
  TailConfig tail;
  HybridRailParams hybrid_rail;
  std::vector<double> alpha_grid{0.25, 0.5, 1.0};
  QueueConfig queue;
  RailConfig rail_baseline = RailConfig::baseline(ReservePortfolio{});
  RailConfig rail_hybrid = RailConfig::hybrid(ReservePortfolio{});
  Thresholds thresholds;
  std::filesystem::path out_dir = "pegstress-out";

  // March 2023 reserve mix and calibration.
  static ScenarioConfig paper_defaults();

  void validate() const;
};

// Strict JSON config: unknown keys are rejected. Relative CSV paths resolve
// against `base_dir`. Missing keys keep their paper_defaults() values.
ScenarioConfig config_from_json(const std::string& text,
                                const std::filesystem::path& base_dir = {});
// "paper_defaults" names the built-in preset; anything else is a file path.
ScenarioConfig load_config(const std::string& name_or_path);
std::string config_to_json(const ScenarioConfig& config);

struct ScenarioRun {
  StressReport report;
  DeviationSeries baseline_deviation;
  DeviationSeries hybrid_deviation;
  Eigen::ArrayXd hybrid_scale;
  RailTrace rail_baseline;
  RailTrace rail_hybrid;
};

/// ingest -> funding -> peg -> queue -> rail, baseline and hybrid, then the
/// report. Errors are rethrown with the failing stage as a prefix.
ScenarioRun run_scenario(const ScenarioConfig& config);

/// Writes report.json, report.txt, table1.csv, table2.csv, deviation.csv,
/// rail_baseline.csv, rail_hybrid.csv and rail_summary.json into `dir`.
void write_outputs(const ScenarioRun& run, const std::filesystem::path& dir);

}  // namespace pegstress
