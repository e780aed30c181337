#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pegstress/peg_metrics.hpp"
#include "pegstress/rail_sim.hpp"

namespace pegstress {

inline constexpr int kReportSchemaVersion = 1;

struct OutflowRow {
  std::string window;
  double p_secondary_24h_usd = 0.0;  // p95
  double p_primary_24h_usd = 0.0;    // p99
  double q_1h_usd = 0.0;

  bool operator==(const OutflowRow&) const = default;
};

enum class DeltaKind {
  Numeric,       // both sides finite
  Stabilized,    // baseline infinite, hybrid finite
  Destabilized,  // baseline finite, hybrid infinite
  Undefined,     // both infinite
};

struct MetricRow {
  std::string metric;
  int decimals = 0;  // display precision
  std::optional<double> baseline;  // empty = infinite / unstable
  std::optional<double> hybrid;
  DeltaKind delta_kind = DeltaKind::Numeric;
  std::optional<double> delta;      // empty when baseline is 0 or infinite
  std::optional<double> delta_pct;  // percent; empty when baseline is 0 or infinite

  bool operator==(const MetricRow&) const = default;
};

MetricRow make_metric_row(std::string metric, int decimals, std::optional<double> baseline,
                          std::optional<double> hybrid);

struct QueueDetail {
  double arrival_rate_per_min = 0.0;
  double service_rate_per_min = 0.0;
  int baseline_servers = 0;
  int hybrid_servers = 0;
  double baseline_utilization = 0.0;
  double hybrid_utilization = 0.0;
  double baseline_p_wait = 1.0;
  double hybrid_p_wait = 1.0;
  int sla_min_servers = 0;
  double sla_seconds = 0.0;

  bool operator==(const QueueDetail&) const = default;
};

struct StressReport {
  int schema_version = kReportSchemaVersion;
  double tail_p = 0.99;
  double tail_p_secondary = 0.95;
  double worst_hour_share = 0.75;
  std::vector<OutflowRow> outflows;
  std::vector<MetricRow> metrics;
  std::vector<AlphaSensitivityRow> alpha_sensitivity;
  QueueDetail queue;
  RailSummary rail_baseline;
  RailSummary rail_hybrid;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::string>> provenance;

  const MetricRow& row(const std::string& metric) const;
  bool operator==(const StressReport&) const = default;
};

enum class ReportFormat { Json, Csv, Text };

std::string render(const StressReport& report, ReportFormat format);
// Table-1 style outflow rows as CSV.
std::string render_outflows_csv(const StressReport& report);
StressReport report_from_json(const std::string& text);

/// Recomputes every delta from its baseline/hybrid pair; returns the names of
/// rows that disagree (empty when the report is self-consistent).
std::vector<std::string> audit(const StressReport& report);

// Display helpers shared with the CLI.
std::string format_fixed(double v, int decimals);  // trailing zeros trimmed
std::string format_usd(double v);                  // whole dollars, thousands separators
std::string format_percent(double pct);

}  // namespace pegstress
