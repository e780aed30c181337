#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "pegstress/timeseries.hpp"

namespace pegstress {

/// Par-redemption rail expressed as extra market depth.
struct HybridRailParams {
  double rail_capacity_usd_per_min = 100e6;
  double pass_through = 0.5;  // share of rail capacity acting as tradable depth
  double vol_floor_usd_per_min = 5e6;
  double min_scale = 0.25;

  void validate() const;
  bool operator==(const HybridRailParams&) const = default;
};

struct PegSummary {
  double eps_bps = 5.0;
  double gamma_bps = 10.0;
  double d_max_bps = 0.0;
  std::int64_t minutes_ge_eps = 0;
  std::int64_t longest_run_ge_gamma = 0;

  bool operator==(const PegSummary&) const = default;
};

// Thresholds are inclusive.
PegSummary summarize(const DeviationSeries& dev, double eps_bps = 5.0, double gamma_bps = 10.0);

/// Per-minute depth-dilution factor max(min_scale, V_eff / (V_eff + alpha R)),
/// V_eff = max(V, vol_floor).
Eigen::ArrayXd hybrid_scale(const MinuteVolumeSeries& vol, const HybridRailParams& params);

/// Counterfactual deviation under the rail. `dev` and `vol` must share a grid.
DeviationSeries hybrid_transform(const DeviationSeries& dev, const MinuteVolumeSeries& vol,
                                 const HybridRailParams& params);

struct AlphaSensitivityRow {
  double pass_through = 0.0;
  PegSummary summary;

  bool operator==(const AlphaSensitivityRow&) const = default;
};

std::vector<AlphaSensitivityRow> alpha_sensitivity(const DeviationSeries& dev,
                                                   const MinuteVolumeSeries& vol,
                                                   const HybridRailParams& params,
                                                   std::span<const double> alpha_grid,
                                                   double eps_bps = 5.0, double gamma_bps = 10.0);

// Columns: timestamp,d_base_bps,d_hyp_bps,scale
void write_deviation_csv(std::ostream& out, const DeviationSeries& base, const DeviationSeries& hyp,
                         const Eigen::ArrayXd& scale);

}  // namespace pegstress
