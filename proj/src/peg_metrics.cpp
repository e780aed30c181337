#include "pegstress/peg_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "pegstress/errors.hpp"

namespace pegstress {

void HybridRailParams::validate() const {
  if (!(rail_capacity_usd_per_min >= 0.0) || !std::isfinite(rail_capacity_usd_per_min))
    throw ValidationError("hybrid rail: rail_capacity_usd_per_min must be finite and >= 0");
  if (!(pass_through > 0.0 && pass_through <= 1.0))
    throw ValidationError("hybrid rail: pass_through must lie in (0,1]");
  if (!(vol_floor_usd_per_min > 0.0)) throw ValidationError("hybrid rail: vol_floor must be positive");
  if (!(min_scale > 0.0 && min_scale <= 1.0))
    throw ValidationError("hybrid rail: min_scale must lie in (0,1]");
}

PegSummary summarize(const DeviationSeries& dev, double eps_bps, double gamma_bps) {
  if (!(eps_bps > 0.0) || !(gamma_bps > 0.0))
    throw ValidationError("summarize: thresholds must be positive");
  PegSummary s;
  s.eps_bps = eps_bps;
  s.gamma_bps = gamma_bps;
  s.d_max_bps = dev.max();
  s.minutes_ge_eps = (dev.values() >= eps_bps).count();
  std::int64_t run = 0;
  for (Eigen::Index t = 0; t < dev.size(); ++t) {
    run = dev[t] >= gamma_bps ? run + 1 : 0;
    s.longest_run_ge_gamma = std::max(s.longest_run_ge_gamma, run);
  }
  return s;
}

Eigen::ArrayXd hybrid_scale(const MinuteVolumeSeries& vol, const HybridRailParams& params) {
  params.validate();
  const Eigen::ArrayXd v_eff = vol.values().max(params.vol_floor_usd_per_min);
  const double depth = params.pass_through * params.rail_capacity_usd_per_min;
  return (v_eff / (v_eff + depth)).max(params.min_scale);
}

DeviationSeries hybrid_transform(const DeviationSeries& dev, const MinuteVolumeSeries& vol,
                                 const HybridRailParams& params) {
  if (dev.window() != vol.window())
    throw AlignmentError("hybrid_transform: deviation and volume grids differ");
  return {dev.start(), dev.values() * hybrid_scale(vol, params)};
}

std::vector<AlphaSensitivityRow> alpha_sensitivity(const DeviationSeries& dev,
                                                   const MinuteVolumeSeries& vol,
                                                   const HybridRailParams& params,
                                                   std::span<const double> alpha_grid,
                                                   double eps_bps, double gamma_bps) {
  std::vector<AlphaSensitivityRow> rows;
  rows.reserve(alpha_grid.size());
  for (double alpha : alpha_grid) {
    HybridRailParams p = params;
    p.pass_through = alpha;
    rows.push_back({alpha, summarize(hybrid_transform(dev, vol, p), eps_bps, gamma_bps)});
  }
  return rows;
}

void write_deviation_csv(std::ostream& out, const DeviationSeries& base, const DeviationSeries& hyp,
                         const Eigen::ArrayXd& scale) {
  if (base.window() != hyp.window() || scale.size() != base.size())
    throw AlignmentError("deviation csv: series lengths differ");
  out << "timestamp,d_base_bps,d_hyp_bps,scale\n";
  char buf[96];
  for (Eigen::Index t = 0; t < base.size(); ++t) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f\n", base[t], hyp[t], scale[t]);
    out << format_minute(base.start() + t) << buf;
  }
}

}  // namespace pegstress
