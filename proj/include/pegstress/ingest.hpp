#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "pegstress/money.hpp"
#include "pegstress/timeseries.hpp"

namespace pegstress {

enum class GapAction { Error, DropWindow };
enum class DuplicatePolicy { Error, KeepFirst };

struct IngestPolicy {
  int max_gap_fill_minutes = 5;
  // DropWindow keeps the longest gap-free stretch (earliest on ties).
  GapAction on_longer_gap = GapAction::Error;
  DuplicatePolicy duplicate_policy = DuplicatePolicy::Error;

  void validate() const;
};

struct ParseReport {
  std::size_t rows_read = 0;
  std::size_t minutes_filled = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t long_gaps = 0;
  std::size_t minutes_dropped = 0;  // rows discarded by DropWindow
};

struct PriceCsvData {
  MinutePriceSeries prices;
  MinuteVolumeSeries volumes;
  ParseReport report;
};

// Header `timestamp,price,volume_usd`. Timestamps are ISO-8601 UTC or epoch
// seconds; seconds within a minute are floored onto the minute grid, so two
// rows in the same minute count as duplicates.
PriceCsvData parse_price_csv(const std::filesystem::path& path, const IngestPolicy& policy = {});
PriceCsvData parse_price_csv(std::istream& in, const IngestPolicy& policy = {});
void write_price_csv(std::ostream& out, const MinutePriceSeries& prices,
                     const MinuteVolumeSeries& volumes);

// Header `date,redemption_usd`; output is sorted by date.
DailyRedemptionSeries parse_redemption_csv(const std::filesystem::path& path,
                                           DuplicatePolicy duplicates = DuplicatePolicy::Error);
DailyRedemptionSeries parse_redemption_csv(std::istream& in,
                                           DuplicatePolicy duplicates = DuplicatePolicy::Error);
void write_redemption_csv(std::ostream& out, const DailyRedemptionSeries& series);

/// Minute-resolution redemption demand, one entry per minute from `start`.
struct MinuteDemandTrace {
  EpochMinute start = 0;
  std::vector<MicroUsd> usd;

  double total_usd() const;
};

/// Spreads each day's redemptions over its minutes: `worst_hour_share` of the
/// day lands uniformly in hour `worst_hour_utc`, the rest uniformly over the
/// other 23 hours. Days missing from the series carry zero demand. Per-day
/// totals are preserved to the micro-dollar.
MinuteDemandTrace minute_redemption_trace(const DailyRedemptionSeries& daily,
                                          double worst_hour_share = 0.75,
                                          int worst_hour_utc = 14);

/// Stylised de-peg episode. Deviation is zero before the onset, ramps linearly
/// to the peak, decays with the half-life toward the plateau for
/// `plateau_minutes`, then decays toward zero with the same half-life.
struct SyntheticScenarioSpec {
  std::uint64_t seed = 42;
  EpochMinute start_minute = 19426 * kMinutesPerDay;  // 2023-03-10T00:00Z
  int window_minutes = 7200;
  double peak_deviation_bps = 1219.0;
  int shock_onset_minute = 600;
  int ramp_minutes = 30;
  double plateau_bps = 300.0;
  int plateau_minutes = 2880;
  double recovery_halflife_minutes = 240.0;
  double noise_bps = 2.0;
  // p99 (linear interpolation) of these five days is 1,848,824,810.
  // The largest day falls second, so its worst hour outruns the one-hour cash.
  std::vector<double> daily_redemption_targets = {920'000'000.0, 1'860'000'000.0,
                                                  650'000'000.0, 1'580'620'250.0,
                                                  1'210'000'000.0};
  double base_volume_usd_per_min = 2e6;
  double stress_volume_multiplier = 3.0;
  double volume_dispersion = 0.3;  // lognormal sigma, clipped at 3 sigma

  void validate() const;
  bool operator==(const SyntheticScenarioSpec&) const = default;
};

struct SyntheticScenario {
  MinutePriceSeries prices;
  MinuteVolumeSeries volumes;
  DailyRedemptionSeries redemptions;
};

SyntheticScenario generate_synthetic_scenario(const SyntheticScenarioSpec& spec);

}  // namespace pegstress
