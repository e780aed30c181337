#pragma once

#include <deque>
#include <iosfwd>
#include <string>
#include <vector>

#include "pegstress/funding.hpp"
#include "pegstress/ingest.hpp"
#include "pegstress/money.hpp"
#include "pegstress/timeseries.hpp"

namespace pegstress {

// Half-open [open, close) in minutes of the UTC day.
struct RtgsWindow {
  int open_minute = 0;
  int close_minute = 1440;
  bool operator==(const RtgsWindow&) const = default;
};

struct RtgsSchedule {
  std::vector<RtgsWindow> windows{RtgsWindow{}};
  bool weekdays_only = false;

  static RtgsSchedule always_open();
  // 13:00-21:00 UTC, Monday to Friday.
  static RtgsSchedule business_hours();

  void validate() const;
  bool is_open(EpochMinute m) const;
  // First open minute of a weekday; prefund top-ups land here.
  bool is_business_morning(EpochMinute m) const;
  bool operator==(const RtgsSchedule&) const = default;
};

struct RailConfig {
  ReservePortfolio portfolio;
  double standing_line_cap_usd = 0.0;  // <= T-bill holdings
  int tbill_settlement_lag_minutes = 1440;
  RtgsSchedule rtgs;
  double prefund_topup_usd = 0.0;

  // Cap 0, business-hours RTGS, no prefund.
  static RailConfig baseline(const ReservePortfolio& pf);
  // Cap = all T-bills, 24x7 RTGS, 1bn prefund each business morning.
  static RailConfig hybrid(const ReservePortfolio& pf);

  void validate() const;
  bool operator==(const RailConfig&) const = default;
};

struct PendingSettlement {
  EpochMinute due = 0;
  MicroUsd amount = 0;          // T-bill sale proceeds
  MicroUsd line_repayment = 0;  // portion owed back on the standing line
};

struct QueuedTranche {
  EpochMinute arrived = 0;
  MicroUsd usd = 0;
};

struct RailState {
  EpochMinute minute = 0;
  MicroUsd cash = 0;          // operational settlement balance
  MicroUsd reserve_cash = 0;  // cash outside the hour bucket, reached by top-ups
  MicroUsd tbills = 0;
  MicroUsd other_reserves = 0;  // repos; never mobilised by the rail
  MicroUsd line_drawn = 0;
  std::deque<PendingSettlement> pending;  // ordered by due minute
  std::deque<QueuedTranche> queue;        // FIFO redemption backlog

  // Cash starts as the accessible share of reserve cash.
  static RailState initial(const RailConfig& config, EpochMinute start);

  MicroUsd queue_usd() const;
  MicroUsd pending_usd() const;
  // Liquid assets net of the line: conserved except for settled redemptions.
  MicroUsd net_reserves() const;
};

struct MinuteRecord {
  EpochMinute minute = 0;
  MicroUsd demand = 0;
  MicroUsd settled = 0;
  MicroUsd queued = 0;  // backlog after this minute
  MicroUsd cash = 0;
  MicroUsd line_drawn = 0;
  MicroUsd line_draw = 0;  // drawn during this minute
  std::int64_t max_wait_settled = -1;  // longest wait among dollars settled this minute
};

MinuteRecord step(RailState& state, const RailConfig& config, MicroUsd demand);

struct RailSummary {
  double max_queue_usd = 0.0;
  std::int64_t total_queued_minutes = 0;
  std::int64_t shortfall_event_count = 0;  // episodes of nonzero backlog
  std::int64_t max_customer_wait_minutes = 0;
  double total_demand_usd = 0.0;
  double total_settled_usd = 0.0;
  double peak_line_drawn_usd = 0.0;
  double final_queue_usd = 0.0;
  double conservation_error_usd = 0.0;

  bool operator==(const RailSummary&) const = default;
};

struct RailTrace {
  std::vector<MinuteRecord> records;
  RailSummary summary;
  RailState final_state;
};

/// Folds `step` over the trace. Dollars still queued at the end count their
/// residence up to the end of the horizon in max_customer_wait_minutes.
RailTrace run_rail(const RailConfig& config, const MinuteDemandTrace& demand);

struct ReserveCheck {
  bool full = false;
  double gap = 0.0;  // missing share of float when not full
};

ReserveCheck full_reserve_check(const RailConfig& config);

// Columns: minute,demand,settled,queued,cash,line_drawn (USD).
void write_rail_csv(std::ostream& out, const RailTrace& trace);
std::string rail_summary_json(const RailSummary& summary);
std::string format_micro(MicroUsd v);

}  // namespace pegstress
