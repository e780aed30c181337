#include "pegstress/rail_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json_io.hpp"
#include "pegstress/errors.hpp"

namespace pegstress {

RtgsSchedule RtgsSchedule::always_open() { return {}; }

RtgsSchedule RtgsSchedule::business_hours() { return {{RtgsWindow{13 * 60, 21 * 60}}, true}; }

void RtgsSchedule::validate() const {
  if (windows.empty()) throw ValidationError("rtgs: schedule has no windows");
  int prev_close = 0;
  for (const auto& w : windows) {
    if (w.open_minute < 0 || w.close_minute > 1440 || w.open_minute >= w.close_minute)
      throw ValidationError("rtgs: window must satisfy 0 <= open < close <= 1440");
    if (w.open_minute < prev_close)
      throw ValidationError("rtgs: windows must be sorted and non-overlapping");
    prev_close = w.close_minute;
  }
}

bool RtgsSchedule::is_open(EpochMinute m) const {
  if (weekdays_only && weekday(day_of(m)) >= 5) return false;
  const int mod = minute_of_day(m);
  return std::any_of(windows.begin(), windows.end(), [mod](const RtgsWindow& w) {
    return mod >= w.open_minute && mod < w.close_minute;
  });
}

bool RtgsSchedule::is_business_morning(EpochMinute m) const {
  return weekday(day_of(m)) < 5 && minute_of_day(m) == windows.front().open_minute;
}

RailConfig RailConfig::baseline(const ReservePortfolio& pf) {
  RailConfig c;
  c.portfolio = pf;
  c.rtgs = RtgsSchedule::business_hours();
  return c;
}

RailConfig RailConfig::hybrid(const ReservePortfolio& pf) {
  RailConfig c;
  c.portfolio = pf;
  c.standing_line_cap_usd = pf.tbill_usd();
  c.rtgs = RtgsSchedule::always_open();
  c.prefund_topup_usd = 1e9;
  return c;
}

void RailConfig::validate() const {
  portfolio.validate();
  rtgs.validate();
  if (!(standing_line_cap_usd >= 0.0)) throw ValidationError("rail: standing_line_cap_usd must be >= 0");
  if (standing_line_cap_usd > portfolio.tbill_usd() * (1.0 + 1e-12))
    throw ValidationError("rail: standing_line_cap_usd exceeds T-bill holdings");
  if (tbill_settlement_lag_minutes < 0) throw ValidationError("rail: settlement lag must be >= 0");
  if (!(prefund_topup_usd >= 0.0)) throw ValidationError("rail: prefund_topup_usd must be >= 0");
}

RailState RailState::initial(const RailConfig& config, EpochMinute start) {
  const auto& pf = config.portfolio;
  RailState s;
  s.minute = start;
  const MicroUsd cash_total = to_micro(pf.cash_usd());
  s.cash = to_micro(pf.cash_access_factor * pf.cash_usd());
  s.reserve_cash = cash_total - s.cash;
  s.tbills = to_micro(pf.tbill_usd());
  s.other_reserves = to_micro(pf.repo_usd());
  return s;
}

MicroUsd RailState::queue_usd() const {
  MicroUsd sum = 0;
  for (const auto& q : queue) sum += q.usd;
  return sum;
}

MicroUsd RailState::pending_usd() const {
  MicroUsd sum = 0;
  for (const auto& p : pending) sum += p.amount;
  return sum;
}

MicroUsd RailState::net_reserves() const {
  return cash + reserve_cash + tbills + other_reserves + pending_usd() - line_drawn;
}

namespace {

// Pays up to `budget` off the front of the backlog at minute `now`.
MicroUsd settle_fifo(RailState& s, MicroUsd budget, EpochMinute now, MinuteRecord& rec) {
  MicroUsd paid = 0;
  while (budget > 0 && !s.queue.empty()) {
    auto& head = s.queue.front();
    const MicroUsd x = std::min(budget, head.usd);
    head.usd -= x;
    budget -= x;
    paid += x;
    rec.max_wait_settled = std::max(rec.max_wait_settled, now - head.arrived);
    if (head.usd == 0) s.queue.pop_front();
  }
  return paid;
}

}  // namespace

MinuteRecord step(RailState& s, const RailConfig& config, MicroUsd demand) {
  if (demand < 0) throw ValidationError("rail step: negative demand");
  const EpochMinute now = s.minute;
  const bool open = config.rtgs.is_open(now);
  MinuteRecord rec;
  rec.minute = now;
  rec.demand = demand;

  // Matured T-bill proceeds arrive over RTGS; the line is repaid first.
  if (open) {
    while (!s.pending.empty() && s.pending.front().due <= now) {
      const auto p = s.pending.front();
      s.pending.pop_front();
      const MicroUsd repay = std::min(p.line_repayment, s.line_drawn);
      s.line_drawn -= repay;
      s.cash += p.amount - repay;
    }
  }
  if (config.prefund_topup_usd > 0.0 && config.rtgs.is_business_morning(now)) {
    const MicroUsd topup = std::min(to_micro(config.prefund_topup_usd), s.reserve_cash);
    s.reserve_cash -= topup;
    s.cash += topup;
  }

  if (demand > 0) s.queue.push_back({now, demand});

  // Backlog, then new demand, from cash on deposit.
  const MicroUsd from_cash = settle_fifo(s, std::min(s.cash, s.queue_usd()), now, rec);
  s.cash -= from_cash;
  rec.settled += from_cash;

  // Standing line against T-bills, only while RTGS is open.
  const double haircut = config.portfolio.tbill_haircut_1h;
  MicroUsd residual = s.queue_usd();
  const MicroUsd cap = to_micro(config.standing_line_cap_usd);
  if (residual > 0 && open && s.line_drawn < cap && haircut < 1.0 && s.tbills > 0) {
    const auto by_collateral =
        static_cast<MicroUsd>(std::floor((1.0 - haircut) * static_cast<double>(s.tbills)));
    const MicroUsd draw = std::min({residual, cap - s.line_drawn, by_collateral});
    if (draw > 0) {
      const MicroUsd pledged = std::min(
          s.tbills, static_cast<MicroUsd>(std::ceil(static_cast<double>(draw) / (1.0 - haircut))));
      s.tbills -= pledged;
      s.line_drawn += draw;
      s.pending.push_back({now + config.tbill_settlement_lag_minutes, pledged, draw});
      rec.settled += settle_fifo(s, draw, now, rec);
      rec.line_draw = draw;
    }
  }

  // Whatever is still queued and not already funded by pending sales triggers
  // an outright T-bill sale settling after the lag.
  residual = s.queue_usd();
  if (residual > 0) {
    MicroUsd incoming = 0;
    for (const auto& p : s.pending) incoming += p.amount - p.line_repayment;
    const MicroUsd sale = std::min(residual - incoming, s.tbills);
    if (sale > 0) {
      s.tbills -= sale;
      s.pending.push_back({now + config.tbill_settlement_lag_minutes, sale, 0});
    }
  }

  rec.queued = residual;
  rec.cash = s.cash;
  rec.line_drawn = s.line_drawn;
  ++s.minute;
  return rec;
}

RailTrace run_rail(const RailConfig& config, const MinuteDemandTrace& demand) {
  config.validate();
  if (demand.usd.empty()) throw ValidationError("run_rail: empty demand trace");

  RailTrace trace;
  RailState state = RailState::initial(config, demand.start);
  const MicroUsd initial_net = state.net_reserves();
  trace.records.reserve(demand.usd.size());

  auto& sum = trace.summary;
  MicroUsd max_queue = 0, total_demand = 0, total_settled = 0, peak_line = 0;
  MicroUsd prev_queue = 0;
  for (MicroUsd d : demand.usd) {
    const auto rec = step(state, config, d);
    total_demand += rec.demand;
    total_settled += rec.settled;
    max_queue = std::max(max_queue, rec.queued);
    peak_line = std::max(peak_line, rec.line_drawn);
    if (rec.queued > 0) {
      ++sum.total_queued_minutes;
      if (prev_queue == 0) ++sum.shortfall_event_count;
    }
    sum.max_customer_wait_minutes = std::max(sum.max_customer_wait_minutes, rec.max_wait_settled);
    prev_queue = rec.queued;
    trace.records.push_back(rec);
  }
  for (const auto& q : state.queue)
    sum.max_customer_wait_minutes = std::max(sum.max_customer_wait_minutes, state.minute - q.arrived);

  sum.max_queue_usd = to_usd(max_queue);
  sum.total_demand_usd = to_usd(total_demand);
  sum.total_settled_usd = to_usd(total_settled);
  sum.peak_line_drawn_usd = to_usd(peak_line);
  sum.final_queue_usd = to_usd(state.queue_usd());
  sum.conservation_error_usd = to_usd(initial_net - total_settled - state.net_reserves());
  trace.final_state = std::move(state);
  return trace;
}

ReserveCheck full_reserve_check(const RailConfig& config) {
  const auto& pf = config.portfolio;
  const double total = pf.cash_share + pf.tbill_share + pf.repo_share;
  ReserveCheck r;
  r.full = total >= 1.0 - 1e-9;
  r.gap = r.full ? 0.0 : 1.0 - total;
  return r;
}

std::string format_micro(MicroUsd v) {
  const bool neg = v < 0;
  const auto mag = neg ? -static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", neg ? "-" : "", mag / 1'000'000ULL,
                mag % 1'000'000ULL);
  return buf;
}

void write_rail_csv(std::ostream& out, const RailTrace& trace) {
  out << "minute,demand,settled,queued,cash,line_drawn\n";
  for (const auto& r : trace.records)
    out << format_minute(r.minute) << ',' << format_micro(r.demand) << ','
        << format_micro(r.settled) << ',' << format_micro(r.queued) << ','
        << format_micro(r.cash) << ',' << format_micro(r.line_drawn) << '\n';
}

namespace detail {

nlohmann::ordered_json to_json(const RailSummary& s) {
  nlohmann::ordered_json j;
  j["max_queue_usd"] = s.max_queue_usd;
  j["total_queued_minutes"] = s.total_queued_minutes;
  j["shortfall_event_count"] = s.shortfall_event_count;
  j["max_customer_wait_minutes"] = s.max_customer_wait_minutes;
  j["total_demand_usd"] = s.total_demand_usd;
  j["total_settled_usd"] = s.total_settled_usd;
  j["peak_line_drawn_usd"] = s.peak_line_drawn_usd;
  j["final_queue_usd"] = s.final_queue_usd;
  j["conservation_error_usd"] = s.conservation_error_usd;
  return j;
}

RailSummary rail_summary_from_json(const nlohmann::json& j) {
  RailSummary s;
  s.max_queue_usd = j.at("max_queue_usd").get<double>();
  s.total_queued_minutes = j.at("total_queued_minutes").get<std::int64_t>();
  s.shortfall_event_count = j.at("shortfall_event_count").get<std::int64_t>();
  s.max_customer_wait_minutes = j.at("max_customer_wait_minutes").get<std::int64_t>();
  s.total_demand_usd = j.at("total_demand_usd").get<double>();
  s.total_settled_usd = j.at("total_settled_usd").get<double>();
  s.peak_line_drawn_usd = j.at("peak_line_drawn_usd").get<double>();
  s.final_queue_usd = j.at("final_queue_usd").get<double>();
  s.conservation_error_usd = j.at("conservation_error_usd").get<double>();
  return s;
}

}  // namespace detail

std::string rail_summary_json(const RailSummary& s) { return detail::to_json(s).dump(2); }

}  // namespace pegstress
