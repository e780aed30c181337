#include "pegstress/scenario.hpp"

#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pegstress/errors.hpp"
#include "pegstress/queueing.hpp"

namespace pegstress {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Strict reader over one JSON object: every key must be consumed.
class Section {
 public:
  Section(const json* node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_->is_object()) throw ValidationError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }

  template <class T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    seen_.insert(key);
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception&) {
      throw ValidationError(where(key) + ": wrong type");
    }
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return node_->at(key);
  }

  Section child(const char* key) {
    if (!has(key)) return Section(nullptr, where(key));
    seen_.insert(key);
    return Section(&node_->at(key), where(key));
  }

  std::string where(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_) return;
    for (const auto& [k, v] : node_->items())
      if (!seen_.count(k)) throw ValidationError(where(k.c_str()) + ": unknown key");
  }

 private:
  const json* node_;
  std::string path_;
  std::set<std::string> seen_;
};

GapAction gap_action_from(const std::string& s, const std::string& where) {
  if (s == "error") return GapAction::Error;
  if (s == "drop-window") return GapAction::DropWindow;
  throw ValidationError(where + ": expected 'error' or 'drop-window'");
}

DuplicatePolicy duplicate_policy_from(const std::string& s, const std::string& where) {
  if (s == "error") return DuplicatePolicy::Error;
  if (s == "keep-first") return DuplicatePolicy::KeepFirst;
  throw ValidationError(where + ": expected 'error' or 'keep-first'");
}

RtgsSchedule rtgs_from(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j == "24x7") return RtgsSchedule::always_open();
    if (j == "business_hours") return RtgsSchedule::business_hours();
    throw ValidationError(where + ": expected '24x7', 'business_hours' or an object");
  }
  Section s(&j, where);
  RtgsSchedule out;
  std::vector<std::array<int, 2>> windows;
  s.get("windows", windows);
  s.get("weekdays_only", out.weekdays_only);
  s.finish();
  out.windows.clear();
  for (const auto& w : windows) out.windows.push_back({w[0], w[1]});
  return out;
}

ordered_json rtgs_to_json(const RtgsSchedule& r) {
  ordered_json windows = ordered_json::array();
  for (const auto& w : r.windows) windows.push_back({w.open_minute, w.close_minute});
  return {{"windows", windows}, {"weekdays_only", r.weekdays_only}};
}

void read_rail(Section s, RailConfig& rc) {
  s.get("standing_line_cap_usd", rc.standing_line_cap_usd);
  s.get("tbill_settlement_lag_minutes", rc.tbill_settlement_lag_minutes);
  s.get("prefund_topup_usd", rc.prefund_topup_usd);
  if (s.has("rtgs")) rc.rtgs = rtgs_from(s.raw("rtgs"), s.where("rtgs"));
  s.finish();
}

ordered_json rail_to_json(const RailConfig& rc) {
  return {{"standing_line_cap_usd", rc.standing_line_cap_usd},
          {"tbill_settlement_lag_minutes", rc.tbill_settlement_lag_minutes},
          {"rtgs", rtgs_to_json(rc.rtgs)},
          {"prefund_topup_usd", rc.prefund_topup_usd}};
}

// Shortest round-trip text.
std::string num(double v) { return json(v).dump(); }

void flatten(const ordered_json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const IoError& e) {
    throw IoError(name + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(name + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::optional<double> finite(double v) {
  return std::isfinite(v) ? std::optional<double>(v) : std::nullopt;
}

struct LoadedData {
  MinutePriceSeries prices;
  MinuteVolumeSeries volumes;
  DailyRedemptionSeries redemptions;
  std::optional<DailyRedemptionSeries> full_sample;
};

LoadedData load_data(const DataSource& d) {
  if (d.kind == DataSource::Kind::Synthetic) {
    auto s = stage("ingest (data.synthetic)", [&] { return generate_synthetic_scenario(d.synthetic); });
    return {std::move(s.prices), std::move(s.volumes), std::move(s.redemptions), std::nullopt};
  }
  auto csv = stage("ingest (data.prices_csv=" + d.prices_csv.string() + ")",
                   [&] { return parse_price_csv(d.prices_csv, d.ingest); });
  auto red = stage("ingest (data.redemptions_csv=" + d.redemptions_csv.string() + ")", [&] {
    return parse_redemption_csv(d.redemptions_csv, d.ingest.duplicate_policy);
  });
  std::optional<DailyRedemptionSeries> full;
  if (!d.full_sample_redemptions_csv.empty())
    full = stage("ingest (data.full_sample_redemptions_csv=" + d.full_sample_redemptions_csv.string() + ")",
                 [&] { return parse_redemption_csv(d.full_sample_redemptions_csv, d.ingest.duplicate_policy); });
  return {std::move(csv.prices), std::move(csv.volumes), std::move(red), std::move(full)};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

ScenarioConfig ScenarioConfig::paper_defaults() {
  ScenarioConfig c;
  c.rail_baseline = RailConfig::baseline(c.portfolio);
  c.rail_hybrid = RailConfig::hybrid(c.portfolio);
  return c;
}

void ScenarioConfig::validate() const {
  stage("config.portfolio", [&] { portfolio.validate(); });
  stage("config.hybrid_rail", [&] { hybrid_rail.validate(); });
  stage("config.data.ingest", [&] { data.ingest.validate(); });
  if (data.kind == DataSource::Kind::Synthetic)
    stage("config.data.synthetic", [&] { data.synthetic.validate(); });
  else if (data.prices_csv.empty() || data.redemptions_csv.empty())
    throw ValidationError("config.data: csv source needs prices_csv and redemptions_csv");
  for (double a : alpha_grid)
    if (!(a > 0.0 && a <= 1.0)) throw ValidationError("config.hybrid_rail.alpha_grid: values must lie in (0,1]");
  if (!(tail.p > 0.0 && tail.p < 1.0) || !(tail.p_secondary > 0.0 && tail.p_secondary < 1.0))
    throw ValidationError("config.tail: quantile levels must lie in (0,1)");
  if (!(tail.worst_hour_share > 0.0 && tail.worst_hour_share <= 1.0))
    throw ValidationError("config.tail.worst_hour_share must lie in (0,1]");
  if (tail.worst_hour_utc < 0 || tail.worst_hour_utc > 23)
    throw ValidationError("config.tail.worst_hour_utc must lie in [0,23]");
  if (!(queue.service_rate > 0.0) || queue.baseline_servers < 1 || queue.hybrid_servers < 1 ||
      !(queue.ticket_size_usd > 0.0) || !(queue.sla_seconds > 0.0))
    throw ValidationError("config.queue: rates, servers, ticket size and SLA must be positive");
  if (!(thresholds.eps_bps > 0.0) || !(thresholds.gamma_bps > 0.0))
    throw ValidationError("config.thresholds: thresholds must be positive");
  stage("config.rail.baseline", [&] { rail_baseline.validate(); });
  stage("config.rail.hybrid", [&] { rail_hybrid.validate(); });
  if (!(rail_baseline.portfolio == portfolio) || !(rail_hybrid.portfolio == portfolio))
    throw ValidationError("config.rail: rail portfolios must match config.portfolio");
}

ScenarioConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  ScenarioConfig c = ScenarioConfig::paper_defaults();
  Section top(&root, "");

  {
    Section d = top.child("data");
    std::string source = "synthetic", prices, red, full;
    d.get("source", source);
    d.get("window_label", c.data.window_label);
    d.get("prices_csv", prices);
    d.get("redemptions_csv", red);
    d.get("full_sample_redemptions_csv", full);
    if (source == "synthetic") c.data.kind = DataSource::Kind::Synthetic;
    else if (source == "csv") c.data.kind = DataSource::Kind::Csv;
    else throw ValidationError("data.source: expected 'synthetic' or 'csv'");
    c.data.prices_csv = resolve(prices, base_dir);
    c.data.redemptions_csv = resolve(red, base_dir);
    c.data.full_sample_redemptions_csv = resolve(full, base_dir);

    Section in = d.child("ingest");
    in.get("max_gap_fill_minutes", c.data.ingest.max_gap_fill_minutes);
    if (in.has("on_longer_gap"))
      c.data.ingest.on_longer_gap =
          gap_action_from(in.raw("on_longer_gap").get<std::string>(), in.where("on_longer_gap"));
    if (in.has("duplicate_policy"))
      c.data.ingest.duplicate_policy = duplicate_policy_from(
          in.raw("duplicate_policy").get<std::string>(), in.where("duplicate_policy"));
    in.finish();

    Section s = d.child("synthetic");
    auto& sp = c.data.synthetic;
    s.get("seed", sp.seed);
    if (s.has("start_date"))
      sp.start_minute = stage(s.where("start_date"), [&] {
        return parse_date(s.raw("start_date").get<std::string>()) * kMinutesPerDay;
      });
    s.get("window_minutes", sp.window_minutes);
    s.get("peak_deviation_bps", sp.peak_deviation_bps);
    s.get("shock_onset_minute", sp.shock_onset_minute);
    s.get("ramp_minutes", sp.ramp_minutes);
    s.get("plateau_bps", sp.plateau_bps);
    s.get("plateau_minutes", sp.plateau_minutes);
    s.get("recovery_halflife_minutes", sp.recovery_halflife_minutes);
    s.get("noise_bps", sp.noise_bps);
    s.get("daily_redemption_targets", sp.daily_redemption_targets);
    s.get("base_volume_usd_per_min", sp.base_volume_usd_per_min);
    s.get("stress_volume_multiplier", sp.stress_volume_multiplier);
    s.get("volume_dispersion", sp.volume_dispersion);
    s.finish();
    d.finish();
  }
  {
    Section p = top.child("portfolio");
    auto& pf = c.portfolio;
    p.get("float_usd", pf.float_usd);
    p.get("cash_share", pf.cash_share);
    p.get("tbill_share", pf.tbill_share);
    p.get("repo_share", pf.repo_share);
    p.get("cash_access_factor", pf.cash_access_factor);
    p.get("tbill_haircut_1h", pf.tbill_haircut_1h);
    p.get("tbill_line_cap_usd", pf.tbill_line_cap_usd);
    p.get("repo_convertible_24h", pf.repo_convertible_24h);
    p.finish();
  }
  {
    Section t = top.child("tail");
    t.get("p", c.tail.p);
    t.get("p_secondary", c.tail.p_secondary);
    t.get("worst_hour_share", c.tail.worst_hour_share);
    t.get("worst_hour_utc", c.tail.worst_hour_utc);
    t.finish();
  }
  {
    Section h = top.child("hybrid_rail");
    h.get("rail_capacity_usd_per_min", c.hybrid_rail.rail_capacity_usd_per_min);
    h.get("pass_through", c.hybrid_rail.pass_through);
    h.get("vol_floor_usd_per_min", c.hybrid_rail.vol_floor_usd_per_min);
    h.get("min_scale", c.hybrid_rail.min_scale);
    h.get("alpha_grid", c.alpha_grid);
    h.finish();
  }
  {
    Section q = top.child("queue");
    q.get("service_rate_per_min", c.queue.service_rate);
    q.get("baseline_servers", c.queue.baseline_servers);
    q.get("hybrid_servers", c.queue.hybrid_servers);
    q.get("ticket_size_usd", c.queue.ticket_size_usd);
    q.get("sla_seconds", c.queue.sla_seconds);
    q.finish();
  }
  {
    // Rail defaults follow the (possibly overridden) portfolio.
    c.rail_baseline = RailConfig::baseline(c.portfolio);
    c.rail_hybrid = RailConfig::hybrid(c.portfolio);
    Section r = top.child("rail");
    read_rail(r.child("baseline"), c.rail_baseline);
    read_rail(r.child("hybrid"), c.rail_hybrid);
    r.finish();
  }
  {
    Section t = top.child("thresholds");
    t.get("eps_bps", c.thresholds.eps_bps);
    t.get("gamma_bps", c.thresholds.gamma_bps);
    t.finish();
  }
  {
    Section o = top.child("output");
    std::string dir = c.out_dir.string();
    o.get("out_dir", dir);
    c.out_dir = dir;
    o.finish();
  }
  top.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& name_or_path) {
  if (name_or_path == "paper_defaults") return ScenarioConfig::paper_defaults();
  std::ifstream in(name_or_path);
  if (!in) throw IoError("cannot open config '" + name_or_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str(), std::filesystem::path(name_or_path).parent_path());
}

std::string config_to_json(const ScenarioConfig& c) {
  ordered_json j;
  const auto& sp = c.data.synthetic;
  j["data"] = {
      {"source", c.data.kind == DataSource::Kind::Synthetic ? "synthetic" : "csv"},
      {"window_label", c.data.window_label},
      {"prices_csv", c.data.prices_csv.string()},
      {"redemptions_csv", c.data.redemptions_csv.string()},
      {"full_sample_redemptions_csv", c.data.full_sample_redemptions_csv.string()},
      {"ingest",
       {{"max_gap_fill_minutes", c.data.ingest.max_gap_fill_minutes},
        {"on_longer_gap", c.data.ingest.on_longer_gap == GapAction::Error ? "error" : "drop-window"},
        {"duplicate_policy",
         c.data.ingest.duplicate_policy == DuplicatePolicy::Error ? "error" : "keep-first"}}},
      {"synthetic",
       {{"seed", sp.seed},
        {"start_date", format_date(day_of(sp.start_minute))},
        {"window_minutes", sp.window_minutes},
        {"peak_deviation_bps", sp.peak_deviation_bps},
        {"shock_onset_minute", sp.shock_onset_minute},
        {"ramp_minutes", sp.ramp_minutes},
        {"plateau_bps", sp.plateau_bps},
        {"plateau_minutes", sp.plateau_minutes},
        {"recovery_halflife_minutes", sp.recovery_halflife_minutes},
        {"noise_bps", sp.noise_bps},
        {"daily_redemption_targets", sp.daily_redemption_targets},
        {"base_volume_usd_per_min", sp.base_volume_usd_per_min},
        {"stress_volume_multiplier", sp.stress_volume_multiplier},
        {"volume_dispersion", sp.volume_dispersion}}}};
  const auto& pf = c.portfolio;
  j["portfolio"] = {{"float_usd", pf.float_usd},
                    {"cash_share", pf.cash_share},
                    {"tbill_share", pf.tbill_share},
                    {"repo_share", pf.repo_share},
                    {"cash_access_factor", pf.cash_access_factor},
                    {"tbill_haircut_1h", pf.tbill_haircut_1h},
                    {"tbill_line_cap_usd", pf.tbill_line_cap_usd},
                    {"repo_convertible_24h", pf.repo_convertible_24h}};
  j["tail"] = {{"p", c.tail.p},
               {"p_secondary", c.tail.p_secondary},
               {"worst_hour_share", c.tail.worst_hour_share},
               {"worst_hour_utc", c.tail.worst_hour_utc}};
  j["hybrid_rail"] = {{"rail_capacity_usd_per_min", c.hybrid_rail.rail_capacity_usd_per_min},
                      {"pass_through", c.hybrid_rail.pass_through},
                      {"vol_floor_usd_per_min", c.hybrid_rail.vol_floor_usd_per_min},
                      {"min_scale", c.hybrid_rail.min_scale},
                      {"alpha_grid", c.alpha_grid}};
  j["queue"] = {{"service_rate_per_min", c.queue.service_rate},
                {"baseline_servers", c.queue.baseline_servers},
                {"hybrid_servers", c.queue.hybrid_servers},
                {"ticket_size_usd", c.queue.ticket_size_usd},
                {"sla_seconds", c.queue.sla_seconds}};
  j["rail"] = {{"baseline", rail_to_json(c.rail_baseline)}, {"hybrid", rail_to_json(c.rail_hybrid)}};
  j["thresholds"] = {{"eps_bps", c.thresholds.eps_bps}, {"gamma_bps", c.thresholds.gamma_bps}};
  j["output"] = {{"out_dir", c.out_dir.string()}};
  return j.dump(2) + "\n";
}

ScenarioRun run_scenario(const ScenarioConfig& config) {
  config.validate();
  LoadedData data = load_data(config.data);

  // Funding liquidity.
  const auto& tc = config.tail;
  const auto tail = stage("funding", [&] { return outflow_tail(data.redemptions, tc.p, tc.worst_hour_share); });
  auto outflow_row = [&](const std::string& label, const DailyRedemptionSeries& r) {
    return stage("funding", [&] {
      const double q_lo = empirical_quantile(r.redemptions(), tc.p_secondary);
      const auto t = outflow_tail(r, tc.p, tc.worst_hour_share);
      return OutflowRow{label, q_lo, t.q_24h_usd, t.q_1h_usd};
    });
  };
  const auto cov_1h = stage("funding", [&] { return coverage(config.portfolio, tail, Horizon::OneHour); });
  const auto cov_24h = stage("funding", [&] { return coverage(config.portfolio, tail, Horizon::OneDay); });

  // Peg metrics.
  const auto& th = config.thresholds;
  auto aligned = stage("peg", [&] { return align(data.prices, data.volumes); });
  DeviationSeries base_dev = compute_deviation(aligned.prices);
  Eigen::ArrayXd scale = stage("peg", [&] { return hybrid_scale(aligned.volumes, config.hybrid_rail); });
  DeviationSeries hyp_dev{base_dev.start(), base_dev.values() * scale};
  const auto base_peg = stage("peg", [&] { return summarize(base_dev, th.eps_bps, th.gamma_bps); });
  const auto hyp_peg = stage("peg", [&] { return summarize(hyp_dev, th.eps_bps, th.gamma_bps); });
  auto alpha_rows = stage("peg", [&] {
    return alpha_sensitivity(base_dev, aligned.volumes, config.hybrid_rail, config.alpha_grid,
                             th.eps_bps, th.gamma_bps);
  });

  // Redemption desk.
  const auto& qc = config.queue;
  QueueParams qp;
  qp.service_rate = qc.service_rate;
  qp.ticket_size_usd = qc.ticket_size_usd;
  qp.sla_seconds = qc.sla_seconds;
  qp.arrival_rate = stage("queue", [&] { return arrival_rate_from_tail(tail.q_1h_usd, qc.ticket_size_usd); });
  QueueParams qb = qp, qh = qp;
  qb.servers = qc.baseline_servers;
  qh.servers = qc.hybrid_servers;
  const auto queue_base = stage("queue", [&] { return erlang_c(qb); });
  const auto queue_hyb = stage("queue", [&] { return erlang_c(qh); });
  const int c_star = stage("queue", [&] { return min_servers(qp.arrival_rate, qp.service_rate, qp.sla_seconds); });

  // Rail simulation; the two branches share nothing mutable.
  const auto trace = stage("rail", [&] {
    return minute_redemption_trace(data.redemptions, tc.worst_hour_share, tc.worst_hour_utc);
  });
  auto fut_base = std::async(std::launch::async, [&] {
    return stage("rail (config.rail.baseline)", [&] { return run_rail(config.rail_baseline, trace); });
  });
  RailTrace rail_hyb = stage("rail (config.rail.hybrid)", [&] { return run_rail(config.rail_hybrid, trace); });
  RailTrace rail_base = fut_base.get();

  StressReport rep;
  rep.tail_p = tc.p;
  rep.tail_p_secondary = tc.p_secondary;
  rep.worst_hour_share = tc.worst_hour_share;
  if (data.full_sample) rep.outflows.push_back(outflow_row("Full sample", *data.full_sample));
  rep.outflows.push_back(outflow_row(config.data.window_label, data.redemptions));

  const auto eps = format_fixed(th.eps_bps, 2);
  const auto gamma = format_fixed(th.gamma_bps, 2);
  rep.metrics = {
      make_metric_row("ILCR_1h", 3, finite(cov_1h.ilcr), finite(cov_1h.ilcr)),
      make_metric_row("ILCR_24h", 3, finite(cov_24h.ilcr), finite(cov_24h.ilcr)),
      make_metric_row("MMG_1h", 0, cov_1h.mmg_usd, cov_1h.mmg_usd),
      make_metric_row("Max peg deviation (bps)", 1, base_peg.d_max_bps, hyp_peg.d_max_bps),
      make_metric_row("Peak wait time (s)", 1, queue_base.wq_seconds, queue_hyb.wq_seconds),
      make_metric_row("Minutes >= " + eps + " bps (min)", 0,
                      static_cast<double>(base_peg.minutes_ge_eps),
                      static_cast<double>(hyp_peg.minutes_ge_eps)),
      make_metric_row("Longest run >= " + gamma + " bps (min)", 0,
                      static_cast<double>(base_peg.longest_run_ge_gamma),
                      static_cast<double>(hyp_peg.longest_run_ge_gamma)),
  };
  rep.alpha_sensitivity = std::move(alpha_rows);
  rep.queue = {qp.arrival_rate,       qp.service_rate,     qb.servers,       qh.servers,
               queue_base.utilization, queue_hyb.utilization, queue_base.p_wait, queue_hyb.p_wait,
               c_star,                qc.sla_seconds};
  rep.rail_baseline = rail_base.summary;
  rep.rail_hybrid = rail_hyb.summary;

  const auto& hr = config.hybrid_rail;
  rep.notes.push_back("ILCR_1h uses a T-bill line cap of " + format_usd(config.portfolio.tbill_line_cap_usd) +
                      " USD in both scenarios; the hybrid standing line is exercised in the rail simulation.");
  rep.notes.push_back("Hybrid rail capacity R = " + format_usd(hr.rail_capacity_usd_per_min) +
                      " USD/min, pass-through alpha = " + format_fixed(hr.pass_through, 4) +
                      ", volume floor = " + format_usd(hr.vol_floor_usd_per_min) +
                      " USD/min, min scale = " + format_fixed(hr.min_scale, 4) + ".");
  rep.notes.push_back("Quantiles interpolate linearly between order statistics; with " +
                      std::to_string(data.redemptions.size()) +
                      " daily observations the upper tail sits between the largest days.");
  if (config.data.kind == DataSource::Kind::Synthetic)
    rep.notes.push_back("Price, volume and redemption inputs are synthetic (seed " +
                        std::to_string(config.data.synthetic.seed) + ").");

  auto cfg = ordered_json::parse(config_to_json(config));
  cfg.erase("output");
  flatten(cfg, "", rep.provenance);
  auto put = [&](const char* k, const std::string& v) { rep.provenance.emplace_back(k, v); };
  put("computed.data_minutes", std::to_string(base_dev.size()));
  put("computed.data_days", std::to_string(data.redemptions.size()));
  put("computed.q_24h_usd", num(tail.q_24h_usd));
  put("computed.q_1h_usd", num(tail.q_1h_usd));
  put("computed.imr_1h_usd", num(cov_1h.imr_usd));
  put("computed.imr_24h_usd", num(cov_24h.imr_usd));
  put("computed.mmg_24h_usd", num(cov_24h.mmg_usd));
  put("computed.arrival_rate_per_min", num(qp.arrival_rate));
  put("computed.sla_min_servers", std::to_string(c_star));
  put("computed.minute_trace_total_usd", num(trace.total_usd()));

  return {std::move(rep), std::move(base_dev), std::move(hyp_dev), std::move(scale),
          std::move(rail_base), std::move(rail_hyb)};
}

void write_outputs(const ScenarioRun& run, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  write_file(dir / "report.json", render(run.report, ReportFormat::Json));
  write_file(dir / "report.txt", render(run.report, ReportFormat::Text));
  write_file(dir / "table1.csv", render_outflows_csv(run.report));
  write_file(dir / "table2.csv", render(run.report, ReportFormat::Csv));
  std::ostringstream dev;
  write_deviation_csv(dev, run.baseline_deviation, run.hybrid_deviation, run.hybrid_scale);
  write_file(dir / "deviation.csv", dev.str());
  std::ostringstream rb, rh;
  write_rail_csv(rb, run.rail_baseline);
  write_rail_csv(rh, run.rail_hybrid);
  write_file(dir / "rail_baseline.csv", rb.str());
  write_file(dir / "rail_hybrid.csv", rh.str());
  write_file(dir / "rail_summary.json",
             "{\n\"baseline\": " + rail_summary_json(run.rail_baseline.summary) +
                 ",\n\"hybrid\": " + rail_summary_json(run.rail_hybrid.summary) + "\n}\n");
}

}  // namespace pegstress
