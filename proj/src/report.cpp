#include "pegstress/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json_io.hpp"
#include "pegstress/errors.hpp"

namespace pegstress {

using nlohmann::ordered_json;

namespace {

const char* delta_kind_name(DeltaKind k) {
  switch (k) {
    case DeltaKind::Numeric: return "numeric";
    case DeltaKind::Stabilized: return "stabilized";
    case DeltaKind::Destabilized: return "destabilized";
    case DeltaKind::Undefined: return "undefined";
  }
  return "numeric";
}

DeltaKind delta_kind_from(const std::string& s) {
  if (s == "numeric") return DeltaKind::Numeric;
  if (s == "stabilized") return DeltaKind::Stabilized;
  if (s == "destabilized") return DeltaKind::Destabilized;
  if (s == "undefined") return DeltaKind::Undefined;
  throw ValidationError("report: unknown delta_kind '" + s + "'");
}

ordered_json opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string raw(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string raw(const std::optional<double>& v) { return v ? raw(*v) : "inf"; }

// Column width in code points, so "∞" and "Δ" pad like ASCII.
std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

std::string pad(const std::string& s, std::size_t width) {
  const auto w = display_width(s);
  return w >= width ? s + "  " : s + std::string(width - w + 2, ' ');
}

void table(std::ostringstream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& r : rows) {
    widths.resize(std::max(widths.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) widths[i] = std::max(widths[i], display_width(r[i]));
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) line += i + 1 < r.size() ? pad(r[i], widths[i]) : r[i];
    out << line << '\n';
  }
}

std::string display(const std::optional<double>& v, int decimals) {
  return v ? format_fixed(*v, decimals) : "∞";
}

std::string display_delta(const MetricRow& r) {
  switch (r.delta_kind) {
    case DeltaKind::Numeric: return r.delta ? format_fixed(*r.delta, r.decimals) : "-";
    case DeltaKind::Stabilized: return "Stabilized";
    case DeltaKind::Destabilized: return "Destabilized";
    case DeltaKind::Undefined: return "-";
  }
  return "-";
}

std::string pct_label(double p) { return "P" + format_fixed(100.0 * p, 1); }

std::string render_json(const StressReport& r) {
  ordered_json j;
  j["schema_version"] = r.schema_version;
  j["tail"] = {{"p", r.tail_p}, {"p_secondary", r.tail_p_secondary},
               {"worst_hour_share", r.worst_hour_share}};
  j["outflows"] = ordered_json::array();
  for (const auto& o : r.outflows)
    j["outflows"].push_back({{"window", o.window},
                             {"p_secondary_24h_usd", o.p_secondary_24h_usd},
                             {"p_primary_24h_usd", o.p_primary_24h_usd},
                             {"q_1h_usd", o.q_1h_usd}});
  j["metrics"] = ordered_json::array();
  for (const auto& m : r.metrics)
    j["metrics"].push_back({{"metric", m.metric},
                            {"decimals", m.decimals},
                            {"baseline", opt(m.baseline)},
                            {"hybrid", opt(m.hybrid)},
                            {"delta_kind", delta_kind_name(m.delta_kind)},
                            {"delta", opt(m.delta)},
                            {"delta_pct", opt(m.delta_pct)}});
  j["alpha_sensitivity"] = ordered_json::array();
  for (const auto& a : r.alpha_sensitivity)
    j["alpha_sensitivity"].push_back({{"pass_through", a.pass_through},
                                      {"eps_bps", a.summary.eps_bps},
                                      {"gamma_bps", a.summary.gamma_bps},
                                      {"d_max_bps", a.summary.d_max_bps},
                                      {"minutes_ge_eps", a.summary.minutes_ge_eps},
                                      {"longest_run_ge_gamma", a.summary.longest_run_ge_gamma}});
  const auto& q = r.queue;
  j["queue"] = {{"arrival_rate_per_min", q.arrival_rate_per_min},
                {"service_rate_per_min", q.service_rate_per_min},
                {"baseline_servers", q.baseline_servers},
                {"hybrid_servers", q.hybrid_servers},
                {"baseline_utilization", q.baseline_utilization},
                {"hybrid_utilization", q.hybrid_utilization},
                {"baseline_p_wait", q.baseline_p_wait},
                {"hybrid_p_wait", q.hybrid_p_wait},
                {"sla_min_servers", q.sla_min_servers},
                {"sla_seconds", q.sla_seconds}};
  j["rail"] = {{"baseline", detail::to_json(r.rail_baseline)},
               {"hybrid", detail::to_json(r.rail_hybrid)}};
  j["notes"] = r.notes;
  j["provenance"] = ordered_json::array();
  for (const auto& [k, v] : r.provenance) j["provenance"].push_back({{"key", k}, {"value", v}});
  return j.dump(2) + "\n";
}

std::string render_csv(const StressReport& r) {
  std::ostringstream out;
  out << "metric,baseline,hybrid,delta,delta_pct,delta_kind\n";
  for (const auto& m : r.metrics)
    out << m.metric << ',' << raw(m.baseline) << ',' << raw(m.hybrid) << ','
        << (m.delta ? raw(*m.delta) : "") << ',' << (m.delta_pct ? raw(*m.delta_pct) : "") << ','
        << delta_kind_name(m.delta_kind) << '\n';
  return out.str();
}

std::string render_text(const StressReport& r) {
  std::ostringstream out;
  out << "Outflows\n";
  std::vector<std::vector<std::string>> t1{
      {"Window", pct_label(r.tail_p_secondary) + " 24h (USD)", pct_label(r.tail_p) + " 24h (USD)",
       "1h proxy at " + format_percent(100.0 * r.worst_hour_share) + " (USD)"}};
  for (const auto& o : r.outflows)
    t1.push_back({o.window, format_usd(o.p_secondary_24h_usd), format_usd(o.p_primary_24h_usd),
                  format_usd(o.q_1h_usd)});
  table(out, t1);

  out << "\nBaseline model vs. hybrid model metrics\n";
  std::vector<std::vector<std::string>> t2{{"Metric", "Baseline", "Hybrid", "Δ Hybrid", "Δ%"}};
  for (const auto& m : r.metrics)
    t2.push_back({m.metric, display(m.baseline, m.decimals), display(m.hybrid, m.decimals),
                  display_delta(m), m.delta_pct ? format_percent(*m.delta_pct) : "-"});
  table(out, t2);

  const auto& q = r.queue;
  out << "\nRedemption desk (M/M/c, worst hour)\n";
  table(out, {{"arrival rate (req/min)", format_fixed(q.arrival_rate_per_min, 3)},
              {"service rate (req/min/server)", format_fixed(q.service_rate_per_min, 3)},
              {"baseline servers / utilization",
               std::to_string(q.baseline_servers) + " / " + format_fixed(q.baseline_utilization, 4)},
              {"hybrid servers / utilization",
               std::to_string(q.hybrid_servers) + " / " + format_fixed(q.hybrid_utilization, 4)},
              {"hybrid P(wait)", format_fixed(q.hybrid_p_wait, 4)},
              {"min servers for " + format_fixed(q.sla_seconds, 1) + " s SLA",
               std::to_string(q.sla_min_servers)}});

  out << "\nPass-through sensitivity\n";
  std::vector<std::vector<std::string>> ta{{"alpha", "Max dev (bps)", "Minutes >= eps", "Longest run >= gamma"}};
  for (const auto& a : r.alpha_sensitivity)
    ta.push_back({format_fixed(a.pass_through, 4), format_fixed(a.summary.d_max_bps, 1),
                  std::to_string(a.summary.minutes_ge_eps),
                  std::to_string(a.summary.longest_run_ge_gamma)});
  table(out, ta);

  out << "\nRail simulation\n";
  auto rail_row = [](const char* name, const RailSummary& s) {
    return std::vector<std::string>{name,
                                    format_usd(s.max_queue_usd),
                                    std::to_string(s.total_queued_minutes),
                                    std::to_string(s.shortfall_event_count),
                                    std::to_string(s.max_customer_wait_minutes),
                                    format_usd(s.peak_line_drawn_usd)};
  };
  table(out, {{"Scenario", "Max queue (USD)", "Queued minutes", "Shortfall events",
               "Max wait (min)", "Peak line (USD)"},
              rail_row("Baseline", r.rail_baseline),
              rail_row("Hybrid", r.rail_hybrid)});

  if (!r.notes.empty()) {
    out << "\nNotes\n";
    for (const auto& n : r.notes) out << "- " << n << '\n';
  }
  out << "\nProvenance\n";
  for (const auto& [k, v] : r.provenance) out << k << " = " << v << '\n';
  return out.str();
}

}  // namespace

MetricRow make_metric_row(std::string metric, int decimals, std::optional<double> baseline,
                          std::optional<double> hybrid) {
  MetricRow r;
  r.metric = std::move(metric);
  r.decimals = decimals;
  r.baseline = baseline;
  r.hybrid = hybrid;
  if (baseline && hybrid) {
    r.delta_kind = DeltaKind::Numeric;
    // A zero baseline has no meaningful change to report.
    if (*baseline != 0.0) {
      r.delta = *hybrid - *baseline;
      r.delta_pct = 100.0 * *r.delta / *baseline;
    }
  } else if (!baseline && hybrid) {
    r.delta_kind = DeltaKind::Stabilized;
  } else if (baseline && !hybrid) {
    r.delta_kind = DeltaKind::Destabilized;
  } else {
    r.delta_kind = DeltaKind::Undefined;
  }
  return r;
}

const MetricRow& StressReport::row(const std::string& metric) const {
  for (const auto& m : metrics)
    if (m.metric == metric) return m;
  throw ValidationError("report has no metric '" + metric + "'");
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string format_usd(double v) {
  const long long n = std::llround(v);
  std::string digits = std::to_string(n < 0 ? -n : n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return n < 0 ? "-" + out : out;
}

std::string format_percent(double pct) {
  const std::string s = format_fixed(pct, 1);
  return s == "0" ? s : s + "%";
}

std::string render(const StressReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Json: return render_json(report);
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Text: return render_text(report);
  }
  return {};
}

std::string render_outflows_csv(const StressReport& r) {
  std::ostringstream out;
  out << "window,p_secondary_24h_usd,p_primary_24h_usd,q_1h_usd\n";
  for (const auto& o : r.outflows)
    out << o.window << ',' << raw(o.p_secondary_24h_usd) << ',' << raw(o.p_primary_24h_usd) << ','
        << raw(o.q_1h_usd) << '\n';
  return out.str();
}

StressReport report_from_json(const std::string& text) {
  StressReport r;
  try {
    const auto j = nlohmann::json::parse(text);
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw ValidationError("report: unsupported schema_version " + std::to_string(r.schema_version));
    r.tail_p = j.at("tail").at("p").get<double>();
    r.tail_p_secondary = j.at("tail").at("p_secondary").get<double>();
    r.worst_hour_share = j.at("tail").at("worst_hour_share").get<double>();
    for (const auto& o : j.at("outflows"))
      r.outflows.push_back({o.at("window").get<std::string>(),
                            o.at("p_secondary_24h_usd").get<double>(),
                            o.at("p_primary_24h_usd").get<double>(), o.at("q_1h_usd").get<double>()});
    for (const auto& m : j.at("metrics")) {
      MetricRow row;
      row.metric = m.at("metric").get<std::string>();
      row.decimals = m.at("decimals").get<int>();
      row.baseline = opt_from(m.at("baseline"));
      row.hybrid = opt_from(m.at("hybrid"));
      row.delta_kind = delta_kind_from(m.at("delta_kind").get<std::string>());
      row.delta = opt_from(m.at("delta"));
      row.delta_pct = opt_from(m.at("delta_pct"));
      r.metrics.push_back(std::move(row));
    }
    for (const auto& a : j.at("alpha_sensitivity")) {
      AlphaSensitivityRow row;
      row.pass_through = a.at("pass_through").get<double>();
      row.summary.eps_bps = a.at("eps_bps").get<double>();
      row.summary.gamma_bps = a.at("gamma_bps").get<double>();
      row.summary.d_max_bps = a.at("d_max_bps").get<double>();
      row.summary.minutes_ge_eps = a.at("minutes_ge_eps").get<std::int64_t>();
      row.summary.longest_run_ge_gamma = a.at("longest_run_ge_gamma").get<std::int64_t>();
      r.alpha_sensitivity.push_back(row);
    }
    const auto& q = j.at("queue");
    r.queue.arrival_rate_per_min = q.at("arrival_rate_per_min").get<double>();
    r.queue.service_rate_per_min = q.at("service_rate_per_min").get<double>();
    r.queue.baseline_servers = q.at("baseline_servers").get<int>();
    r.queue.hybrid_servers = q.at("hybrid_servers").get<int>();
    r.queue.baseline_utilization = q.at("baseline_utilization").get<double>();
    r.queue.hybrid_utilization = q.at("hybrid_utilization").get<double>();
    r.queue.baseline_p_wait = q.at("baseline_p_wait").get<double>();
    r.queue.hybrid_p_wait = q.at("hybrid_p_wait").get<double>();
    r.queue.sla_min_servers = q.at("sla_min_servers").get<int>();
    r.queue.sla_seconds = q.at("sla_seconds").get<double>();
    r.rail_baseline = detail::rail_summary_from_json(j.at("rail").at("baseline"));
    r.rail_hybrid = detail::rail_summary_from_json(j.at("rail").at("hybrid"));
    r.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& p : j.at("provenance"))
      r.provenance.emplace_back(p.at("key").get<std::string>(), p.at("value").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("report: malformed JSON: ") + e.what());
  }
  return r;
}

std::vector<std::string> audit(const StressReport& report) {
  std::vector<std::string> bad;
  for (const auto& m : report.metrics) {
    const auto expect = make_metric_row(m.metric, m.decimals, m.baseline, m.hybrid);
    if (expect.delta_kind != m.delta_kind || expect.delta != m.delta ||
        expect.delta_pct != m.delta_pct)
      bad.push_back(m.metric);
  }
  return bad;
}

}  // namespace pegstress
