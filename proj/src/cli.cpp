#include "pegstress/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "pegstress/errors.hpp"
#include "pegstress/funding.hpp"
#include "pegstress/ingest.hpp"
#include "pegstress/peg_metrics.hpp"
#include "pegstress/queueing.hpp"
#include "pegstress/rail_sim.hpp"
#include "pegstress/report.hpp"
#include "pegstress/run_dynamics.hpp"
#include "pegstress/scenario.hpp"

namespace pegstress {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string ratio(double v) { return std::isfinite(v) ? fmt("%.5f", v) : "inf"; }

void open_out(std::ofstream& f, const std::filesystem::path& p) {
  if (!p.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  f.open(p, std::ios::binary);
  if (!f) throw IoError("cannot write '" + p.string() + "'");
}

const std::map<std::string, GapAction> kGap{{"error", GapAction::Error},
                                            {"drop-window", GapAction::DropWindow}};
const std::map<std::string, DuplicatePolicy> kDup{{"error", DuplicatePolicy::Error},
                                                  {"keep-first", DuplicatePolicy::KeepFirst}};

void add_ingest_flags(CLI::App* sub, IngestPolicy& pol) {
  sub->add_option("--max-gap", pol.max_gap_fill_minutes, "Longest gap (minutes) filled forward");
  sub->add_option("--on-gap", pol.on_longer_gap, "Longer gaps: error | drop-window")
      ->transform(CLI::CheckedTransformer(kGap));
  sub->add_option("--duplicates", pol.duplicate_policy, "Duplicate minutes: error | keep-first")
      ->transform(CLI::CheckedTransformer(kDup));
}

void print_summary(std::ostream& out, const char* label, const PegSummary& s) {
  out << label << ": d_max_bps " << fmt("%.1f", s.d_max_bps) << ", minutes >= "
      << format_fixed(s.eps_bps, 2) << " bps " << s.minutes_ge_eps << ", longest run >= "
      << format_fixed(s.gamma_bps, 2) << " bps " << s.longest_run_ge_gamma << "\n";
}

void print_rail(std::ostream& out, const char* label, const RailSummary& s) {
  out << label << ":\n"
      << "  max_queue_usd " << format_usd(s.max_queue_usd) << "\n"
      << "  total_queued_minutes " << s.total_queued_minutes << "\n"
      << "  shortfall_events " << s.shortfall_event_count << "\n"
      << "  max_customer_wait_minutes " << s.max_customer_wait_minutes << "\n"
      << "  total_demand_usd " << format_usd(s.total_demand_usd) << "\n"
      << "  total_settled_usd " << format_usd(s.total_settled_usd) << "\n"
      << "  peak_line_drawn_usd " << format_usd(s.peak_line_drawn_usd) << "\n"
      << "  conservation_error_usd " << fmt("%.6f", s.conservation_error_usd) << "\n";
}

// Config plus the shared --synthetic / --seed overrides.
struct ConfigFlags {
  std::string config = "paper_defaults";
  bool synthetic = false;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* sub) {
    sub->add_option("--config", config, "Config file, or 'paper_defaults'");
    sub->add_flag("--synthetic", synthetic, "Use the synthetic generator as data source");
    sub->add_option("--seed", seed, "Synthetic generator seed");
  }

  ScenarioConfig load() const {
    ScenarioConfig c = load_config(config);
    if (synthetic) c.data.kind = DataSource::Kind::Synthetic;
    if (seed) c.data.synthetic.seed = *seed;
    return c;
  }
};

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Liquidity stress tests for fiat-backed stablecoins", "pegstress"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // run
  ConfigFlags run_cfg;
  std::optional<std::string> run_out_dir;
  std::string run_format = "text";
  auto* run = app.add_subcommand("run", "Full pipeline: funding, peg, queue, rail, report");
  run_cfg.attach(run);
  run->add_option("--out-dir", run_out_dir, "Output directory (overrides config)");
  run->add_option("--format", run_format, "Report printed to stdout")
      ->check(CLI::IsMember({"text", "json", "csv", "none"}));

  // ingest-check
  std::optional<std::string> ic_prices, ic_red;
  IngestPolicy ic_pol;
  auto* ingest = app.add_subcommand("ingest-check", "Validate price/volume and redemption CSVs");
  ingest->add_option("--prices", ic_prices, "Minute price CSV (timestamp,price,volume_usd)");
  ingest->add_option("--redemptions", ic_red, "Daily redemption CSV (date,redemption_usd)");
  add_ingest_flags(ingest, ic_pol);

  // funding
  ReservePortfolio fpf;
  std::optional<double> f_repo, f_q24;
  std::optional<std::string> f_red;
  double f_p = 0.99, f_phi = 0.75;
  auto* funding = app.add_subcommand("funding", "Coverage ratios ILCR and margin gap MMG");
  funding->add_option("--float", fpf.float_usd, "Float outstanding (USD)");
  funding->add_option("--cash", fpf.cash_share, "Cash share of float");
  funding->add_option("--tbill", fpf.tbill_share, "T-bill share of float");
  funding->add_option("--repo", f_repo, "Repo share of float (default: remainder)");
  funding->add_option("--cash-access", fpf.cash_access_factor, "Share of cash reachable within 1h");
  funding->add_option("--haircut", fpf.tbill_haircut_1h, "One-hour T-bill haircut");
  funding->add_option("--line-cap", fpf.tbill_line_cap_usd, "T-bill standing-line cap (USD)");
  funding->add_flag("--repo-24h", fpf.repo_convertible_24h, "Count repos as convertible within 24h");
  auto* q24_opt = funding->add_option("--q24", f_q24, "24h outflow quantile (USD)");
  funding->add_option("--redemptions", f_red, "Daily redemption CSV to estimate the quantile")
      ->excludes(q24_opt);
  funding->add_option("--p", f_p, "Tail probability");
  funding->add_option("--phi", f_phi, "Worst-hour share of the daily outflow");

  // peg
  std::optional<std::string> peg_prices, peg_csv;
  IngestPolicy peg_pol;
  HybridRailParams peg_params;
  double peg_eps = 5.0, peg_gamma = 10.0;
  ConfigFlags peg_cfg;
  auto* peg = app.add_subcommand("peg", "Peg deviation metrics, baseline and with a hybrid rail");
  peg->add_option("--prices", peg_prices, "Minute price CSV; otherwise the config data source");
  peg_cfg.attach(peg);
  add_ingest_flags(peg, peg_pol);
  peg->add_option("--rail-capacity", peg_params.rail_capacity_usd_per_min, "Rail capacity R (USD/min)");
  peg->add_option("--alpha", peg_params.pass_through, "Pass-through of rail capacity to depth");
  peg->add_option("--vol-floor", peg_params.vol_floor_usd_per_min, "Volume floor (USD/min)");
  peg->add_option("--min-scale", peg_params.min_scale, "Lower bound on the dilution factor");
  peg->add_option("--eps", peg_eps, "Threshold for minutes counted (bps)");
  peg->add_option("--gamma", peg_gamma, "Threshold for the longest run (bps)");
  peg->add_option("--deviation-csv", peg_csv, "Write per-minute deviations here");

  // queue
  QueueParams qp;
  std::optional<double> q_lambda, q_q1h;
  std::optional<std::int64_t> q_sim;
  std::uint64_t q_seed = 42;
  auto* queue = app.add_subcommand("queue", "Redemption desk as an M/M/c queue");
  auto* lam_opt = queue->add_option("--lambda", q_lambda, "Arrival rate (requests/min)");
  queue->add_option("--q1h", q_q1h, "One-hour outflow quantile (USD); sets lambda")->excludes(lam_opt);
  queue->add_option("--ticket", qp.ticket_size_usd, "Ticket size (USD)");
  queue->add_option("--mu", qp.service_rate, "Service rate per server (requests/min)");
  queue->add_option("--servers", qp.servers, "Number of servers");
  queue->add_option("--sla", qp.sla_seconds, "Expected-wait target (s)");
  queue->add_option("--simulate", q_sim, "Also run a discrete-event simulation with N arrivals");
  queue->add_option("--seed", q_seed, "Simulation seed");

  // rundyn
  RunModel rm;
  auto* rundyn = app.add_subcommand("rundyn", "Bank-run equilibrium classification");
  rundyn->add_option("--hold", rm.hold_to_maturity_value, "Asset value held to maturity");
  rundyn->add_option("--fire-sale", rm.fire_sale_value, "Fire-sale value theta");
  rundyn->add_option("--insured", rm.insured_fraction, "Insured deposit fraction");
  rundyn->add_option("--impatient", rm.impatient_fraction, "Impatient fraction f0");

  // rail
  ConfigFlags rail_cfg;
  std::optional<std::string> rail_out;
  auto* rail = app.add_subcommand("rail", "Minute-level settlement simulation, baseline and hybrid");
  rail_cfg.attach(rail);
  rail->add_option("--out-dir", rail_out, "Write rail_baseline.csv and rail_hybrid.csv here");

  // synth
  ConfigFlags synth_cfg;
  std::string synth_out = "pegstress-synth";
  auto* synth = app.add_subcommand("synth", "Write a synthetic de-peg scenario as CSVs");
  synth_cfg.attach(synth);
  synth->add_option("--out-dir", synth_out, "Directory for prices.csv and redemptions.csv");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (const auto* s : app.get_subcommands()) target = s;
    out << target->help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    for (const auto* s : app.get_subcommands()) target = s;
    err << "error: " << e.what() << "\n" << target->help();
    return 1;
  }

  try {
    if (run->parsed()) {
      ScenarioConfig c = run_cfg.load();
      if (run_out_dir) c.out_dir = *run_out_dir;
      ScenarioRun r = run_scenario(c);
      write_outputs(r, c.out_dir);
      if (run_format == "text") out << render(r.report, ReportFormat::Text);
      else if (run_format == "json") out << render(r.report, ReportFormat::Json);
      else if (run_format == "csv") out << render(r.report, ReportFormat::Csv);
      out << "wrote " << c.out_dir.string() << "\n";
    } else if (ingest->parsed()) {
      if (!ic_prices && !ic_red) throw ValidationError("ingest-check needs --prices and/or --redemptions");
      ic_pol.validate();
      if (ic_prices) {
        auto d = parse_price_csv(*ic_prices, ic_pol);
        const auto w = d.prices.window();
        out << "prices: " << *ic_prices << "\n"
            << "  rows_read " << d.report.rows_read << "\n"
            << "  minutes " << d.prices.size() << " [" << format_minute(w.first) << ", "
            << format_minute(w.last) << ")\n"
            << "  minutes_filled " << d.report.minutes_filled << "\n"
            << "  duplicates_dropped " << d.report.duplicates_dropped << "\n"
            << "  long_gaps " << d.report.long_gaps << "\n"
            << "  minutes_dropped " << d.report.minutes_dropped << "\n"
            << "  d_max_bps " << fmt("%.1f", compute_deviation(d.prices).max()) << "\n";
      }
      if (ic_red) {
        auto r = parse_redemption_csv(*ic_red, ic_pol.duplicate_policy);
        out << "redemptions: " << *ic_red << "\n  days " << r.size() << "\n";
        if (r.size() > 0)
          out << "  range " << format_date(r.dates().front()) << " .. " << format_date(r.dates().back())
              << "\n";
      }
    } else if (funding->parsed()) {
      fpf.repo_share = f_repo ? *f_repo : std::max(0.0, 1.0 - fpf.cash_share - fpf.tbill_share);
      fpf.validate();
      OutflowTail tail;
      if (f_q24) tail = outflow_tail_from_quantile(*f_q24, f_p, f_phi);
      else if (f_red) tail = outflow_tail(parse_redemption_csv(*f_red), f_p, f_phi);
      else throw ValidationError("funding needs --q24 or --redemptions");
      out << "Q_24h " << format_usd(tail.q_24h_usd) << "\n"
          << "Q_1h " << format_usd(tail.q_1h_usd) << "\n";
      for (Horizon h : {Horizon::OneHour, Horizon::OneDay}) {
        const auto c = coverage(fpf, tail, h);
        const std::string sfx = h == Horizon::OneHour ? "_1h" : "_24h";
        out << "IMR" << sfx << " " << format_usd(c.imr_usd) << "\n"
            << "ILCR" << sfx << " " << ratio(c.ilcr) << "\n"
            << "MMG" << sfx << " " << format_usd(c.mmg_usd) << "\n";
      }
    } else if (peg->parsed()) {
      peg_params.validate();
      MinutePriceSeries prices{0, Eigen::ArrayXd::Ones(2)};
      MinuteVolumeSeries vols{0, Eigen::ArrayXd::Zero(2)};
      if (peg_prices) {
        peg_pol.validate();
        auto d = parse_price_csv(*peg_prices, peg_pol);
        prices = std::move(d.prices);
        vols = std::move(d.volumes);
      } else {
        ScenarioConfig c = peg_cfg.load();
        if (c.data.kind == DataSource::Kind::Synthetic) {
          auto s = generate_synthetic_scenario(c.data.synthetic);
          prices = std::move(s.prices);
          vols = std::move(s.volumes);
        } else {
          auto d = parse_price_csv(c.data.prices_csv, c.data.ingest);
          prices = std::move(d.prices);
          vols = std::move(d.volumes);
        }
      }
      auto al = align(prices, vols);
      DeviationSeries base = compute_deviation(al.prices);
      Eigen::ArrayXd scale = hybrid_scale(al.volumes, peg_params);
      DeviationSeries hyp{base.start(), base.values() * scale};
      print_summary(out, "baseline", summarize(base, peg_eps, peg_gamma));
      print_summary(out, "hybrid", summarize(hyp, peg_eps, peg_gamma));
      if (peg_csv) {
        std::ofstream f;
        open_out(f, *peg_csv);
        write_deviation_csv(f, base, hyp, scale);
      }
    } else if (queue->parsed()) {
      if (q_lambda) qp.arrival_rate = *q_lambda;
      else if (q_q1h) qp.arrival_rate = arrival_rate_from_tail(*q_q1h, qp.ticket_size_usd);
      else throw ValidationError("queue needs --lambda or --q1h");
      qp.validate();
      const auto r = erlang_c(qp);
      out << "lambda_per_min " << fmt("%.5f", qp.arrival_rate) << "\n"
          << "servers " << qp.servers << "\n"
          << "utilization " << fmt("%.4f", r.utilization) << "\n";
      if (r.stable) {
        out << "p_wait " << fmt("%.4f", r.p_wait) << "\n"
            << "wq_seconds " << fmt("%.3f", *r.wq_seconds) << "\n";
      } else {
        out << "p_wait 1\nwq_seconds inf (unstable)\n";
      }
      out << "min_servers_for_sla " << min_servers(qp.arrival_rate, qp.service_rate, qp.sla_seconds)
          << "\n";
      if (q_sim) {
        const auto s = simulate_mmc(qp, *q_sim, q_seed);
        out << "sim_arrivals " << s.arrivals << "\n"
            << "sim_p_wait " << fmt("%.4f", s.p_wait) << "\n"
            << "sim_wq_seconds " << fmt("%.3f", s.wq_seconds) << "\n";
      }
    } else if (rundyn->parsed()) {
      rm.validate();
      const auto eq = classify_equilibria(rm);
      out << "wait_payoff_f0 " << fmt("%.4f", wait_payoff(rm, rm.impatient_fraction)) << "\n"
          << "wait_payoff_all_run " << fmt("%.4f", wait_payoff_all_run(rm)) << "\n"
          << "run_payoff " << fmt("%.4f", run_payoff(rm)) << "\n"
          << "no_run_equilibrium " << (eq.no_run_exists ? "yes" : "no") << "\n"
          << "run_equilibrium " << (eq.run_exists ? "yes" : "no") << "\n"
          << "classification "
          << (eq.multiple() ? "multiple" : eq.run_exists ? "run-only" : eq.no_run_exists ? "no-run-only" : "none")
          << "\n";
    } else if (rail->parsed()) {
      ScenarioConfig c = rail_cfg.load();
      DailyRedemptionSeries red;
      if (c.data.kind == DataSource::Kind::Synthetic) red = generate_synthetic_scenario(c.data.synthetic).redemptions;
      else red = parse_redemption_csv(c.data.redemptions_csv, c.data.ingest.duplicate_policy);
      const auto trace = minute_redemption_trace(red, c.tail.worst_hour_share, c.tail.worst_hour_utc);
      const auto base = run_rail(c.rail_baseline, trace);
      const auto hyb = run_rail(c.rail_hybrid, trace);
      print_rail(out, "baseline", base.summary);
      print_rail(out, "hybrid", hyb.summary);
      if (rail_out) {
        std::ofstream fb, fh;
        open_out(fb, std::filesystem::path(*rail_out) / "rail_baseline.csv");
        open_out(fh, std::filesystem::path(*rail_out) / "rail_hybrid.csv");
        write_rail_csv(fb, base);
        write_rail_csv(fh, hyb);
      }
    } else if (synth->parsed()) {
      ScenarioConfig c = synth_cfg.load();
      c.data.synthetic.validate();
      const auto s = generate_synthetic_scenario(c.data.synthetic);
      std::ofstream fp, fr;
      open_out(fp, std::filesystem::path(synth_out) / "prices.csv");
      open_out(fr, std::filesystem::path(synth_out) / "redemptions.csv");
      write_price_csv(fp, s.prices, s.volumes);
      write_redemption_csv(fr, s.redemptions);
      out << "wrote " << synth_out << " (" << s.prices.size() << " minutes, " << s.redemptions.size()
          << " days)\n";
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace pegstress
