#include "pegstress/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <string>
#include <string_view>

#include "pegstress/errors.hpp"

namespace pegstress {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    out.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double parse_number(std::string_view s, std::size_t line, const char* column) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(line, std::string("malformed ") + column + " '" + std::string(s) + "'");
  return v;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s.front() == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

int two_digits(std::string_view s, std::size_t pos, std::size_t line) {
  if (pos + 2 > s.size() || s[pos] < '0' || s[pos] > '9' || s[pos + 1] < '0' || s[pos + 1] > '9')
    throw ParseError(line, "malformed timestamp '" + std::string(s) + "'");
  return (s[pos] - '0') * 10 + (s[pos + 1] - '0');
}

// Epoch seconds or ISO-8601 in UTC; returns the containing minute.
EpochMinute parse_timestamp(std::string_view s, std::size_t line) {
  if (all_digits(s)) {
    std::int64_t secs = 0;
    std::from_chars(s.data(), s.data() + s.size(), secs);
    return secs >= 0 ? secs / 60 : -((-secs + 59) / 60);
  }
  if (s.size() < 16 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':')
    throw ParseError(line, "malformed timestamp '" + std::string(s) + "'");
  EpochDay day = 0;
  try {
    day = parse_date(s.substr(0, 10));
  } catch (const ValidationError& e) {
    throw ParseError(line, e.what());
  }
  const int hh = two_digits(s, 11, line);
  const int mm = two_digits(s, 14, line);
  if (hh > 23 || mm > 59) throw ParseError(line, "time out of range '" + std::string(s) + "'");
  std::string_view rest = s.substr(16);
  if (!rest.empty() && rest.front() == ':') {
    if (two_digits(rest, 1, line) > 60)
      throw ParseError(line, "seconds out of range '" + std::string(s) + "'");
    rest.remove_prefix(3);
    if (!rest.empty() && rest.front() == '.') {
      rest.remove_prefix(1);
      while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') rest.remove_prefix(1);
    }
  }
  if (!(rest.empty() || rest == "Z" || rest == "+00:00" || rest == "+0000"))
    throw ParseError(line, "timestamp is not UTC '" + std::string(s) + "'");
  return day * kMinutesPerDay + hh * 60 + mm;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return in;
}

void expect_header(std::istream& in, std::string_view expected) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  std::string_view h = trim(line);
  if (h.size() >= 3 && static_cast<unsigned char>(h[0]) == 0xEF) h.remove_prefix(3);  // BOM
  if (h != expected)
    throw ParseError(1, "expected header '" + std::string(expected) + "', got '" +
                            std::string(h) + "'");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct PriceRow {
  EpochMinute minute;
  double price;
  double volume;
};

}  // namespace

void IngestPolicy::validate() const {
  if (max_gap_fill_minutes < 0) throw ValidationError("max_gap_fill_minutes must be >= 0");
}

PriceCsvData parse_price_csv(const std::filesystem::path& path, const IngestPolicy& policy) {
  auto in = open_input(path);
  return parse_price_csv(in, policy);
}

PriceCsvData parse_price_csv(std::istream& in, const IngestPolicy& policy) {
  policy.validate();
  expect_header(in, "timestamp,price,volume_usd");

  ParseReport report;
  std::vector<PriceRow> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_fields(line);
    if (f.size() != 3) throw ParseError(lineno, "expected 3 fields, got " + std::to_string(f.size()));
    PriceRow r{parse_timestamp(f[0], lineno), parse_number(f[1], lineno, "price"),
               parse_number(f[2], lineno, "volume_usd")};
    if (!std::isfinite(r.price) || r.price <= 0.0)
      throw ParseError(lineno, "price must be positive and finite, got '" + std::string(f[1]) + "'");
    if (!std::isfinite(r.volume) || r.volume < 0.0)
      throw ParseError(lineno, "volume_usd must be nonnegative, got '" + std::string(f[2]) + "'");
    rows.push_back(r);
    ++report.rows_read;
  }
  if (rows.empty()) throw ValidationError("price file has no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const PriceRow& a, const PriceRow& b) { return a.minute < b.minute; });
  std::vector<PriceRow> unique;
  unique.reserve(rows.size());
  for (const auto& r : rows) {
    if (!unique.empty() && unique.back().minute == r.minute) {
      if (policy.duplicate_policy == DuplicatePolicy::Error)
        throw ValidationError("duplicate timestamp " + format_minute(r.minute));
      ++report.duplicates_dropped;
      continue;
    }
    unique.push_back(r);
  }

  // Split into gap-free segments; short gaps are filled in place.
  struct Segment {
    EpochMinute start;
    std::vector<double> price, volume;
  };
  std::vector<Segment> segments;
  segments.push_back({unique.front().minute, {unique.front().price}, {unique.front().volume}});
  for (std::size_t i = 1; i < unique.size(); ++i) {
    const auto missing = unique[i].minute - unique[i - 1].minute - 1;
    if (missing > policy.max_gap_fill_minutes) {
      ++report.long_gaps;
      if (policy.on_longer_gap == GapAction::Error)
        throw GapError("gap of " + std::to_string(missing) + " minutes after " +
                       format_minute(unique[i - 1].minute) + " exceeds fill limit of " +
                       std::to_string(policy.max_gap_fill_minutes));
      segments.push_back({unique[i].minute, {}, {}});
    } else {
      auto& seg = segments.back();
      for (std::int64_t k = 0; k < missing; ++k) {
        seg.price.push_back(seg.price.back());
        seg.volume.push_back(0.0);
      }
      report.minutes_filled += static_cast<std::size_t>(missing);
    }
    segments.back().price.push_back(unique[i].price);
    segments.back().volume.push_back(unique[i].volume);
  }

  auto best = std::max_element(segments.begin(), segments.end(),
                               [](const Segment& a, const Segment& b) {
                                 return a.price.size() < b.price.size();
                               });
  for (auto it = segments.begin(); it != segments.end(); ++it)
    if (it != best) report.minutes_dropped += it->price.size();

  const auto n = static_cast<Eigen::Index>(best->price.size());
  if (n < 2) throw ValidationError("price file yields fewer than 2 minutes on the grid");
  return {MinutePriceSeries(best->start, Eigen::Map<const Eigen::ArrayXd>(best->price.data(), n)),
          MinuteVolumeSeries(best->start, Eigen::Map<const Eigen::ArrayXd>(best->volume.data(), n)),
          report};
}

void write_price_csv(std::ostream& out, const MinutePriceSeries& prices,
                     const MinuteVolumeSeries& volumes) {
  if (prices.window() != volumes.window())
    throw AlignmentError("price and volume series are on different grids");
  out << "timestamp,price,volume_usd\n";
  for (Eigen::Index i = 0; i < prices.size(); ++i)
    out << format_minute(prices.start() + i) << ',' << fmt17(prices[i]) << ','
        << fmt17(volumes[i]) << '\n';
}

DailyRedemptionSeries parse_redemption_csv(const std::filesystem::path& path,
                                           DuplicatePolicy duplicates) {
  auto in = open_input(path);
  return parse_redemption_csv(in, duplicates);
}

DailyRedemptionSeries parse_redemption_csv(std::istream& in, DuplicatePolicy duplicates) {
  expect_header(in, "date,redemption_usd");
  std::vector<std::pair<EpochDay, double>> rows;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_fields(line);
    if (f.size() != 2) throw ParseError(lineno, "expected 2 fields, got " + std::to_string(f.size()));
    EpochDay day = 0;
    try {
      day = parse_date(f[0]);
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
    const double usd = parse_number(f[1], lineno, "redemption_usd");
    if (!std::isfinite(usd) || usd < 0.0)
      throw ParseError(lineno, "redemption_usd must be nonnegative, got '" + std::string(f[1]) + "'");
    rows.emplace_back(day, usd);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<EpochDay> dates;
  std::vector<double> usd;
  for (const auto& [d, v] : rows) {
    if (!dates.empty() && dates.back() == d) {
      if (duplicates == DuplicatePolicy::Error)
        throw ValidationError("duplicate date " + format_date(d));
      continue;
    }
    dates.push_back(d);
    usd.push_back(v);
  }
  return {std::move(dates), std::move(usd)};
}

void write_redemption_csv(std::ostream& out, const DailyRedemptionSeries& series) {
  out << "date,redemption_usd\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    out << format_date(series.dates()[i]) << ',' << fmt17(series.redemptions()[i]) << '\n';
}

double MinuteDemandTrace::total_usd() const {
  MicroUsd sum = 0;
  for (auto v : usd) sum += v;
  return to_usd(sum);
}

MinuteDemandTrace minute_redemption_trace(const DailyRedemptionSeries& daily,
                                          double worst_hour_share, int worst_hour_utc) {
  if (daily.empty()) throw ValidationError("redemption series is empty");
  if (!(worst_hour_share >= 0.0 && worst_hour_share <= 1.0))
    throw ValidationError("worst_hour_share must be in [0,1]");
  if (worst_hour_utc < 0 || worst_hour_utc > 23)
    throw ValidationError("worst_hour_utc must be in [0,23]");

  const EpochDay first = daily.dates().front();
  const EpochDay last = daily.dates().back();
  MinuteDemandTrace trace{first * kMinutesPerDay,
                          std::vector<MicroUsd>(static_cast<std::size_t>((last - first + 1) * kMinutesPerDay), 0)};

  // Spread `total` evenly over `count` slots, remainder to the earliest ones.
  auto spread = [](MicroUsd total, std::int64_t count, auto&& sink) {
    const MicroUsd each = total / count;
    const MicroUsd extra = total % count;
    for (std::int64_t k = 0; k < count; ++k) sink(k, each + (k < extra ? 1 : 0));
  };

  for (std::size_t d = 0; d < daily.size(); ++d) {
    const MicroUsd total = to_micro(daily.redemptions()[d]);
    const MicroUsd peak = std::llround(static_cast<double>(total) * worst_hour_share);
    const auto day_offset = static_cast<std::size_t>((daily.dates()[d] - first) * kMinutesPerDay);
    const std::int64_t peak_begin = worst_hour_utc * 60;
    spread(peak, 60, [&](std::int64_t k, MicroUsd v) {
      trace.usd[day_offset + static_cast<std::size_t>(peak_begin + k)] = v;
    });
    spread(total - peak, kMinutesPerDay - 60, [&](std::int64_t k, MicroUsd v) {
      const std::int64_t m = k < peak_begin ? k : k + 60;
      trace.usd[day_offset + static_cast<std::size_t>(m)] = v;
    });
  }
  return trace;
}

void SyntheticScenarioSpec::validate() const {
  auto fail = [](const std::string& m) { throw SpecError("synthetic spec: " + m); };
  if (window_minutes < 2) fail("window_minutes must be >= 2");
  if (!(peak_deviation_bps > plateau_bps && plateau_bps >= 0.0))
    fail("need peak_deviation_bps > plateau_bps >= 0");
  if (peak_deviation_bps >= 10000.0) fail("peak_deviation_bps must be below 10000");
  if (shock_onset_minute < 0 || ramp_minutes < 0 || plateau_minutes < 0)
    fail("onset, ramp and plateau durations must be >= 0");
  if (!(recovery_halflife_minutes >= 0.0) || !(noise_bps >= 0.0))
    fail("half-life and noise must be >= 0");
  const double recovery_end = static_cast<double>(shock_onset_minute) + ramp_minutes +
                              plateau_minutes + std::ceil(recovery_halflife_minutes);
  if (recovery_end >= window_minutes)
    fail("onset + ramp + plateau + one recovery half-life exceeds the window");
  if (daily_redemption_targets.empty()) fail("daily_redemption_targets is empty");
  for (double v : daily_redemption_targets)
    if (!std::isfinite(v) || v < 0.0) fail("daily redemption targets must be >= 0");
  if (!(base_volume_usd_per_min > 0.0) || !(stress_volume_multiplier > 0.0) ||
      !(volume_dispersion >= 0.0))
    fail("volume parameters must be positive");
}

SyntheticScenario generate_synthetic_scenario(const SyntheticScenarioSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto clipped_normal = [&] { return std::clamp(gauss(rng), -3.0, 3.0); };

  const int n = spec.window_minutes;
  const int peak_at = spec.shock_onset_minute + spec.ramp_minutes;
  const int plateau_end = peak_at + spec.plateau_minutes;
  const double h = spec.recovery_halflife_minutes;
  auto decay = [h](double dt) { return dt <= 0.0 ? 1.0 : h > 0.0 ? std::exp2(-dt / h) : 0.0; };
  const double level_at_plateau_end =
      spec.plateau_bps + (spec.peak_deviation_bps - spec.plateau_bps) * decay(spec.plateau_minutes);

  Eigen::ArrayXd dev = Eigen::ArrayXd::Zero(n);
  Eigen::ArrayXd vol(n);
  for (int t = 0; t < n; ++t) {
    double d = 0.0;
    if (t < spec.shock_onset_minute) {
      d = 0.0;
    } else if (t < peak_at) {
      d = spec.peak_deviation_bps * (t - spec.shock_onset_minute + 1) / (spec.ramp_minutes + 1);
    } else if (t <= plateau_end) {
      d = spec.plateau_bps + (spec.peak_deviation_bps - spec.plateau_bps) * decay(t - peak_at);
    } else {
      d = level_at_plateau_end * decay(t - plateau_end);
    }
    if (t >= spec.shock_onset_minute && t != peak_at && spec.noise_bps > 0.0)
      d = std::clamp(d + spec.noise_bps * clipped_normal(), 0.0, spec.peak_deviation_bps);
    dev[t] = d;

    const bool stressed = t >= spec.shock_onset_minute && t < plateau_end;
    const double sigma = spec.volume_dispersion;
    vol[t] = spec.base_volume_usd_per_min * (stressed ? spec.stress_volume_multiplier : 1.0) *
             std::exp(sigma * clipped_normal() - 0.5 * sigma * sigma);
  }

  const EpochDay first_day = day_of(spec.start_minute);
  std::vector<EpochDay> dates(spec.daily_redemption_targets.size());
  for (std::size_t i = 0; i < dates.size(); ++i) dates[i] = first_day + static_cast<EpochDay>(i);

  return {MinutePriceSeries(spec.start_minute, 1.0 - dev / 10000.0),
          MinuteVolumeSeries(spec.start_minute, std::move(vol)),
          DailyRedemptionSeries(std::move(dates), spec.daily_redemption_targets)};
}

}  // namespace pegstress
