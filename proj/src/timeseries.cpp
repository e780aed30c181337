#include "pegstress/timeseries.hpp"

#include <chrono>
#include <cstdio>

#include "pegstress/errors.hpp"

namespace pegstress {

namespace chr = std::chrono;

namespace {

int parse_digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw ValidationError("truncated date '" + std::string(s) + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') throw ValidationError("bad date '" + std::string(s) + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

void check_finite(const Eigen::ArrayXd& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + ": non-finite value");
}

}  // namespace

EpochDay parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-')
    throw ValidationError("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  chr::year_month_day ymd{chr::year{parse_digits(text, 0, 4)},
                          chr::month{static_cast<unsigned>(parse_digits(text, 5, 2))},
                          chr::day{static_cast<unsigned>(parse_digits(text, 8, 2))}};
  if (!ymd.ok()) throw ValidationError("invalid calendar date '" + std::string(text) + "'");
  return chr::sys_days{ymd}.time_since_epoch().count();
}

std::string format_date(EpochDay day) {
  chr::year_month_day ymd{chr::sys_days{chr::days{day}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_minute(EpochMinute minute) {
  const int mod = minute_of_day(minute);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", mod / 60, mod % 60);
  return format_date(day_of(minute)) + "T" + buf + ":00Z";
}

int weekday(EpochDay day) {
  return static_cast<int>(chr::weekday{chr::sys_days{chr::days{day}}}.iso_encoding()) - 1;
}

std::optional<MinuteWindow> intersect(const MinuteWindow& a, const MinuteWindow& b) {
  MinuteWindow w{std::max(a.first, b.first), std::min(a.last, b.last)};
  if (w.empty()) return std::nullopt;
  return w;
}

MinutePriceSeries::MinutePriceSeries(EpochMinute start, Eigen::ArrayXd prices)
    : MinuteSeriesBase(start, std::move(prices)) {
  if (values_.size() < 2) throw ValidationError("price series needs at least 2 minutes");
  check_finite(values_, "price series");
  for (Eigen::Index i = 0; i < values_.size(); ++i)
    if (!(values_[i] > 0.0))
      throw ValidationError("price series: non-positive price at " + format_minute(start_ + i));
}

MinutePriceSeries MinutePriceSeries::slice(const MinuteWindow& w) const {
  return {w.first, slice_values(w)};
}

MinuteVolumeSeries::MinuteVolumeSeries(EpochMinute start, Eigen::ArrayXd volumes)
    : MinuteSeriesBase(start, std::move(volumes)) {
  if (values_.size() < 1) throw ValidationError("volume series is empty");
  check_finite(values_, "volume series");
  if ((values_ < 0.0).any()) throw ValidationError("volume series: negative volume");
}

MinuteVolumeSeries MinuteVolumeSeries::slice(const MinuteWindow& w) const {
  return {w.first, slice_values(w)};
}

DeviationSeries::DeviationSeries(EpochMinute start, Eigen::ArrayXd bps)
    : MinuteSeriesBase(start, std::move(bps)) {
  if (values_.size() < 1) throw ValidationError("deviation series is empty");
  check_finite(values_, "deviation series");
  if ((values_ < 0.0).any()) throw ValidationError("deviation series: negative deviation");
}

DailyRedemptionSeries::DailyRedemptionSeries(std::vector<EpochDay> dates, std::vector<double> usd)
    : dates_(std::move(dates)), usd_(std::move(usd)) {
  if (dates_.size() != usd_.size())
    throw ValidationError("redemption series: dates and values differ in length");
  for (std::size_t i = 0; i < dates_.size(); ++i) {
    if (i > 0 && dates_[i] <= dates_[i - 1])
      throw ValidationError("redemption series: dates not strictly increasing at " +
                            format_date(dates_[i]));
    if (!std::isfinite(usd_[i]) || usd_[i] < 0.0)
      throw ValidationError("redemption series: invalid value on " + format_date(dates_[i]));
  }
}

DeviationSeries compute_deviation(const MinutePriceSeries& prices) {
  return {prices.start(), 10000.0 * (prices.values() - 1.0).abs()};
}

AlignedSeries align(const MinutePriceSeries& prices, const MinuteVolumeSeries& volumes) {
  auto common = intersect(prices.window(), volumes.window());
  if (!common) throw AlignmentError("price and volume series do not overlap");
  if (common->length() < 2)
    throw AlignmentError("price and volume series overlap by fewer than 2 minutes");
  return {prices.slice(*common), volumes.slice(*common)};
}

}  // namespace pegstress
