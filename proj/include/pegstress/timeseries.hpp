#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pegstress {

// Whole minutes / days since 1970-01-01T00:00Z.
using EpochMinute = std::int64_t;
using EpochDay = std::int64_t;

inline constexpr EpochMinute kMinutesPerDay = 1440;

EpochDay parse_date(std::string_view text);  // YYYY-MM-DD
std::string format_date(EpochDay day);
std::string format_minute(EpochMinute minute);  // YYYY-MM-DDTHH:MM:00Z
// 0 = Monday ... 6 = Sunday
int weekday(EpochDay day);

inline EpochDay day_of(EpochMinute m) {
  return m >= 0 ? m / kMinutesPerDay : -((-m + kMinutesPerDay - 1) / kMinutesPerDay);
}
inline int minute_of_day(EpochMinute m) {
  return static_cast<int>(m - day_of(m) * kMinutesPerDay);
}

// Half-open minute interval [first, last).
struct MinuteWindow {
  EpochMinute first = 0;
  EpochMinute last = 0;

  std::int64_t length() const { return last - first; }
  bool empty() const { return last <= first; }
  bool operator==(const MinuteWindow&) const = default;
};

std::optional<MinuteWindow> intersect(const MinuteWindow& a, const MinuteWindow& b);

namespace detail {

// Values on a uniform one-minute grid starting at `start`.
class MinuteSeriesBase {
 public:
  EpochMinute start() const { return start_; }
  EpochMinute end() const { return start_ + values_.size(); }
  MinuteWindow window() const { return {start_, end()}; }
  Eigen::Index size() const { return values_.size(); }
  const Eigen::ArrayXd& values() const { return values_; }
  double operator[](Eigen::Index i) const { return values_[i]; }

 protected:
  MinuteSeriesBase(EpochMinute start, Eigen::ArrayXd values)
      : start_(start), values_(std::move(values)) {}

  Eigen::ArrayXd slice_values(const MinuteWindow& w) const {
    return values_.segment(w.first - start_, w.length());
  }

  EpochMinute start_;
  Eigen::ArrayXd values_;
};

}  // namespace detail

/// Mid-price in USD per token; strictly positive, at least two minutes.
class MinutePriceSeries : public detail::MinuteSeriesBase {
 public:
  MinutePriceSeries(EpochMinute start, Eigen::ArrayXd prices);

  MinutePriceSeries slice(const MinuteWindow& w) const;
  bool operator==(const MinutePriceSeries& o) const {
    return start_ == o.start_ && values_.size() == o.values_.size() &&
           (values_ == o.values_).all();
  }
};

/// USD traded per minute; nonnegative.
class MinuteVolumeSeries : public detail::MinuteSeriesBase {
 public:
  MinuteVolumeSeries(EpochMinute start, Eigen::ArrayXd volumes);

  MinuteVolumeSeries slice(const MinuteWindow& w) const;
  bool operator==(const MinuteVolumeSeries& o) const {
    return start_ == o.start_ && values_.size() == o.values_.size() &&
           (values_ == o.values_).all();
  }
};

/// Absolute peg deviation in basis points.
class DeviationSeries : public detail::MinuteSeriesBase {
 public:
  DeviationSeries(EpochMinute start, Eigen::ArrayXd bps);

  double max() const { return values_.maxCoeff(); }
};

class DailyRedemptionSeries {
 public:
  DailyRedemptionSeries() = default;
  DailyRedemptionSeries(std::vector<EpochDay> dates, std::vector<double> usd);

  const std::vector<EpochDay>& dates() const { return dates_; }
  const std::vector<double>& redemptions() const { return usd_; }
  std::size_t size() const { return dates_.size(); }
  bool empty() const { return dates_.empty(); }
  bool operator==(const DailyRedemptionSeries&) const = default;

 private:
  std::vector<EpochDay> dates_;
  std::vector<double> usd_;
};

inline double deviation_bps(double price) { return 10000.0 * std::abs(price - 1.0); }

DeviationSeries compute_deviation(const MinutePriceSeries& prices);

struct AlignedSeries {
  MinutePriceSeries prices;
  MinuteVolumeSeries volumes;
};

// Truncates both series to their common window. Throws AlignmentError when the
// intersection cannot hold a valid price series.
AlignedSeries align(const MinutePriceSeries& prices, const MinuteVolumeSeries& volumes);

}  // namespace pegstress
