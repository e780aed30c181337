#include "pegstress/funding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pegstress/errors.hpp"

namespace pegstress {

namespace {

bool in_unit(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace

const char* to_string(Horizon h) { return h == Horizon::OneHour ? "1h" : "24h"; }

void ReservePortfolio::validate() const {
  if (!(float_usd > 0.0) || !std::isfinite(float_usd))
    throw ValidationError("portfolio: float_usd must be positive");
  if (!in_unit(cash_share) || !in_unit(tbill_share) || !in_unit(repo_share))
    throw ValidationError("portfolio: shares must lie in [0,1]");
  if (cash_share + tbill_share + repo_share > 1.0 + 1e-9)
    throw ValidationError("portfolio: cash + tbill + repo shares exceed 1");
  if (!in_unit(cash_access_factor)) throw ValidationError("portfolio: cash_access_factor must lie in [0,1]");
  if (!in_unit(tbill_haircut_1h)) throw ValidationError("portfolio: tbill_haircut_1h must lie in [0,1]");
  if (!(tbill_line_cap_usd >= 0.0)) throw ValidationError("portfolio: tbill_line_cap_usd must be >= 0");
}

double empirical_quantile(std::span<const double> samples, double p) {
  if (samples.empty()) throw ValidationError("empirical_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("empirical_quantile: p must lie in [0,1]");

  std::vector<double> x(samples.begin(), samples.end());
  const double h = static_cast<double>(x.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return *std::max_element(x.begin(), x.end());

  // Only the two neighbouring order statistics are needed.
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(lo), x.end());
  const double x_lo = x[lo];
  const double x_hi = *std::min_element(x.begin() + static_cast<std::ptrdiff_t>(lo) + 1, x.end());
  return x_lo + (h - static_cast<double>(lo)) * (x_hi - x_lo);
}

OutflowTail outflow_tail_from_quantile(double q_24h_usd, double p, double worst_hour_share) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("outflow tail: p must lie in (0,1)");
  if (!(worst_hour_share > 0.0 && worst_hour_share <= 1.0))
    throw ValidationError("outflow tail: worst_hour_share must lie in (0,1]");
  if (!(q_24h_usd >= 0.0) || !std::isfinite(q_24h_usd))
    throw ValidationError("outflow tail: quantile must be finite and >= 0");
  return {p, q_24h_usd, worst_hour_share, worst_hour_share * q_24h_usd};
}

OutflowTail outflow_tail(const DailyRedemptionSeries& redemptions, double p, double worst_hour_share) {
  if (redemptions.empty()) throw ValidationError("outflow tail: redemption series is empty");
  return outflow_tail_from_quantile(empirical_quantile(redemptions.redemptions(), p), p,
                                    worst_hour_share);
}

double imr(const ReservePortfolio& pf, Horizon horizon) {
  pf.validate();
  const double F = pf.float_usd;
  if (horizon == Horizon::OneHour)
    return pf.cash_access_factor * pf.cash_share * F +
           (1.0 - pf.tbill_haircut_1h) * std::min(pf.tbill_share * F, pf.tbill_line_cap_usd);
  double total = pf.cash_share * F + pf.tbill_share * F;
  if (pf.repo_convertible_24h) total += pf.repo_share * F;
  return total;
}

CoverageResult coverage(const ReservePortfolio& portfolio, const OutflowTail& tail, Horizon horizon) {
  CoverageResult r;
  r.horizon = horizon;
  r.outflow_usd = tail.quantile(horizon);
  r.imr_usd = imr(portfolio, horizon);
  r.ilcr = r.outflow_usd > 0.0 ? r.imr_usd / r.outflow_usd : std::numeric_limits<double>::infinity();
  r.mmg_usd = std::max(0.0, r.outflow_usd - r.imr_usd);
  r.design_goal_met = r.mmg_usd == 0.0;
  return r;
}

}  // namespace pegstress
