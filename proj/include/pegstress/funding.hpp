#pragma once

#include <span>

#include "pegstress/timeseries.hpp"

namespace pegstress {

enum class Horizon { OneHour, OneDay };

const char* to_string(Horizon h);

/// Reserve composition of a fiat-backed issuer. Shares are fractions of the float.
struct ReservePortfolio {
  double float_usd = 43e9;
  double cash_share = 0.12;
  double tbill_share = 0.45;
  double repo_share = 0.43;
  double cash_access_factor = 0.50;  // share of cash reachable within an hour
  double tbill_haircut_1h = 0.02;
  double tbill_line_cap_usd = 0.0;   // standing-line cap for sub-hour T-bill monetisation
  bool repo_convertible_24h = false;

  void validate() const;
  double cash_usd() const { return cash_share * float_usd; }
  double tbill_usd() const { return tbill_share * float_usd; }
  double repo_usd() const { return repo_share * float_usd; }
  bool operator==(const ReservePortfolio&) const = default;
};

struct OutflowTail {
  double p = 0.99;
  double q_24h_usd = 0.0;
  double worst_hour_share = 0.75;
  double q_1h_usd = 0.0;  // worst_hour_share * q_24h_usd

  double quantile(Horizon h) const { return h == Horizon::OneHour ? q_1h_usd : q_24h_usd; }
};

struct CoverageResult {
  Horizon horizon = Horizon::OneHour;
  double outflow_usd = 0.0;
  double imr_usd = 0.0;
  double ilcr = 0.0;  // +inf when the outflow quantile is zero
  double mmg_usd = 0.0;
  bool design_goal_met = false;  // no shortfall
};

/// Linear interpolation between order statistics: h = (n-1)p,
/// x[floor h] + frac(h) (x[floor h + 1] - x[floor h]).
double empirical_quantile(std::span<const double> samples, double p);

OutflowTail outflow_tail(const DailyRedemptionSeries& redemptions, double p = 0.99,
                         double worst_hour_share = 0.75);
OutflowTail outflow_tail_from_quantile(double q_24h_usd, double p = 0.99,
                                       double worst_hour_share = 0.75);

/// Instantly monetisable reserves. One hour: accessible cash plus haircut
/// T-bills up to the line cap. One day: all cash and T-bills, plus repos when
/// flagged convertible.
double imr(const ReservePortfolio& portfolio, Horizon horizon);

CoverageResult coverage(const ReservePortfolio& portfolio, const OutflowTail& tail, Horizon horizon);

}  // namespace pegstress
