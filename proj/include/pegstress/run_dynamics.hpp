#pragma once

namespace pegstress {

// Stylised Diamond-Dybvig bank with a single illiquid asset.
//
// Payoffs are an interpretation, not closed forms from the literature:
//  - If a fraction f withdraws early at par, the bank liquidates f/theta of
//    its assets at the fire-sale rate theta. The remaining (1 - f/theta) of
//    assets mature at hold_to_maturity_value and are shared pro rata among the
//    (1 - f) depositors who waited.
//  - When every uninsured depositor runs, service is sequential with a
//    uniformly random queue position: the first theta of the line is paid at
//    par, the rest gets nothing, so a runner expects theta.
//  - Insured depositors always receive 1.
struct RunModel {
  double hold_to_maturity_value = 1.00;
  double fire_sale_value = 0.70;  // theta
  double insured_fraction = 0.0;
  double impatient_fraction = 0.0;  // f0, genuine early liquidity need

  void validate() const;
};

enum class Depositor { Uninsured, Insured };

/// Payoff per $1 to a depositor who waits while fraction f withdraws early.
/// f must lie in [0,1).
double wait_payoff(const RunModel& model, double f, Depositor who = Depositor::Uninsured);

/// Limit of wait_payoff as f -> 1: zero whenever liquidation is at a loss.
double wait_payoff_all_run(const RunModel& model, Depositor who = Depositor::Uninsured);

/// Expected payoff per $1 to a runner when all uninsured depositors run.
double run_payoff(const RunModel& model, Depositor who = Depositor::Uninsured);

struct EquilibriumSet {
  bool no_run_exists = false;
  bool run_exists = false;

  bool multiple() const { return no_run_exists && run_exists; }
  bool operator==(const EquilibriumSet&) const = default;
};

EquilibriumSet classify_equilibria(const RunModel& model);

}  // namespace pegstress
