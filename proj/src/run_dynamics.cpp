#include "pegstress/run_dynamics.hpp"

#include <algorithm>

#include "pegstress/errors.hpp"

namespace pegstress {

void RunModel::validate() const {
  if (!(hold_to_maturity_value > 0.0))
    throw ValidationError("run model: hold_to_maturity_value must be positive");
  if (!(fire_sale_value >= 0.0 && fire_sale_value <= hold_to_maturity_value))
    throw ValidationError("run model: need 0 <= fire_sale_value <= hold_to_maturity_value");
  if (!(insured_fraction >= 0.0 && insured_fraction <= 1.0))
    throw ValidationError("run model: insured_fraction must lie in [0,1]");
  if (!(impatient_fraction >= 0.0 && impatient_fraction < 1.0))
    throw ValidationError("run model: impatient_fraction must lie in [0,1)");
}

double wait_payoff(const RunModel& m, double f, Depositor who) {
  m.validate();
  if (!(f >= 0.0 && f < 1.0))
    throw ValidationError("wait_payoff: early fraction must lie in [0,1)");
  if (who == Depositor::Insured) return 1.0;
  double remaining = 1.0;
  if (f > 0.0) remaining = m.fire_sale_value > 0.0 ? std::max(0.0, 1.0 - f / m.fire_sale_value) : 0.0;
  return remaining * m.hold_to_maturity_value / (1.0 - f);
}

double wait_payoff_all_run(const RunModel& m, Depositor who) {
  m.validate();
  if (who == Depositor::Insured) return 1.0;
  return m.fire_sale_value < 1.0 ? 0.0 : m.hold_to_maturity_value;
}

double run_payoff(const RunModel& m, Depositor who) {
  m.validate();
  if (who == Depositor::Insured) return 1.0;
  return std::min(m.fire_sale_value, 1.0);
}

EquilibriumSet classify_equilibria(const RunModel& m) {
  m.validate();
  EquilibriumSet e;
  e.no_run_exists = wait_payoff(m, m.impatient_fraction) >= 1.0;
  // Self-fulfilling when waiting through a full run loses money and running
  // is a best response to everyone else running.
  const double stay = wait_payoff_all_run(m);
  e.run_exists = m.insured_fraction < 1.0 && stay < 1.0 && run_payoff(m) >= stay;
  return e;
}

}  // namespace pegstress
