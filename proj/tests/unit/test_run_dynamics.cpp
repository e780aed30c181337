#include "doctest.h"
#include "pegstress/errors.hpp"
#include "pegstress/run_dynamics.hpp"

using namespace pegstress;

namespace {
RunModel model(double theta, double insured = 0.0, double f0 = 0.0) {
  RunModel m;
  m.fire_sale_value = theta;
  m.insured_fraction = insured;
  m.impatient_fraction = f0;
  return m;
}
}  // namespace

TEST_CASE("wait_payoff") {
  CHECK(wait_payoff(model(0.7), 0.0) == 1.0);
  for (double f : {0.0, 0.2, 0.5, 0.9}) CHECK(wait_payoff(model(1.0), f) == doctest::Approx(1.0));
  CHECK(wait_payoff(model(0.7), 0.5) == doctest::Approx((1.0 - 0.5 / 0.7) / 0.5));
  CHECK(wait_payoff(model(0.7), 0.5) == doctest::Approx(0.5714).epsilon(1e-4));
  CHECK(wait_payoff(model(0.7), 0.8) == 0.0);  // assets exhausted before waiters are paid
  CHECK(wait_payoff(model(0.7), 0.5, Depositor::Insured) == 1.0);
  CHECK_THROWS_AS(wait_payoff(model(0.7), 1.0), ValidationError);
}

TEST_CASE("run_payoff") {
  CHECK(run_payoff(model(0.7)) == doctest::Approx(0.70));
  CHECK(run_payoff(model(1.0)) == 1.0);
  CHECK(run_payoff(model(0.7), Depositor::Insured) == 1.0);
  CHECK(wait_payoff_all_run(model(0.7)) == 0.0);
  CHECK(wait_payoff_all_run(model(1.0)) == 1.0);
}

TEST_CASE("classify_equilibria") {
  CHECK(classify_equilibria(model(0.7)) == EquilibriumSet{true, true});
  CHECK(classify_equilibria(model(0.7)).multiple());
  CHECK(classify_equilibria(model(0.7, 1.0)) == EquilibriumSet{true, false});
  CHECK(classify_equilibria(model(1.0)) == EquilibriumSet{true, false});
  // enough impatient withdrawals make waiting a loss even without panic
  CHECK_FALSE(classify_equilibria(model(0.7, 0.0, 0.3)).no_run_exists);
  // no salvage value: running and waiting both yield nothing
  CHECK(classify_equilibria(model(0.0)) == EquilibriumSet{true, true});
  CHECK_THROWS_AS(classify_equilibria(model(-0.1)), ValidationError);
  CHECK_THROWS_AS(classify_equilibria(model(1.1)), ValidationError);
  CHECK_THROWS_AS(classify_equilibria(model(0.7, 1.5)), ValidationError);
}

TEST_CASE("equilibria are monotone over the theta x insured grid") {
  auto grid = [](int i) { return i / 10.0; };
  for (int t = 0; t <= 10; ++t)
    for (int k = 0; k <= 10; ++k) {
      const auto e = classify_equilibria(model(grid(t), grid(k)));
      CHECK(e.no_run_exists);
      if (k < 10) {
        const auto more_insured = classify_equilibria(model(grid(t), grid(k + 1)));
        CHECK((!more_insured.run_exists || e.run_exists));
      }
      if (t < 10) {
        const auto better_sale = classify_equilibria(model(grid(t + 1), grid(k)));
        CHECK((!better_sale.run_exists || e.run_exists));
        CHECK(run_payoff(model(grid(t + 1), grid(k))) >= run_payoff(model(grid(t), grid(k))));
      }
    }
}
