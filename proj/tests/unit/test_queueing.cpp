#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "pegstress/errors.hpp"
#include "pegstress/queueing.hpp"

using namespace pegstress;

namespace {
QueueParams desk(double lambda, double mu, int c) {
  QueueParams p;
  p.arrival_rate = lambda;
  p.service_rate = mu;
  p.servers = c;
  return p;
}
}  // namespace

TEST_CASE("arrival_rate_from_tail") {
  CHECK(arrival_rate_from_tail(1'386'618'608.0, 1e6) == doctest::Approx(23.110).epsilon(0.0005 / 23.11));
  CHECK(arrival_rate_from_tail(60e6, 1e6) == doctest::Approx(1.0));
  CHECK(arrival_rate_from_tail(5e6, 5e6) == doctest::Approx(1.0 / 60.0));
  CHECK_THROWS_AS(arrival_rate_from_tail(0.0, 1e6), ValidationError);
  CHECK_THROWS_AS(arrival_rate_from_tail(1e6, -1.0), ValidationError);
}

TEST_CASE("erlang_c examples") {
  auto five = erlang_c(desk(23.110, 2, 5));
  CHECK_FALSE(five.stable);
  CHECK_FALSE(five.wq_seconds.has_value());

  auto twelve = erlang_c(desk(23.110, 2, 12));
  REQUIRE(twelve.stable);
  CHECK(*twelve.wq_seconds == doctest::Approx(57.7).epsilon(0.05 / 57.7));
  CHECK(twelve.p_wait == doctest::Approx(oracle::erlang_c_factorial(23.110, 2, 12)).epsilon(1e-12));

  auto mm1 = erlang_c(desk(0.5, 1, 1));
  CHECK(mm1.p_wait == doctest::Approx(0.5));
  CHECK(*mm1.wq_seconds == doctest::Approx(60.0));

  // cmu == lambda exactly is unstable
  CHECK_FALSE(erlang_c(desk(24.0, 2, 12)).stable);
}

TEST_CASE("erlang_c agrees with the factorial formula") {
  for (int c = 1; c <= 20; ++c)
    for (double rho : {0.05, 0.3, 0.6, 0.9, 0.99}) {
      const double mu = 1.7;
      const double lambda = rho * c * mu;
      const auto r = erlang_c(desk(lambda, mu, c));
      REQUIRE(r.stable);
      const double want = oracle::erlang_c_factorial(lambda, mu, c);
      REQUIRE(r.p_wait == doctest::Approx(want).epsilon(1e-10));
      REQUIRE(*r.wq_seconds == doctest::Approx(60.0 * want / (c * mu - lambda)).epsilon(1e-10));
    }
}

TEST_CASE("erlang_c stays finite for large server counts") {
  auto r = erlang_c(desk(950.0, 1.0, 1000));
  REQUIRE(r.stable);
  CHECK(std::isfinite(r.p_wait));
  CHECK(r.p_wait > 0.0);
  CHECK(r.p_wait < 1.0);
  auto big = erlang_c(desk(4000.0, 1.0, 5000));
  CHECK(std::isfinite(*big.wq_seconds));
}

TEST_CASE("wait grows without bound as utilization approaches one") {
  double prev = 0.0;
  for (double rho : {0.9, 0.99, 0.999, 0.9999}) {
    const auto r = erlang_c(desk(rho * 24.0, 2.0, 12));
    CHECK(*r.wq_seconds > prev);
    prev = *r.wq_seconds;
  }
  CHECK(prev > 1e4);
}

TEST_CASE("min_servers") {
  CHECK(min_servers(23.110, 2, 60) == 12);
  CHECK(min_servers(0.5, 1, 120) == 1);
  const double inf = std::numeric_limits<double>::max();
  CHECK(min_servers(23.110, 2, inf) == 12);
  CHECK(min_servers(24.0, 2, inf) == 13);  // exact divisibility is unstable
  CHECK(min_servers(23.110, 2, 1.0) > 12);

  for (double lambda : {0.3, 2.5, 23.11, 77.0, 400.0})
    for (double tau : {1.0, 10.0, 60.0, 600.0}) {
      const int c = min_servers(lambda, 2.0, tau);
      auto ok = erlang_c(desk(lambda, 2.0, c));
      REQUIRE(ok.stable);
      REQUIRE(*ok.wq_seconds <= tau);
      if (c > 1) {
        auto below = erlang_c(desk(lambda, 2.0, c - 1));
        REQUIRE((!below.stable || *below.wq_seconds > tau));
      }
    }
}

TEST_CASE("simulate_mmc") {
  SUBCASE("M/M/1 within 2% of the closed form") {
    auto s = simulate_mmc(desk(0.5, 1, 1), 1'000'000, 42);
    CHECK(s.arrivals == 1'000'000);
    CHECK(s.wq_seconds == doctest::Approx(oracle::mm1_wq_seconds(0.5, 1.0)).epsilon(0.02));
    CHECK(s.p_wait == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("overprovisioned desk almost never waits") {
    auto s = simulate_mmc(desk(1, 1, 100), 100'000, 42);
    CHECK(s.p_wait < 1e-6);
  }
  SUBCASE("unstable parameters are refused") {
    CHECK_THROWS_AS(simulate_mmc(desk(23.110, 2, 5), 1000, 42), StabilityError);
  }
  SUBCASE("seeded runs repeat exactly") {
    auto a = simulate_mmc(desk(10, 1, 12), 50'000, 3);
    auto b = simulate_mmc(desk(10, 1, 12), 50'000, 3);
    CHECK(a.wq_seconds == b.wq_seconds);
    CHECK(a.p_wait == b.p_wait);
  }
}
