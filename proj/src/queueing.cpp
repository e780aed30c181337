#include "pegstress/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <random>
#include <vector>

#include "pegstress/errors.hpp"

namespace pegstress {

void QueueParams::validate() const {
  if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate))
    throw ValidationError("queue: arrival rate must be positive");
  if (!(service_rate > 0.0) || !std::isfinite(service_rate))
    throw ValidationError("queue: service rate must be positive");
  if (servers < 1) throw ValidationError("queue: servers must be >= 1");
  if (!(ticket_size_usd > 0.0)) throw ValidationError("queue: ticket size must be positive");
  if (!(sla_seconds > 0.0)) throw ValidationError("queue: SLA must be positive");
}

double arrival_rate_from_tail(double q_1h_usd, double ticket_size_usd) {
  if (!(q_1h_usd > 0.0) || !(ticket_size_usd > 0.0))
    throw ValidationError("arrival rate: Q_1h and ticket size must be positive");
  return (q_1h_usd / ticket_size_usd) / 60.0;
}

QueueResult erlang_c(const QueueParams& params) {
  params.validate();
  QueueResult r;
  r.utilization = params.utilization();
  if (r.utilization >= 1.0) return r;

  const double a = params.offered_load();
  double blocking = 1.0;  // Erlang-B with k servers
  for (int k = 1; k <= params.servers; ++k) blocking = a * blocking / (k + a * blocking);
  const double rho = r.utilization;
  r.stable = true;
  r.p_wait = blocking / (1.0 - rho * (1.0 - blocking));
  r.wq_seconds =
      60.0 * r.p_wait / (params.servers * params.service_rate - params.arrival_rate);
  return r;
}

int min_servers(double arrival_rate, double service_rate, double sla_seconds) {
  if (!(arrival_rate > 0.0) || !(service_rate > 0.0) || !(sla_seconds > 0.0))
    throw ValidationError("min_servers: rates and SLA must be positive");
  QueueParams q;
  q.arrival_rate = arrival_rate;
  q.service_rate = service_rate;
  q.servers = std::max(1, static_cast<int>(std::ceil(arrival_rate / service_rate)));
  for (;; ++q.servers) {
    const auto r = erlang_c(q);
    if (r.stable && *r.wq_seconds <= sla_seconds) return q.servers;
  }
}

SimulationEstimate simulate_mmc(const QueueParams& params, std::int64_t arrivals,
                                std::uint64_t seed) {
  params.validate();
  if (params.utilization() >= 1.0)
    throw StabilityError("simulate_mmc: utilization >= 1, queue has no steady state");
  if (arrivals < 1) throw ValidationError("simulate_mmc: need at least one arrival");

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> interarrival(params.arrival_rate);
  std::exponential_distribution<double> service(params.service_rate);

  // Pending departures only; the next arrival is tracked separately.
  std::priority_queue<double, std::vector<double>, std::greater<>> departures;
  std::deque<double> waiting;  // arrival times, FIFO
  int busy = 0;

  double next_arrival = interarrival(rng);
  std::int64_t arrived = 0;
  std::int64_t served = 0;
  std::int64_t delayed = 0;
  double total_wait = 0.0;

  while (served < arrivals) {
    const bool arrival_next =
        arrived < arrivals && (departures.empty() || next_arrival < departures.top());
    if (arrival_next) {
      const double now = next_arrival;
      ++arrived;
      if (busy < params.servers) {
        ++busy;
        ++served;
        departures.push(now + service(rng));
      } else {
        waiting.push_back(now);
      }
      next_arrival = now + interarrival(rng);
    } else {
      const double now = departures.top();
      departures.pop();
      if (waiting.empty()) {
        --busy;
      } else {
        total_wait += now - waiting.front();
        waiting.pop_front();
        ++delayed;
        ++served;
        departures.push(now + service(rng));
      }
    }
  }

  SimulationEstimate est;
  est.arrivals = arrivals;
  est.p_wait = static_cast<double>(delayed) / static_cast<double>(arrivals);
  est.wq_seconds = 60.0 * total_wait / static_cast<double>(arrivals);
  return est;
}

}  // namespace pegstress
