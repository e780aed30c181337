#pragma once

#include <cstdint>
#include <optional>

namespace pegstress {

/// Redemption desk as an M/M/c queue. Rates are per minute.
struct QueueParams {
  double arrival_rate = 0.0;  // lambda, requests/min
  double service_rate = 2.0;  // mu, requests/min per server
  int servers = 1;
  double ticket_size_usd = 1e6;
  double sla_seconds = 60.0;

  void validate() const;
  double offered_load() const { return arrival_rate / service_rate; }
  double utilization() const { return arrival_rate / (servers * service_rate); }
};

struct QueueResult {
  bool stable = false;
  double utilization = 0.0;
  double p_wait = 1.0;                    // 1 when unstable
  std::optional<double> wq_seconds;       // empty when unstable
};

/// lambda = (q_1h / ticket) / 60.
double arrival_rate_from_tail(double q_1h_usd, double ticket_size_usd);

/// Erlang-C via the Erlang-B recurrence; never forms a^c or c!.
QueueResult erlang_c(const QueueParams& params);

/// Smallest stable c with expected wait <= sla_seconds, scanning up from ceil(lambda/mu).
int min_servers(double arrival_rate, double service_rate, double sla_seconds);

struct SimulationEstimate {
  std::int64_t arrivals = 0;
  double p_wait = 0.0;
  double wq_seconds = 0.0;
};

/// Event-driven FIFO M/M/c simulation starting empty. Throws StabilityError
/// when utilization >= 1.
SimulationEstimate simulate_mmc(const QueueParams& params, std::int64_t arrivals,
                                std::uint64_t seed);

}  // namespace pegstress
