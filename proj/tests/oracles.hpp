#pragma once

// Brute-force reference implementations. Each one takes a different route
// from the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "pegstress/rail_sim.hpp"

namespace oracle {

// Full sort, then index.
inline double sorted_quantile(std::vector<double> x, double p) {
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
}

struct Persistence {
  double d_max = 0.0;
  std::int64_t minutes_ge_eps = 0;
  std::int64_t longest_run_ge_gamma = 0;
};

// Every run is enumerated from its start index.
inline Persistence scan(const std::vector<double>& d, double eps, double gamma) {
  Persistence out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    out.d_max = std::max(out.d_max, d[i]);
    if (d[i] >= eps) ++out.minutes_ge_eps;
    std::int64_t len = 0;
    for (std::size_t j = i; j < d.size() && d[j] >= gamma; ++j) ++len;
    out.longest_run_ge_gamma = std::max(out.longest_run_ge_gamma, len);
  }
  return out;
}

// Textbook Erlang-C with explicit powers and factorials (fine for c <= 20).
inline double erlang_c_factorial(double lambda, double mu, int c) {
  const double a = lambda / mu;
  const double rho = a / c;
  double sum = 0.0;
  double fact = 1.0;
  for (int k = 0; k < c; ++k) {
    if (k > 0) fact *= k;
    sum += std::pow(a, k) / fact;
  }
  const double last = std::pow(a, c) / (fact * c) / (1.0 - rho);
  return last / (sum + last);
}

// M/M/1: P(wait) = rho, W_q = rho / (mu - lambda) minutes.
inline double mm1_wq_seconds(double lambda, double mu) { return 60.0 * (lambda / mu) / (mu - lambda); }

struct FifoReplay {
  std::int64_t max_wait = 0;
  bool consistent = true;  // settled never exceeded backlog; queued matches
};

// Replays per-minute demand and settled totals through an explicit FIFO of
// dollar tranches and reports the longest residence of any settled dollar.
// Dollars still queued after the last record wait until the horizon end.
inline FifoReplay replay_fifo(const std::vector<pegstress::MinuteRecord>& recs) {
  struct Lot {
    std::int64_t arrived;
    std::int64_t amount;
  };
  std::deque<Lot> q;
  FifoReplay r;
  std::int64_t backlog = 0;
  for (const auto& rec : recs) {
    if (rec.demand > 0) q.push_back({rec.minute, rec.demand});
    backlog += rec.demand;
    std::int64_t pay = rec.settled;
    if (pay > backlog) r.consistent = false;
    while (pay > 0 && !q.empty()) {
      auto& lot = q.front();
      const std::int64_t take = std::min(pay, lot.amount);
      r.max_wait = std::max(r.max_wait, rec.minute - lot.arrived);
      lot.amount -= take;
      pay -= take;
      backlog -= take;
      if (lot.amount == 0) q.pop_front();
    }
    if (backlog != rec.queued) r.consistent = false;
  }
  if (!recs.empty())
    for (const auto& lot : q) r.max_wait = std::max(r.max_wait, recs.back().minute + 1 - lot.arrived);
  return r;
}

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() /
           ("pegstress-" + tag + "-" + std::to_string(rng() % 1000000000ULL));
  std::filesystem::create_directories(p);
  return p;
}

inline void write_text(const std::filesystem::path& p, const std::string& s) {
  std::ofstream(p, std::ios::binary) << s;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace oracle
