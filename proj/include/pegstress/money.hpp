#pragma once

#include <cmath>
#include <cstdint>

namespace pegstress {

// Integer micro-dollars. The rail ledger runs on these so value conservation
// is exact over multi-day minute traces.
using MicroUsd = std::int64_t;

inline constexpr MicroUsd kMicrosPerUsd = 1'000'000;

inline MicroUsd to_micro(double usd) { return std::llround(usd * 1e6); }
inline double to_usd(MicroUsd m) { return static_cast<double>(m) / 1e6; }

}  // namespace pegstress
