#pragma once

#include <cmath>

#include "json.hpp"
#include "pegstress/rail_sim.hpp"

namespace pegstress::detail {

nlohmann::ordered_json to_json(const RailSummary& s);
RailSummary rail_summary_from_json(const nlohmann::json& j);

// JSON has no infinities; non-finite values travel as null.
inline nlohmann::ordered_json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace pegstress::detail
