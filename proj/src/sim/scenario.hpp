// SPDX-License-Identifier: Apache-2.0
#pragma once

// Synthetic desk-scale study system: a small transmission grid with radial
// distribution feeders whose voltage limits start binding as demand peaks,
// plus seeded demand/solar/wind series. Same spec + seed => same system.

#include <cstdint>
#include <filesystem>

#include "grid/model.hpp"

namespace tdcoord::sim {

struct ScenarioSpec {
  int horizon = 420;  // hours of time-series data
  int dn_count = 3;
  std::uint64_t seed = 1;
};

// Reads `horizon` and `dns` from a key=value file; missing keys keep their
// defaults. Throws on unknown keys or bad values.
ScenarioSpec read_scenario_spec(const std::filesystem::path& config);

grid::PowerSystem generate_scenario(const ScenarioSpec& spec);

}  // namespace tdcoord::sim
