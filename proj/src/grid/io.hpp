// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>

#include "grid/model.hpp"

namespace tdcoord::grid {

// Reads a system from a directory holding config.txt, buses.csv, lines.csv,
// generators.csv, consumers.csv and timeseries.csv. The loaded system is
// fully validated. Entities reference buses by string id in the files; the
// in-memory model uses indices.
PowerSystem load_system(const std::filesystem::path& dir);

// Inverse of load_system. Numbers are written in shortest round-trip form,
// so load_system(write_system(sys)) reproduces sys exactly.
void write_system(const PowerSystem& sys, const std::filesystem::path& dir);

}  // namespace tdcoord::grid
