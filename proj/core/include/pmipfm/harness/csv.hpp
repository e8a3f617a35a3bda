#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pmipfm/harness/metrics.hpp"

namespace pmipfm::harness {

/// Numbers use 6 significant digits ("%.6g"); integers are printed exactly.
std::string format_cell(const Cell& cell);

std::string to_csv(const Table& table);

/// Writes <out_dir>/<family>.csv for every family, creating out_dir.
/// Throws std::runtime_error naming the path on IO failure. Returns the
/// written paths in family order.
std::vector<std::filesystem::path> emit_csv(const MetricSet& metrics, const std::filesystem::path& out_dir);

}  // namespace pmipfm::harness
