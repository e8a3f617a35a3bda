#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmipfm/core/time.hpp"
#include "pmipfm/core/types.hpp"

namespace pmipfm {

using TraceFields = std::vector<std::pair<std::string, std::string>>;

/// One structured trace record. Rendered as a single line:
///   <time ms> <entity> <kind> key=value ...
/// with fields in insertion order.
struct TraceRecord {
  SimTime time;
  NodeId entity;
  std::string kind;
  TraceFields fields;
};

std::string format_trace_line(const TraceRecord& record);

}  // namespace pmipfm
