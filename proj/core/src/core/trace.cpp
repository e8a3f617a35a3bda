#include "pmipfm/core/trace.hpp"

#include <cstdio>

#include "pmipfm/core/cost.hpp"

namespace pmipfm {

std::string to_string(Cost c) {
  const std::int64_t raw = c.raw();
  const std::int64_t mag = raw < 0 ? -raw : raw;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", raw < 0 ? "-" : "", static_cast<long long>(mag / Cost::kScale),
                static_cast<long long>(mag % Cost::kScale));
  return buf;
}

std::string format_trace_line(const TraceRecord& record) {
  std::string line = format_ms(record.time);
  line += ' ';
  line += record.entity.value;
  line += ' ';
  line += record.kind;
  for (const auto& [key, value] : record.fields) {
    line += ' ';
    line += key;
    line += '=';
    line += value;
  }
  return line;
}

}  // namespace pmipfm
