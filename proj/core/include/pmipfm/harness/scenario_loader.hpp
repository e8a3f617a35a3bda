#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pmipfm/netsim/scenario.hpp"

namespace pmipfm::harness {

using netsim::Scenario;
using netsim::ScenarioInvalid;

/// Numeric sweep parameters from a preset's `experiment:` section. A scalar
/// is stored as a one-element list.
using ExperimentParams = std::map<std::string, std::vector<double>>;

struct ScenarioFile {
  Scenario scenario;
  ExperimentParams experiment;
};

/// Reads and validates a scenario file. Throws ScenarioInvalid with the
/// offending line, including for unreadable files and syntax errors.
Scenario load_scenario(const std::filesystem::path& path);

ScenarioFile load_scenario_file(const std::filesystem::path& path);

/// Same as load_scenario_file, from text. `origin` names the source in
/// diagnostics.
ScenarioFile parse_scenario(std::string_view text, std::string_view origin = "<string>");

/// Sets one knob by name, e.g. ("d_detect_ms", "10"). The names are those
/// accepted in the `knobs:` section plus `seed` and `horizon_ms`.
/// Throws ScenarioInvalid for unknown names or unparsable values.
void apply_knob(Scenario& scenario, std::string_view key, std::string_view value);

/// Names accepted by apply_knob, sorted.
std::vector<std::string> knob_names();

}  // namespace pmipfm::harness
