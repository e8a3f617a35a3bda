#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmipfm/harness/metrics.hpp"
#include "pmipfm/harness/scenario_loader.hpp"

namespace pmipfm::harness {

enum class Preset { A, B, C, D, E };

std::string_view to_string(Preset preset);
std::optional<Preset> preset_from_string(std::string_view name);

/// Directory holding a.scn .. e.scn, fixed at build time.
std::filesystem::path default_preset_dir();
std::filesystem::path preset_path(Preset preset, const std::filesystem::path& dir);

struct ExperimentOptions {
  std::filesystem::path preset_dir = default_preset_dir();
  /// key=value pairs. Keys of the preset's experiment section take a
  /// comma-separated list; any other key is a scenario knob.
  std::vector<std::pair<std::string, std::string>> overrides;
  /// Worker threads for independent runs; 0 picks the hardware count.
  unsigned threads = 0;
};

struct ExperimentResult {
  Preset preset = Preset::A;
  MetricSet metrics = MetricSet::blank();
  /// Traces of all runs in a fixed order, each preceded by a "## " header.
  std::string trace;
  std::size_t runs = 0;
};

/// Runs one preset. Output is a pure function of (preset file, overrides).
/// Throws ScenarioInvalid.
ExperimentResult run_experiment(Preset preset, const ExperimentOptions& options = {});

/// Same, from an already loaded preset file.
ExperimentResult run_experiment(Preset preset, ScenarioFile file,
                                const std::vector<std::pair<std::string, std::string>>& overrides, unsigned threads = 0);

}  // namespace pmipfm::harness
