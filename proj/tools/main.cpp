// pmipfm: run scenarios, validate scenario files and run experiment presets.
//
// Exit codes: 0 success, 1 invalid scenario, 2 any other error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "pmipfm/harness/csv.hpp"
#include "pmipfm/harness/experiments.hpp"
#include "pmipfm/harness/metrics.hpp"
#include "pmipfm/harness/scenario_loader.hpp"
#include "pmipfm/netsim/simulator.hpp"

namespace fs = std::filesystem;
using namespace pmipfm;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void report(const harness::MetricSet& metrics, const std::optional<fs::path>& out_dir, const std::string& trace) {
  if (!out_dir) {
    for (const auto& [name, table] : metrics.families()) std::cout << "# " << name << "\n" << harness::to_csv(table);
    return;
  }
  for (const auto& p : harness::emit_csv(metrics, *out_dir)) std::cerr << "wrote " << p.string() << "\n";
  write_file(*out_dir / "trace.log", trace);
  std::cerr << "wrote " << (*out_dir / "trace.log").string() << "\n";
}

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--set", "expected key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PMIPv6 flow mobility simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<fs::path> out_dir;
  bool show_trace = false;
  auto* run = app.add_subcommand("run", "Run one scenario and print or write its metrics");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--horizon", horizon, "Override the horizon in ms");
  run->add_option("--out", out_dir, "Write <family>.csv and trace.log here");
  run->add_flag("--trace", show_trace, "Print the trace instead of the metrics");

  auto* validate = app.add_subcommand("validate", "Load and validate a scenario file");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();

  std::string preset_name;
  std::vector<std::string> sets;
  fs::path preset_dir = harness::default_preset_dir();
  unsigned threads = 0;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment preset");
  experiment->add_option("preset", preset_name, "A, B, C, D or E")->required();
  experiment->add_option("--out", out_dir, "Write <family>.csv and trace.log here");
  experiment->add_option("--set", sets, "key=value override, repeatable");
  experiment->add_option("--preset-dir", preset_dir, "Directory with a.scn .. e.scn");
  experiment->add_option("--threads", threads, "Parallel runs, 0 = hardware count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*validate) {
      const auto sc = harness::load_scenario(scenario_path);
      std::cout << scenario_path << ": ok (" << sc.mags.size() << " mags, " << sc.mns.size() << " mns, "
                << sc.flows.size() << " flows)\n";
      return 0;
    }
    if (*run) {
      auto sc = harness::load_scenario(scenario_path);
      if (horizon) harness::apply_knob(sc, "horizon_ms", std::to_string(*horizon));
      sc.validate();
      const auto result = netsim::run(sc, seed.value_or(sc.seed));
      const auto metrics = harness::MetricSet::from_run(result);
      if (show_trace && !out_dir)
        std::cout << result.trace_text();
      else
        report(metrics, out_dir, result.trace_text());
      return 0;
    }
    const auto preset = harness::preset_from_string(preset_name);
    if (!preset) {
      std::cerr << "error: unknown preset '" << preset_name << "' (expected A, B, C, D or E)\n";
      return 2;
    }
    harness::ExperimentOptions options;
    options.preset_dir = preset_dir;
    options.threads = threads;
    for (const auto& s : sets) options.overrides.push_back(split_assignment(s));
    const auto result = harness::run_experiment(*preset, options);
    std::cerr << "preset " << harness::to_string(*preset) << ": " << result.runs << " runs\n";
    report(result.metrics, out_dir, result.trace);
    return 0;
  } catch (const netsim::ScenarioInvalid& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 1;
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
