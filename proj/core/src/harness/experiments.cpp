#include "pmipfm/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "pmipfm/harness/handover.hpp"
#include "pmipfm/netsim/simulator.hpp"

#ifndef PMIPFM_DEFAULT_PRESET_DIR
#define PMIPFM_DEFAULT_PRESET_DIR "presets"
#endif

namespace pmipfm::harness {

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::A: return "A";
    case Preset::B: return "B";
    case Preset::C: return "C";
    case Preset::D: return "D";
    case Preset::E: return "E";
  }
  return "?";
}

std::optional<Preset> preset_from_string(std::string_view name) {
  if (name.size() != 1) return std::nullopt;
  switch (name[0]) {
    case 'A': case 'a': return Preset::A;
    case 'B': case 'b': return Preset::B;
    case 'C': case 'c': return Preset::C;
    case 'D': case 'd': return Preset::D;
    case 'E': case 'e': return Preset::E;
    default: return std::nullopt;
  }
}

std::filesystem::path default_preset_dir() { return PMIPFM_DEFAULT_PRESET_DIR; }

std::filesystem::path preset_path(Preset preset, const std::filesystem::path& dir) {
  std::string name(to_string(preset));
  name[0] = static_cast<char>(name[0] - 'A' + 'a');
  return dir / (name + ".scn");
}

namespace {

using netsim::FlowSpec;
using netsim::RunResult;

struct Job {
  std::string label;
  Scenario scenario;
  std::uint64_t seed = 0;
};

/// Runs every job (possibly in parallel) and reduces each result in place.
/// Reductions and traces are returned in job order regardless of
/// scheduling.
template <typename R>
std::vector<R> run_jobs(const std::vector<Job>& jobs, unsigned threads, const std::function<R(std::size_t, RunResult&)>& reduce,
                        std::string& trace) {
  std::vector<std::optional<R>> out(jobs.size());
  std::vector<std::string> traces(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        netsim::Simulator sim(jobs[i].scenario, jobs[i].seed);
        auto result = sim.run();
        traces[i] = "## " + jobs[i].label + " seed=" + std::to_string(jobs[i].seed) + "\n" + result.trace_text();
        out[i] = reduce(i, result);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  unsigned n = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, jobs.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<R> reduced;
  reduced.reserve(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    trace += traces[i];
    reduced.push_back(std::move(*out[i]));
  }
  return reduced;
}

std::vector<double> param_list(const ExperimentParams& p, const std::string& key, std::vector<double> fallback) {
  const auto it = p.find(key);
  return it == p.end() ? std::move(fallback) : it->second;
}

double param(const ExperimentParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() || it->second.empty() ? fallback : it->second.front();
}

std::size_t count_param(const ExperimentParams& p, const std::string& key, double fallback) {
  const double v = param(p, key, fallback);
  if (!(v >= 0.0) || v != std::floor(v)) throw ScenarioInvalid(0, "experiment." + key + ": expected a count");
  return static_cast<std::size_t>(v);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::int64_t i64(std::size_t v) { return static_cast<std::int64_t>(v); }

const netsim::MnSpec& first_mn(const Scenario& s) {
  if (s.mns.empty()) throw ScenarioInvalid(0, "preset needs at least one mn");
  return s.mns.front();
}

const netsim::CnSpec& first_cn(const Scenario& s) {
  if (s.cns.empty()) throw ScenarioInvalid(0, "preset needs at least one cn");
  return s.cns.front();
}

FlowSpec make_flow(const Scenario& s, std::string id, const netsim::MnSpec& mn, const std::string& iface, double rate,
                   double start_ms, std::uint16_t port, std::optional<NodeId> via = std::nullopt) {
  FlowSpec f;
  f.id = std::move(id);
  f.cn = first_cn(s).id;
  f.mn = mn.id;
  f.iface = iface;
  f.rate_kbps = rate;
  f.start_ms = start_ms;
  f.src_port = port;
  f.dst_port = port;
  f.via = std::move(via);
  return f;
}

/// Per-flow view of LMA cost samples, in arrival order.
std::vector<const lma::CostSample*> samples_of(const RunResult& r, const TrafficSelector& sel) {
  std::vector<const lma::CostSample*> out;
  for (const auto& s : r.lma.samples)
    if (s.selector == sel) out.push_back(&s);
  return out;
}

struct Stats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Population statistics over exact fixed-point costs.
Stats stats_of(const std::vector<Cost>& costs) {
  Stats st;
  st.n = costs.size();
  if (costs.empty()) return st;
  long double sum = 0;
  st.min = std::numeric_limits<double>::max();
  st.max = std::numeric_limits<double>::lowest();
  for (const auto c : costs) {
    sum += c.raw();
    st.min = std::min(st.min, c.as_units());
    st.max = std::max(st.max, c.as_units());
  }
  const long double mean_raw = sum / costs.size();
  long double ss = 0;
  for (const auto c : costs) ss += (c.raw() - mean_raw) * (c.raw() - mean_raw);
  const long double scale = Cost::kScale;
  st.mean = static_cast<double>(mean_raw / scale);
  st.variance = static_cast<double>(ss / costs.size() / (scale * scale));
  return st;
}

// ---- A: rule-count scaling ------------------------------------------------

ExperimentResult preset_a(const ScenarioFile& file, unsigned threads) {
  const auto& base = file.scenario;
  if (base.flows.empty()) throw ScenarioInvalid(0, "preset A needs one flow");
  const auto prefill = param_list(file.experiment, "prefill", {0, 100, 200, 300, 400, 500, 600, 700, 800, 900, 1000});

  std::vector<Job> jobs;
  for (double n : prefill) {
    Job j{"A prefill=" + num(n), base, base.seed};
    if (!(n >= 0.0)) throw ScenarioInvalid(0, "experiment.prefill: negative value");
    j.scenario.prefill_rules = static_cast<std::size_t>(n);
    jobs.push_back(std::move(j));
  }

  struct Row {
    std::size_t prefill;
    std::vector<std::vector<Cell>> cost, install;
  };
  ExperimentResult res;
  res.preset = Preset::A;
  std::function<Row(std::size_t, RunResult&)> reduce = [&](std::size_t i, RunResult& r) {
    Row row{jobs[i].scenario.prefill_rules, {}, {}};
    const auto& sel = r.flows.front().selector;
    std::map<std::size_t, std::pair<Cost, std::size_t>> by_pos;
    for (const auto* s : samples_of(r, sel)) {
      if (!s->fast_path) continue;
      auto& slot = by_pos[s->rule_position];
      slot.first = s->cost;
      ++slot.second;
    }
    for (const auto& [pos, v] : by_pos)
      row.cost.push_back({i64(row.prefill), i64(pos), v.first.as_units(), i64(v.second)});
    for (const auto& rec : r.lma.installs)
      if (rec.selector == sel)
        row.install.push_back({i64(row.prefill), i64(rec.rules_before), rec.latency.as_units(),
                               to_ms(rec.completed - rec.started)});
    return row;
  };
  const auto rows = run_jobs(jobs, threads, reduce, res.trace);
  auto& cost = res.metrics.add_family("a_cost", {"prefill", "rule_index", "cost", "samples"});
  auto& install = res.metrics.add_family("a_install", {"prefill", "rules_before", "latency_units", "latency_ms"});
  for (const auto& row : rows) {
    for (const auto& c : row.cost) cost.add(c);
    for (const auto& c : row.install) install.add(c);
  }
  res.runs = jobs.size();
  return res;
}

// ---- B: first-packet penalty ----------------------------------------------

ExperimentResult preset_b(const ScenarioFile& file, unsigned threads) {
  auto sc = file.scenario;
  const auto& mn = first_mn(sc);
  const std::size_t flows = count_param(file.experiment, "flows", 50);
  const double rate = param(file.experiment, "rate_kbps", 100);
  const double start = param(file.experiment, "start_ms", 500);
  const double stagger = param(file.experiment, "stagger_ms", 100);
  const std::size_t packets = count_param(file.experiment, "packets", 10);

  sc.flows.clear();
  for (std::size_t j = 0; j < flows; ++j)
    sc.flows.push_back(make_flow(sc, "f" + std::to_string(j + 1), mn, mn.interfaces.front().name, rate,
                                 start + static_cast<double>(j) * stagger, static_cast<std::uint16_t>(5001 + j)));

  std::vector<Job> jobs{{"B flows=" + std::to_string(flows), sc, sc.seed}};
  ExperimentResult res;
  res.preset = Preset::B;
  struct Out {
    std::vector<std::vector<Cell>> packets, summary;
  };
  std::function<Out(std::size_t, RunResult&)> reduce = [&](std::size_t, RunResult& r) {
    Out out;
    for (std::size_t j = 0; j < r.flows.size(); ++j) {
      const auto samples = samples_of(r, r.flows[j].selector);
      std::size_t k_star = 0;
      for (const auto* s : samples) k_star += s->fast_path ? 0 : 1;
      bool fast_after = true;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const bool expect_divert = k < k_star;
        if (samples[k]->fast_path == expect_divert) fast_after = false;
        if (k < packets)
          out.packets.push_back({i64(j + 1), i64(j), i64(k + 1), static_cast<std::int64_t>(samples[k]->seq),
                                 std::string(samples[k]->fast_path ? "fast" : "divert"), samples[k]->cost.as_units()});
      }
      const double first = samples.empty() ? 0.0 : samples.front()->cost.as_units();
      out.summary.push_back({i64(j + 1), i64(j), i64(k_star), first, i64(fast_after ? 1 : 0), i64(samples.size())});
    }
    return out;
  };
  const auto outs = run_jobs(jobs, threads, reduce, res.trace);
  auto& pk = res.metrics.add_family("b_packets", {"flow_index", "background_flows", "k", "seq", "path", "cost"});
  auto& sm = res.metrics.add_family("b_flows",
                                    {"flow_index", "background_flows", "k_star", "first_cost", "fast_after_k_star", "packets"});
  auto& load = res.metrics.add_family("b_load", {"flows", "rate_kbps", "aggregate_mbps"});
  for (const auto& o : outs) {
    for (const auto& c : o.packets) pk.add(c);
    for (const auto& c : o.summary) sm.add(c);
  }
  load.add({i64(flows), rate, static_cast<double>(flows) * rate / 1000.0});
  res.runs = jobs.size();
  return res;
}

// ---- C: LMA versus MAG ------------------------------------------------------

ExperimentResult preset_c(const ScenarioFile& file, unsigned threads) {
  const auto& base = file.scenario;
  const auto& mn = first_mn(base);
  const auto counts = param_list(file.experiment, "flows", {1, 10, 50});
  const auto rates = param_list(file.experiment, "rates_kbps", {10, 100});
  const double start = param(file.experiment, "start_ms", 500);
  const double spacing = param(file.experiment, "spacing_ms", 5);

  std::vector<Job> jobs;
  std::vector<std::pair<double, double>> configs;
  for (double n : counts) {
    for (double rate : rates) {
      Job j{"C flows=" + num(n) + " rate=" + num(rate), base, base.seed};
      j.scenario.flows.clear();
      for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k)
        j.scenario.flows.push_back(make_flow(j.scenario, "f" + std::to_string(k + 1), mn, mn.interfaces.front().name,
                                             rate, start + static_cast<double>(k) * spacing,
                                             static_cast<std::uint16_t>(5001 + k)));
      jobs.push_back(std::move(j));
      configs.emplace_back(n, rate);
    }
  }
  ExperimentResult res;
  res.preset = Preset::C;
  struct Out {
    Stats lma, mag;
  };
  std::function<Out(std::size_t, RunResult&)> reduce = [](std::size_t, RunResult& r) {
    std::vector<Cost> lma_costs, mag_costs;
    for (const auto& s : r.lma.samples) lma_costs.push_back(s.cost);
    for (const auto& [id, st] : r.mags)
      for (const auto& s : st.samples) mag_costs.push_back(s.cost);
    return Out{stats_of(lma_costs), stats_of(mag_costs)};
  };
  const auto outs = run_jobs(jobs, threads, reduce, res.trace);
  auto& t = res.metrics.add_family("c_costs",
                                   {"flows", "rate_kbps", "entity", "samples", "mean", "variance", "min", "max"});
  auto& cmp = res.metrics.add_family("c_compare", {"flows", "rate_kbps", "lma_mean", "mag_mean", "ratio"});
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto [n, rate] = configs[i];
    for (const auto& [name, st] : {std::pair{"lma", outs[i].lma}, std::pair{"mag", outs[i].mag}})
      t.add({static_cast<std::int64_t>(n), rate, std::string(name), i64(st.n), st.mean, st.variance, st.min, st.max});
    cmp.add({static_cast<std::int64_t>(n), rate, outs[i].lma.mean, outs[i].mag.mean,
             outs[i].mag.mean > 0 ? outs[i].lma.mean / outs[i].mag.mean : 0.0});
  }
  res.runs = jobs.size();
  return res;
}

// ---- D: flow-mobility overhead ------------------------------------------------

ExperimentResult preset_d(const ScenarioFile& file, unsigned threads) {
  auto sc = file.scenario;
  if (sc.mags.empty()) throw ScenarioInvalid(0, "preset D needs a mag");
  const std::size_t k = count_param(file.experiment, "mns", 10);
  const double rate = param(file.experiment, "rate_kbps", 100);
  const double attach_at = param(file.experiment, "attach_ms", 100);
  const double attach_gap = param(file.experiment, "attach_gap_ms", 10);
  const double flow_at = param(file.experiment, "flow_start_ms", 1000);
  const double flow_gap = param(file.experiment, "flow_gap_ms", 10);
  if (k == 0 || k > 0xffff) throw ScenarioInvalid(0, "experiment.mns: expected 1..65535");

  sc.mns.clear();
  sc.flows.clear();
  sc.timeline.clear();
  for (std::size_t i = 0; i < k; ++i) {
    netsim::MnSpec mn;
    mn.id = NodeId{"mn" + std::to_string(i + 1)};
    mn.nai = MnId{mn.id.value + "@lmd"};
    char addr[32];
    std::snprintf(addr, sizeof addr, "02:00:00:00:%02zx:%02zx", (i + 1) >> 8, (i + 1) & 0xff);
    char prefix[48];
    std::snprintf(prefix, sizeof prefix, "2001:db8:%zx::/64", 0x100 + i);
    mn.interfaces.push_back({"if0", LinkAddr::parse(addr), Prefix::parse(prefix), 0});
    sc.mns.push_back(mn);
    sc.timeline.push_back({attach_at + static_cast<double>(i) * attach_gap, netsim::TimelineAction::Attach, mn.id,
                           "if0", sc.mags.front().access_link, 0});
  }
  for (std::size_t i = 0; i < k; ++i)
    sc.flows.push_back(make_flow(sc, "f" + std::to_string(i + 1), sc.mns[i], "if0", rate,
                                 flow_at + static_cast<double>(i) * flow_gap, 5001));

  std::vector<Job> jobs;
  for (bool enabled : {true, false}) {
    Job j{std::string("D mobility=") + (enabled ? "enabled" : "disabled"), sc, sc.seed};
    j.scenario.lma_config.flow_mobility = enabled;
    jobs.push_back(std::move(j));
  }
  ExperimentResult res;
  res.preset = Preset::D;
  struct PerFlow {
    std::string id;
    std::size_t position = 0;
    Cost cost;
    std::size_t samples = 0;
    bool uniform = true;
  };
  std::function<std::vector<PerFlow>(std::size_t, RunResult&)> reduce = [](std::size_t, RunResult& r) {
    std::vector<PerFlow> out;
    for (const auto& f : r.flows) {
      PerFlow pf;
      pf.id = f.id;
      for (const auto* s : samples_of(r, f.selector)) {
        if (!s->fast_path) continue;
        if (pf.samples == 0) {
          pf.cost = s->cost;
          pf.position = s->rule_position;
        } else if (s->cost != pf.cost || s->rule_position != pf.position) {
          pf.uniform = false;
        }
        ++pf.samples;
      }
      out.push_back(pf);
    }
    return out;
  };
  const auto outs = run_jobs(jobs, threads, reduce, res.trace);
  auto& costs = res.metrics.add_family("d_costs", {"mode", "flow", "rule_position", "cost", "samples", "uniform"});
  auto& diff = res.metrics.add_family(
      "d_diff", {"flow", "enabled_cost", "disabled_cost", "difference", "selector_match_cost", "exact"});
  const char* modes[] = {"enabled", "disabled"};
  for (std::size_t m = 0; m < 2; ++m)
    for (const auto& pf : outs[m])
      costs.add({std::string(modes[m]), pf.id, i64(pf.position), pf.cost.as_units(), i64(pf.samples),
                 i64(pf.uniform ? 1 : 0)});
  const Cost increment = sc.lma_config.selector_match_cost;
  for (std::size_t i = 0; i < outs[0].size(); ++i) {
    const auto& on = outs[0][i];
    const auto& off = outs[1][i];
    const Cost d = on.cost - off.cost;
    const bool exact = on.samples > 0 && off.samples > 0 && on.uniform && off.uniform && d == increment;
    diff.add({on.id, on.cost.as_units(), off.cost.as_units(), d.as_units(), increment.as_units(), i64(exact ? 1 : 0)});
  }
  res.runs = jobs.size();
  return res;
}

// ---- E: handover time -------------------------------------------------------

ExperimentResult preset_e(const ScenarioFile& file, unsigned threads) {
  const auto& base = file.scenario;
  const auto& mn = first_mn(base);
  if (mn.interfaces.size() < 2 || base.mags.size() < 2)
    throw ScenarioInvalid(0, "preset E needs an mn with two interfaces and two mags");
  const auto counts = param_list(file.experiment, "flows", {1, 10, 25, 50});
  const auto rates = param_list(file.experiment, "rates_kbps", {10, 100});
  const std::size_t reps = count_param(file.experiment, "reps", 100);
  const double start = param(file.experiment, "start_ms", 400);
  const auto& moved_iface = mn.interfaces[0].name;
  const auto& bg_iface = mn.interfaces[1].name;
  const NodeId old_mag = base.mags[0].id;
  const NodeId new_mag = base.mags[1].id;

  struct Config {
    std::size_t background;
    double rate;
    std::size_t rep;
  };
  std::vector<Job> jobs;
  std::vector<Config> configs;
  for (double n : counts) {
    for (double rate : rates) {
      Scenario sc = base;
      sc.flows.clear();
      sc.flows.push_back(make_flow(sc, "moved", mn, moved_iface, rate, start, 5000, old_mag));
      for (std::size_t b = 0; b < static_cast<std::size_t>(n); ++b)
        sc.flows.push_back(make_flow(sc, "bg" + std::to_string(b + 1), mn, bg_iface, rate, start,
                                     static_cast<std::uint16_t>(5001 + b), new_mag));
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const std::uint64_t seed = base.seed + rep;
        jobs.push_back({"E flows=" + num(n) + " rate=" + num(rate) + " rep=" + std::to_string(rep), sc, seed});
        configs.push_back({static_cast<std::size_t>(n), rate, rep});
      }
    }
  }

  ExperimentResult res;
  res.preset = Preset::E;
  struct Out {
    bool observed = false;
    HandoverEstimate h;
    std::size_t dropped_flows = 0;
    bool continuity = false;
  };
  std::function<Out(std::size_t, RunResult&)> reduce = [](std::size_t, RunResult& r) {
    Out o;
    for (const auto& f : r.flows)
      if (f.state && *f.state == lma::FlowState::Dropped) ++o.dropped_flows;
    try {
      o.h = measure_handover(r, r.flows.front().selector);
      o.observed = o.h.ground_truth_ms.has_value();
    } catch (const NoHandoverObserved&) {
      o.observed = false;
    }
    std::uint64_t last = 0;
    bool increasing = true;
    for (const auto& d : r.deliveries) {
      if (d.flow != 0) continue;
      if (d.seq <= last) increasing = false;
      last = d.seq;
    }
    o.continuity = o.observed && increasing && o.h.first_new_seq > o.h.last_old_seq;
    return o;
  };
  const auto outs = run_jobs(jobs, threads, reduce, res.trace);

  auto& t = res.metrics.add_family(
      "e_handover", {"background_flows", "rate_kbps", "rep", "seed", "observed", "period_ms", "last_old_ms",
                     "first_new_ms", "estimate_ms", "ground_truth_ms", "abs_error_ms", "last_old_seq", "first_new_seq",
                     "dropped_flows", "continuity"});
  auto& s = res.metrics.add_family("e_summary", {"background_flows", "rate_kbps", "runs", "observed",
                                                 "mean_estimate_ms", "mean_ground_truth_ms", "max_abs_error_ms",
                                                 "within_one_period"});
  struct Acc {
    std::size_t runs = 0, observed = 0, within = 0;
    double est = 0, gt = 0, max_err = 0;
  };
  std::map<std::pair<std::size_t, double>, Acc> acc;
  std::vector<std::pair<std::size_t, double>> order;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto& o = outs[i];
    const auto& c = configs[i];
    const std::pair key{c.background, c.rate};
    if (!acc.contains(key)) order.push_back(key);
    auto& a = acc[key];
    ++a.runs;
    if (o.observed) {
      const double err = std::fabs(o.h.estimate_ms - *o.h.ground_truth_ms);
      ++a.observed;
      a.est += o.h.estimate_ms;
      a.gt += *o.h.ground_truth_ms;
      a.max_err = std::max(a.max_err, err);
      if (err <= o.h.period_ms) ++a.within;
      t.add({i64(c.background), c.rate, i64(c.rep), static_cast<std::int64_t>(jobs[i].seed), std::int64_t{1},
             o.h.period_ms, o.h.last_old_ms, o.h.first_new_ms, o.h.estimate_ms, *o.h.ground_truth_ms, err,
             static_cast<std::int64_t>(o.h.last_old_seq), static_cast<std::int64_t>(o.h.first_new_seq),
             i64(o.dropped_flows), i64(o.continuity ? 1 : 0)});
    } else {
      t.add({i64(c.background), c.rate, i64(c.rep), static_cast<std::int64_t>(jobs[i].seed), std::int64_t{0},
             std::string(), std::string(), std::string(), std::string(), std::string(), std::string(), std::string(),
             std::string(), i64(o.dropped_flows), std::int64_t{0}});
    }
  }
  for (const auto& key : order) {
    const auto& a = acc[key];
    const double n = a.observed > 0 ? static_cast<double>(a.observed) : 1.0;
    s.add({i64(key.first), key.second, i64(a.runs), i64(a.observed), a.est / n, a.gt / n, a.max_err, i64(a.within)});
  }
  res.runs = jobs.size();
  return res;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ScenarioInvalid(0, key + ": expected a number or comma-separated numbers, got '" + text + "'");
    }
  }
  if (out.empty()) throw ScenarioInvalid(0, key + ": empty value");
  return out;
}

}  // namespace

ExperimentResult run_experiment(Preset preset, ScenarioFile file,
                                const std::vector<std::pair<std::string, std::string>>& overrides, unsigned threads) {
  for (const auto& [key, value] : overrides) {
    if (file.experiment.contains(key) || key == "reps")
      file.experiment[key] = parse_list(key, value);
    else
      apply_knob(file.scenario, key, value);
  }
  file.scenario.validate();
  switch (preset) {
    case Preset::A: return preset_a(file, threads);
    case Preset::B: return preset_b(file, threads);
    case Preset::C: return preset_c(file, threads);
    case Preset::D: return preset_d(file, threads);
    case Preset::E: return preset_e(file, threads);
  }
  throw std::logic_error("unknown preset");
}

ExperimentResult run_experiment(Preset preset, const ExperimentOptions& options) {
  return run_experiment(preset, load_scenario_file(preset_path(preset, options.preset_dir)), options.overrides,
                        options.threads);
}

}  // namespace pmipfm::harness
