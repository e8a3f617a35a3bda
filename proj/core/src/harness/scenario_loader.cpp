#include "pmipfm/harness/scenario_loader.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace pmipfm::harness {

namespace {

using netsim::FlowDirection;
using netsim::HostModel;
using netsim::SchedulerMode;
using netsim::TimelineAction;

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

[[noreturn]] void fail(const YAML::Node& n, const std::string& what) { throw ScenarioInvalid(line_of(n), what); }

double to_double(std::string_view text, const std::string& key) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end) throw ScenarioInvalid(0, key + ": expected a number, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t to_uint(std::string_view text, const std::string& key) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw ScenarioInvalid(0, key + ": expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

template <typename T>
T to_bounded(std::string_view text, const std::string& key) {
  const auto v = to_uint(text, key);
  if (v > std::numeric_limits<T>::max()) throw ScenarioInvalid(0, key + ": value out of range");
  return static_cast<T>(v);
}

bool to_bool(std::string_view text, const std::string& key) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ScenarioInvalid(0, key + ": expected a boolean, got '" + std::string(text) + "'");
}

Cost to_cost(std::string_view text, const std::string& key) {
  const double v = to_double(text, key);
  if (v < 0.0) throw ScenarioInvalid(0, key + ": cost must be non-negative");
  return Cost::units(v);
}

SimDuration to_ms_duration(std::string_view text, const std::string& key) {
  const double v = to_double(text, key);
  if (v < 0.0) throw ScenarioInvalid(0, key + ": duration must be non-negative");
  return from_ms(v);
}

using KnobSetter = std::function<void(Scenario&, std::string_view, const std::string&)>;

const std::map<std::string, KnobSetter>& knob_table() {
  static const std::map<std::string, KnobSetter> table = [] {
    std::map<std::string, KnobSetter> t;
    t["seed"] = [](Scenario& s, std::string_view v, const std::string& k) { s.seed = to_uint(v, k); };
    t["horizon_ms"] = [](Scenario& s, std::string_view v, const std::string& k) { s.horizon_ms = to_double(v, k); };
    t["d_detect_ms"] = [](Scenario& s, std::string_view v, const std::string& k) { s.d_detect_ms = to_double(v, k); };
    t["default_latency_ms"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.default_latency_ms = to_double(v, k);
    };
    t["wireless_loss"] = [](Scenario& s, std::string_view v, const std::string& k) { s.wireless_loss = to_double(v, k); };
    t["flow_jitter_ms"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.flow_jitter_ms = to_double(v, k);
    };
    t["prefill_rules"] = [](Scenario& s, std::string_view v, const std::string& k) { s.prefill_rules = to_uint(v, k); };
    t["trace_packets"] = [](Scenario& s, std::string_view v, const std::string& k) { s.trace_packets = to_bool(v, k); };
    t["cost_unit_us"] = [](Scenario& s, std::string_view v, const std::string& k) {
      const double u = to_double(v, k);
      if (u < 0.0) throw ScenarioInvalid(0, k + ": must be non-negative");
      s.lma_config.cost_unit_us = u;
      s.mag_defaults.cost_unit_us = u;
    };
    t["install_unit_us"] = [](Scenario& s, std::string_view v, const std::string& k) {
      const double u = to_double(v, k);
      if (u < 0.0) throw ScenarioInvalid(0, k + ": must be non-negative");
      s.lma_config.install_unit_us = u;
    };
    t["base_kernel_cost"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.base_kernel_cost = to_cost(v, k);
    };
    t["scan_cost_per_rule"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.scan_cost_per_rule = to_cost(v, k);
    };
    t["selector_match_cost"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.selector_match_cost = to_cost(v, k);
    };
    t["divert_cost"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.divert_cost = to_cost(v, k);
    };
    t["install_cost_base"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.install_cost_base = to_cost(v, k);
    };
    t["install_cost_per_rule"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.install_cost_per_rule = to_cost(v, k);
    };
    t["max_bces"] = [](Scenario& s, std::string_view v, const std::string& k) { s.lma_config.max_bces = to_uint(v, k); };
    t["flow_mobility"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.lma_config.flow_mobility = to_bool(v, k);
    };
    t["mag_forward_cost"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.forward_cost = to_cost(v, k);
    };
    t["lifetime_s"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.lifetime_s = to_bounded<std::uint16_t>(v, k);
    };
    t["renewal_margin_s"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.renewal_margin = to_ms_duration(v, k) * 1000;
    };
    t["probe_timeout_ms"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.probe_timeout = to_ms_duration(v, k);
    };
    t["probe_retries"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.probe_retries = to_bounded<std::uint16_t>(v, k);
    };
    t["lifetime_tick_ms"] = [](Scenario& s, std::string_view v, const std::string& k) {
      const auto d = to_ms_duration(v, k);
      if (d.count() == 0) throw ScenarioInvalid(0, k + ": must be positive");
      s.mag_defaults.tick = d;
    };
    t["pba_timeout_ms"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.pba_timeout = to_ms_duration(v, k);
    };
    t["pbu_retransmissions"] = [](Scenario& s, std::string_view v, const std::string& k) {
      s.mag_defaults.pbu_retransmissions = to_bounded<std::uint16_t>(v, k);
    };
    t["detection"] = [](Scenario& s, std::string_view v, const std::string& k) {
      if (v == "mih")
        s.mag_defaults.detection = mag::DetectionSource::Mih;
      else if (v == "syslog")
        s.mag_defaults.detection = mag::DetectionSource::Syslog;
      else
        throw ScenarioInvalid(0, k + ": expected 'mih' or 'syslog'");
    };
    t["scheduler"] = [](Scenario& s, std::string_view v, const std::string& k) {
      if (v == "pinned")
        s.scheduler = SchedulerMode::Pinned;
      else if (v == "random")
        s.scheduler = SchedulerMode::Random;
      else
        throw ScenarioInvalid(0, k + ": expected 'pinned' or 'random'");
    };
    return t;
  }();
  return table;
}

std::string scalar(const YAML::Node& n, const std::string& key) {
  if (!n.IsScalar()) fail(n, key + ": expected a scalar");
  return n.Scalar();
}

/// Field access with strict key checking for one mapping node.
class Fields {
 public:
  Fields(const YAML::Node& node, std::string what) : node_(node), what_(std::move(what)) {
    if (!node.IsMap()) fail(node, what_ + ": expected a mapping");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return static_cast<bool>(node_[key]);
  }

  YAML::Node get(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  std::string str(const std::string& key) {
    if (!has(key)) fail(node_, what_ + ": missing '" + key + "'");
    return scalar(node_[key], what_ + "." + key);
  }

  std::string str_or(const std::string& key, std::string fallback) {
    return has(key) ? scalar(node_[key], what_ + "." + key) : std::move(fallback);
  }

  template <typename F>
  auto parse(const std::string& key, F&& f) {
    const auto n = node_[key];
    seen_.insert(key);
    if (!n) fail(node_, what_ + ": missing '" + key + "'");
    try {
      return f(scalar(n, key));
    } catch (const ScenarioInvalid& e) {
      throw ScenarioInvalid(line_of(n), what_ + ": " + e.detail());
    } catch (const std::exception& e) {
      throw ScenarioInvalid(line_of(n), what_ + "." + key + ": " + e.what());
    }
  }

  void finish() {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.contains(key)) fail(kv.first, what_ + ": unknown key '" + key + "'");
    }
  }

  int line() const { return line_of(node_); }

 private:
  const YAML::Node node_;
  std::string what_;
  std::set<std::string> seen_;
};

std::vector<NodeId> node_list(const YAML::Node& n, const std::string& what) {
  std::vector<NodeId> out;
  if (!n) return out;
  if (!n.IsSequence()) fail(n, what + ": expected a list");
  for (const auto& e : n) out.push_back(NodeId{scalar(e, what)});
  return out;
}

void load_knobs(Scenario& s, const YAML::Node& n) {
  if (!n.IsMap()) fail(n, "knobs: expected a mapping");
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    const auto& table = knob_table();
    const auto it = table.find(key);
    if (it == table.end() || key == "seed" || key == "horizon_ms") fail(kv.first, "knobs: unknown knob '" + key + "'");
    try {
      it->second(s, scalar(kv.second, key), key);
    } catch (const ScenarioInvalid& e) {
      throw ScenarioInvalid(line_of(kv.second), "knobs: " + e.detail());
    }
  }
}

void load_scheduler(Scenario& s, const YAML::Node& n) {
  Fields f(n, "scheduler");
  const auto mode = f.str_or("mode", "pinned");
  if (mode == "pinned")
    s.scheduler = SchedulerMode::Pinned;
  else if (mode == "random")
    s.scheduler = SchedulerMode::Random;
  else
    fail(f.get("mode"), "scheduler.mode: expected 'pinned' or 'random'");
  s.preference = node_list(f.get("preference"), "scheduler.preference");
  f.finish();
}

std::set<MnId> nai_list(const YAML::Node& n, const std::string& what) {
  std::set<MnId> out;
  if (!n) return out;
  if (!n.IsSequence()) fail(n, what + ": expected a list");
  for (const auto& e : n) out.insert(MnId{scalar(e, what)});
  return out;
}

netsim::MagSpec load_mag(const YAML::Node& n) {
  Fields f(n, "mag");
  netsim::MagSpec m;
  m.line = f.line();
  m.id = NodeId{f.str("id")};
  m.host = f.str_or("host", "");
  m.access_link = LinkId{f.str("access_link")};
  m.technology = f.str_or("technology", m.technology);
  if (f.has("access_latency_ms"))
    m.access_latency_ms = f.parse("access_latency_ms", [](const std::string& v) { return to_double(v, "access_latency_ms"); });
  f.finish();
  return m;
}

netsim::MnSpec load_mn(const YAML::Node& n) {
  Fields f(n, "mn");
  netsim::MnSpec m;
  m.line = f.line();
  m.id = NodeId{f.str("id")};
  m.nai = MnId{f.str_or("nai", m.id.value + "@lmd")};
  const auto model = f.str_or("host_model", "weak-host");
  if (model == "weak-host")
    m.host_model = HostModel::WeakHost;
  else if (model == "logical-interface")
    m.host_model = HostModel::LogicalInterface;
  else
    fail(f.get("host_model"), "mn.host_model: expected 'weak-host' or 'logical-interface'");
  if (f.has("responsive")) m.responsive = f.parse("responsive", [](const std::string& v) { return to_bool(v, "responsive"); });
  if (f.has("lifetime_s"))
    m.lifetime_s = f.parse("lifetime_s", [](const std::string& v) { return to_bounded<std::uint16_t>(v, "lifetime_s"); });
  const auto ifaces = f.get("interfaces");
  if (!ifaces || !ifaces.IsSequence()) fail(n, "mn '" + m.id.value + "': 'interfaces' must be a list");
  for (const auto& i : ifaces) {
    Fields fi(i, "interface");
    netsim::MnInterfaceSpec spec;
    spec.line = fi.line();
    spec.name = fi.str("name");
    spec.addr = fi.parse("addr", [](const std::string& v) { return LinkAddr::parse(v); });
    spec.hnp = fi.parse("hnp", [](const std::string& v) { return Prefix::parse(v); });
    fi.finish();
    m.interfaces.push_back(std::move(spec));
  }
  f.finish();
  return m;
}

netsim::CnSpec load_cn(const YAML::Node& n) {
  Fields f(n, "cn");
  netsim::CnSpec c;
  c.line = f.line();
  c.id = NodeId{f.str("id")};
  c.address = f.parse("address", [](const std::string& v) { return Ipv6Address::parse(v); });
  f.finish();
  return c;
}

netsim::WiredLinkSpec load_link(const YAML::Node& n) {
  Fields f(n, "link");
  netsim::WiredLinkSpec l;
  l.line = f.line();
  l.a = NodeId{f.str("a")};
  l.b = NodeId{f.str("b")};
  l.id = LinkId{f.str_or("id", l.a.value + "-" + l.b.value)};
  if (f.has("latency_ms"))
    l.latency_ms = f.parse("latency_ms", [](const std::string& v) { return to_double(v, "latency_ms"); });
  f.finish();
  return l;
}

netsim::FlowSpec load_flow(const YAML::Node& n) {
  Fields f(n, "flow");
  netsim::FlowSpec fl;
  fl.line = f.line();
  fl.id = f.str("id");
  fl.cn = NodeId{f.str("cn")};
  fl.mn = NodeId{f.str("mn")};
  fl.iface = f.str("iface");
  const auto dir = f.str_or("direction", "downlink");
  if (dir == "downlink")
    fl.direction = FlowDirection::Downlink;
  else if (dir == "uplink")
    fl.direction = FlowDirection::Uplink;
  else
    fail(f.get("direction"), "flow.direction: expected 'downlink' or 'uplink'");
  auto num = [&](const char* key) { return f.parse(key, [key](const std::string& v) { return to_double(v, key); }); };
  if (f.has("rate_kbps")) fl.rate_kbps = num("rate_kbps");
  if (f.has("size")) fl.size = f.parse("size", [](const std::string& v) { return to_bounded<std::uint32_t>(v, "size"); });
  if (f.has("start_ms")) fl.start_ms = num("start_ms");
  if (f.has("stop_ms")) fl.stop_ms = num("stop_ms");
  if (f.has("src_port"))
    fl.src_port = f.parse("src_port", [](const std::string& v) { return to_bounded<std::uint16_t>(v, "src_port"); });
  if (f.has("dst_port"))
    fl.dst_port = f.parse("dst_port", [](const std::string& v) { return to_bounded<std::uint16_t>(v, "dst_port"); });
  if (f.has("protocol"))
    fl.protocol = f.parse("protocol", [](const std::string& v) { return to_bounded<std::uint8_t>(v, "protocol"); });
  if (f.has("flow_label"))
    fl.flow_label = f.parse("flow_label", [](const std::string& v) { return to_bounded<std::uint32_t>(v, "flow_label"); });
  if (f.has("via")) fl.via = NodeId{f.str("via")};
  f.finish();
  return fl;
}

netsim::TimelineEvent load_event(const YAML::Node& n) {
  Fields f(n, "timeline");
  netsim::TimelineEvent ev;
  ev.line = f.line();
  ev.at_ms = f.parse("at_ms", [](const std::string& v) { return to_double(v, "at_ms"); });
  const auto action = f.str("action");
  if (action == "attach") {
    ev.action = TimelineAction::Attach;
    ev.mn = NodeId{f.str("mn")};
    ev.iface = f.str("iface");
    ev.link = LinkId{f.str("link")};
  } else if (action == "detach") {
    ev.action = TimelineAction::Detach;
    ev.mn = NodeId{f.str("mn")};
    ev.iface = f.str("iface");
  } else if (action == "link_down" || action == "link_up") {
    ev.action = action == "link_down" ? TimelineAction::LinkDown : TimelineAction::LinkUp;
    ev.link = LinkId{f.str("link")};
  } else {
    fail(f.get("action"), "timeline.action: expected attach, detach, link_down or link_up");
  }
  f.finish();
  return ev;
}

ExperimentParams load_experiment(const YAML::Node& n) {
  if (!n.IsMap()) fail(n, "experiment: expected a mapping");
  ExperimentParams out;
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    std::vector<double> values;
    if (kv.second.IsSequence()) {
      for (const auto& e : kv.second) {
        try {
          values.push_back(to_double(scalar(e, key), key));
        } catch (const ScenarioInvalid& err) {
          throw ScenarioInvalid(line_of(e), "experiment: " + err.detail());
        }
      }
    } else {
      try {
        values.push_back(to_double(scalar(kv.second, key), key));
      } catch (const ScenarioInvalid& err) {
        throw ScenarioInvalid(line_of(kv.second), "experiment: " + err.detail());
      }
    }
    out[key] = std::move(values);
  }
  return out;
}

template <typename T, typename F>
void load_list(const YAML::Node& n, const std::string& what, std::vector<T>& out, F&& each) {
  if (!n) return;
  if (!n.IsSequence()) fail(n, what + ": expected a list");
  for (const auto& e : n) out.push_back(each(e));
}

ScenarioFile parse_root(const YAML::Node& root) {
  ScenarioFile file;
  auto& s = file.scenario;
  if (root.IsNull()) {
    s.validate();
    return file;
  }
  Fields f(root, "scenario");
  s.name = f.str_or("name", "");
  if (f.has("seed")) s.seed = f.parse("seed", [](const std::string& v) { return to_uint(v, "seed"); });
  if (f.has("horizon_ms")) s.horizon_ms = f.parse("horizon_ms", [](const std::string& v) { return to_double(v, "horizon_ms"); });
  if (f.has("knobs")) load_knobs(s, f.get("knobs"));
  if (f.has("scheduler")) load_scheduler(s, f.get("scheduler"));
  if (f.has("lma")) {
    Fields l(f.get("lma"), "lma");
    s.lma = NodeId{l.str_or("id", s.lma.value)};
    s.lma_config.denied = nai_list(l.get("deny"), "lma.deny");
    l.finish();
  }
  if (f.has("aaa")) {
    Fields a(f.get("aaa"), "aaa");
    s.aaa = NodeId{a.str_or("id", s.aaa.value)};
    s.aaa_denied = nai_list(a.get("deny"), "aaa.deny");
    a.finish();
  }
  load_list(f.get("mags"), "mags", s.mags, load_mag);
  load_list(f.get("mns"), "mns", s.mns, load_mn);
  load_list(f.get("cns"), "cns", s.cns, load_cn);
  load_list(f.get("links"), "links", s.links, load_link);
  load_list(f.get("flows"), "flows", s.flows, load_flow);
  load_list(f.get("timeline"), "timeline", s.timeline, load_event);
  if (f.has("experiment")) file.experiment = load_experiment(f.get("experiment"));
  f.finish();
  s.validate();
  return file;
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text, std::string_view origin) {
  const std::string where(origin);
  try {
    return parse_root(YAML::Load(std::string(text)));
  } catch (const YAML::Exception& e) {
    throw ScenarioInvalid(e.mark.is_null() ? 0 : e.mark.line + 1, e.msg, where);
  } catch (const ScenarioInvalid& e) {
    throw ScenarioInvalid(e.line(), e.detail(), where);
  }
}

ScenarioFile load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioInvalid(0, "cannot read scenario file", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path.string());
}

Scenario load_scenario(const std::filesystem::path& path) { return load_scenario_file(path).scenario; }

void apply_knob(Scenario& scenario, std::string_view key, std::string_view value) {
  const auto& table = knob_table();
  const auto it = table.find(std::string(key));
  if (it == table.end()) throw ScenarioInvalid(0, "unknown knob '" + std::string(key) + "'");
  it->second(scenario, value, std::string(key));
}

std::vector<std::string> knob_names() {
  std::vector<std::string> out;
  for (const auto& [k, _] : knob_table()) out.push_back(k);
  return out;
}

}  // namespace pmipfm::harness
