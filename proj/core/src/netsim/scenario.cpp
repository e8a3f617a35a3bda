#include "pmipfm/netsim/scenario.hpp"

#include <cmath>
#include <map>

namespace pmipfm::netsim {

namespace {

std::string located(int line, const std::string& what, const std::string& origin) {
  std::string out = origin.empty() ? "" : origin + ": ";
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  return out + what;
}

[[noreturn]] void fail(int line, const std::string& what) { throw ScenarioInvalid(line, what); }

void require_latency(double ms, int line, const std::string& element) {
  if (!std::isfinite(ms) || ms < 0.0) fail(line, element + ": negative or non-finite latency");
}

std::uint64_t low64(const InterfaceId& id) {
  std::uint64_t v = 0;
  for (auto b : id.bytes) v = (v << 8) | b;
  return v;
}

}  // namespace

ScenarioInvalid::ScenarioInvalid(int line, const std::string& detail, const std::string& origin)
    : std::runtime_error(located(line, detail, origin)), line_(line), detail_(detail) {}

std::string_view to_string(HostModel model) {
  return model == HostModel::WeakHost ? "weak-host" : "logical-interface";
}

std::string_view to_string(TimelineAction action) {
  switch (action) {
    case TimelineAction::Attach: return "attach";
    case TimelineAction::Detach: return "detach";
    case TimelineAction::LinkDown: return "link_down";
    case TimelineAction::LinkUp: return "link_up";
  }
  return "?";
}

const MnInterfaceSpec* MnSpec::find_interface(std::string_view name) const {
  for (const auto& i : interfaces)
    if (i.name == name) return &i;
  return nullptr;
}

NodeId MagSpec::mihf() const { return NodeId{"mihf-" + (host.empty() ? id.value : host)}; }

NodeId MagSpec::sap() const { return NodeId{"sap-" + access_link.value}; }

SimDuration FlowSpec::period() const {
  return SimDuration{static_cast<std::int64_t>(std::llround(size * 8.0 * 1000.0 / rate_kbps))};
}

Ipv6Address interface_address(const MnInterfaceSpec& iface) {
  return iface.hnp.host(low64(eui64_from_link_addr(iface.addr)));
}

const MnSpec* Scenario::find_mn(const NodeId& id) const {
  for (const auto& m : mns)
    if (m.id == id) return &m;
  return nullptr;
}

const MagSpec* Scenario::find_mag(const NodeId& id) const {
  for (const auto& m : mags)
    if (m.id == id) return &m;
  return nullptr;
}

const MagSpec* Scenario::find_mag_by_link(const LinkId& link) const {
  for (const auto& m : mags)
    if (m.access_link == link) return &m;
  return nullptr;
}

const CnSpec* Scenario::find_cn(const NodeId& id) const {
  for (const auto& c : cns)
    if (c.id == id) return &c;
  return nullptr;
}

void Scenario::validate() const {
  if (!std::isfinite(horizon_ms) || horizon_ms < 0.0) fail(0, "horizon_ms must be non-negative");
  if (!std::isfinite(d_detect_ms) || d_detect_ms < 0.0) fail(0, "d_detect_ms must be non-negative");
  require_latency(default_latency_ms, 0, "default_latency_ms");
  if (!(wireless_loss >= 0.0 && wireless_loss <= 1.0)) fail(0, "wireless_loss must lie in [0, 1]");
  if (!(flow_jitter_ms >= 0.0)) fail(0, "flow_jitter_ms must be non-negative");
  if (mag_defaults.detection == mag::DetectionSource::Syslog)
    fail(0, "detection 'syslog' is disabled; only 'mih' is available");

  std::map<NodeId, int> ids;
  auto claim = [&](const NodeId& id, int line, const std::string& what) {
    if (id.value.empty()) fail(line, what + ": empty id");
    const auto [it, fresh] = ids.emplace(id, line);
    if (!fresh) fail(line, what + " '" + id.value + "' duplicates an id declared at line " + std::to_string(it->second));
  };
  claim(lma, 0, "lma");
  claim(aaa, 0, "aaa");

  std::map<LinkId, const MagSpec*> access_links;
  std::set<NodeId> mihfs;
  for (const auto& m : mags) {
    claim(m.id, m.line, "mag");
    require_latency(m.access_latency_ms, m.line, "mag '" + m.id.value + "'");
    if (m.access_link.value.empty()) fail(m.line, "mag '" + m.id.value + "': missing access_link");
    if (!access_links.emplace(m.access_link, &m).second)
      fail(m.line, "access link '" + m.access_link.value + "' is bound to more than one mag");
    claim(m.sap(), m.line, "link sap");
    mihfs.insert(m.mihf());
  }
  for (const auto& id : mihfs) claim(id, 0, "mihf");

  std::map<LinkAddr, std::string> addrs;
  std::set<MnId> nais;
  std::vector<std::pair<Prefix, std::pair<std::string, int>>> prefixes;
  for (const auto& mn : mns) {
    claim(mn.id, mn.line, "mn");
    if (mn.nai.empty()) fail(mn.line, "mn '" + mn.id.value + "': empty nai");
    if (!nais.insert(mn.nai).second) fail(mn.line, "mn '" + mn.id.value + "': duplicate nai " + mn.nai.value);
    if (mn.interfaces.empty()) fail(mn.line, "mn '" + mn.id.value + "' has no interfaces");
    std::set<std::string> names;
    for (const auto& i : mn.interfaces) {
      const std::string owner = mn.id.value + "." + i.name;
      if (!names.insert(i.name).second) fail(i.line, "duplicate interface " + owner);
      if (!addrs.emplace(i.addr, owner).second)
        fail(i.line, "link address " + i.addr.to_string() + " of " + owner + " already used by " + addrs[i.addr]);
      if (!i.hnp.is_canonical()) fail(i.line, owner + ": prefix has host bits set");
      if (i.hnp.length != 64) fail(i.line, owner + ": home network prefix must be a /64");
      for (const auto& [p, other] : prefixes) {
        if (p.overlaps(i.hnp))
          fail(i.line, "prefix " + i.hnp.to_string() + " of " + owner + " overlaps " + p.to_string() + " of " +
                           other.first + " (line " + std::to_string(other.second) + ")");
      }
      prefixes.push_back({i.hnp, {owner, i.line}});
    }
  }

  for (const auto& cn : cns) {
    claim(cn.id, cn.line, "cn");
    for (const auto& [p, owner] : prefixes)
      if (p.contains(cn.address))
        fail(cn.line, "cn '" + cn.id.value + "' address lies inside " + owner.first + "'s prefix");
  }

  std::set<LinkId> link_ids;
  for (const auto& l : links) {
    if (!ids.contains(l.a)) fail(l.line, "link '" + l.id.value + "': unknown endpoint '" + l.a.value + "'");
    if (!ids.contains(l.b)) fail(l.line, "link '" + l.id.value + "': unknown endpoint '" + l.b.value + "'");
    if (l.a == l.b) fail(l.line, "link '" + l.id.value + "' connects a node to itself");
    require_latency(l.latency_ms, l.line, "link '" + l.id.value + "'");
    if (access_links.contains(l.id) || !link_ids.insert(l.id).second)
      fail(l.line, "duplicate link id '" + l.id.value + "'");
  }

  for (const auto& p : preference)
    if (find_mag(p) == nullptr) fail(0, "scheduler preference names unknown mag '" + p.value + "'");

  std::set<TrafficSelector> selectors;
  std::set<std::string> flow_ids;
  for (const auto& f : flows) {
    const std::string what = "flow '" + f.id + "'";
    if (f.id.empty() || !flow_ids.insert(f.id).second) fail(f.line, what + ": missing or duplicate id");
    const auto* cn = find_cn(f.cn);
    if (cn == nullptr) fail(f.line, what + ": unknown cn '" + f.cn.value + "'");
    const auto* mn = find_mn(f.mn);
    if (mn == nullptr) fail(f.line, what + ": unknown mn '" + f.mn.value + "'");
    const auto* iface = mn->find_interface(f.iface);
    if (iface == nullptr) fail(f.line, what + ": unknown interface '" + f.iface + "'");
    if (!(f.rate_kbps > 0.0) || f.size == 0) fail(f.line, what + ": rate and size must be positive");
    if (f.period().count() <= 0) fail(f.line, what + ": period rounds to zero");
    if (!(f.start_ms >= 0.0)) fail(f.line, what + ": negative start");
    if (f.stop_ms && *f.stop_ms < f.start_ms) fail(f.line, what + ": stop before start");
    if (f.flow_label >= (1u << 20)) fail(f.line, what + ": flow label exceeds 20 bits");
    if (f.via && find_mag(*f.via) == nullptr) fail(f.line, what + ": via names unknown mag '" + f.via->value + "'");
    TrafficSelector sel;
    const auto mn_addr = interface_address(*iface);
    sel.src_addr = f.direction == FlowDirection::Downlink ? cn->address : mn_addr;
    sel.dst_addr = f.direction == FlowDirection::Downlink ? mn_addr : cn->address;
    sel.src_port = f.src_port;
    sel.dst_port = f.dst_port;
    sel.protocol = f.protocol;
    sel.flow_label = f.flow_label;
    if (!selectors.insert(sel).second) fail(f.line, what + ": same 6-tuple as an earlier flow");
  }

  for (const auto& ev : timeline) {
    const std::string what = "timeline " + std::string(to_string(ev.action));
    if (!(ev.at_ms >= 0.0) || ev.at_ms > horizon_ms) fail(ev.line, what + ": time outside [0, horizon]");
    switch (ev.action) {
      case TimelineAction::Attach:
      case TimelineAction::Detach: {
        const auto* mn = find_mn(ev.mn);
        if (mn == nullptr) fail(ev.line, what + ": unknown mn '" + ev.mn.value + "'");
        if (mn->find_interface(ev.iface) == nullptr) fail(ev.line, what + ": unknown interface '" + ev.iface + "'");
        if (ev.action == TimelineAction::Attach && !access_links.contains(ev.link))
          fail(ev.line, what + ": unknown access link '" + ev.link.value + "'");
        break;
      }
      case TimelineAction::LinkDown:
      case TimelineAction::LinkUp:
        if (!access_links.contains(ev.link) && !link_ids.contains(ev.link))
          fail(ev.line, what + ": unknown link '" + ev.link.value + "'");
        break;
    }
  }
}

}  // namespace pmipfm::netsim
