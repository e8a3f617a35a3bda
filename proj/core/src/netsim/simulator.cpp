#include "pmipfm/netsim/simulator.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <utility>

#include "pmipfm/core/codec.hpp"
#include "pmipfm/netsim/event_queue.hpp"

namespace pmipfm::netsim {

std::vector<std::string> RunResult::trace_lines() const {
  std::vector<std::string> out;
  out.reserve(trace.size());
  for (const auto& r : trace) out.push_back(format_trace_line(r));
  return out;
}

std::string RunResult::trace_text() const {
  std::string out;
  for (const auto& r : trace) {
    out += format_trace_line(r);
    out += '\n';
  }
  return out;
}

namespace {

enum class Role { Lma, Mag, Mihf, Sap, Aaa, Mn, Cn };

/// Answers AAA queries from the scenario's interface table.
class AaaServer {
 public:
  struct Record {
    MnId mn;
    Prefix hnp;
  };

  AaaServer(Context& ctx, std::map<LinkAddr, Record> table, std::set<MnId> denied)
      : ctx_(ctx), table_(std::move(table)), denied_(std::move(denied)) {}

  void on_message(const ProtocolMessage& msg) {
    if (msg.kind != MessageKind::AaaRequest) return;
    const auto& req = msg.as<AaaRequestBody>();
    AaaResponseBody resp{req.interface_id, false, {}, {}};
    const auto it = table_.find(req.link_addr);
    if (it != table_.end() && eui64_from_link_addr(req.link_addr) == req.interface_id) {
      resp.mn_id = it->second.mn;
      if (!denied_.contains(it->second.mn)) {
        resp.authorized = true;
        resp.hnp = {it->second.hnp};
      }
    }
    ctx_.send(ProtocolMessage::make(MessageKind::AaaResponse, std::move(resp), ctx_.self(), msg.src));
  }

 private:
  Context& ctx_;
  std::map<LinkAddr, Record> table_;
  std::set<MnId> denied_;
};

SimDuration ms(double v) { return from_ms(v); }

}  // namespace

struct Simulator::Impl {
  struct EntityCtx final : Context {
    Impl& sim;
    NodeId id;
    EntityCtx(Impl& s, NodeId n) : sim(s), id(std::move(n)) {}
    const NodeId& self() const override { return id; }
    SimTime now() const override { return sim.now; }
    void send(ProtocolMessage msg) override { sim.send(id, std::move(msg)); }
    void forward(Packet pkt, const NodeId& next_hop, SimDuration hold) override {
      sim.queue.push(sim.now + hold, [this, pkt = std::move(pkt), next_hop]() mutable {
        sim.transmit(id, next_hop, std::move(pkt));
      });
    }
    void drop(const Packet& pkt, DropReason reason) override { sim.record_drop(pkt, reason, id); }
    void schedule(SimDuration delay, std::function<void()> action) override {
      sim.queue.push(sim.now + delay, std::move(action));
    }
    void trace(std::string kind, TraceFields fields) override {
      sim.result.trace.push_back(TraceRecord{sim.now, id, std::move(kind), std::move(fields)});
    }
  };

  struct LinkState {
    double latency_ms = 0.0;
    bool up = true;
    std::uint64_t epoch = 0;
    bool access = false;
    NodeId mag;
  };

  struct Route {
    LinkId link;
    NodeId dest;
    std::string iface;
  };

  struct Station {
    NodeId mn;
    std::string iface;
    LinkAddr addr;
  };

  struct FlowRuntime {
    FlowSpec spec;
    TrafficSelector selector;
    SimDuration period{};
    SimTime start{};
    SimTime stop{};
    std::uint64_t next_seq = 1;
  };

  Scenario sc;
  std::uint64_t seed;
  EventQueue queue;
  SimTime now{};
  SimTime horizon{};
  bool ran = false;
  std::mt19937_64 loss_rng;
  RunResult result;

  std::map<NodeId, std::unique_ptr<EntityCtx>> ctxs;
  std::map<NodeId, Role> roles;
  std::unique_ptr<lma::Lma> lma;
  std::map<NodeId, std::unique_ptr<mag::Mag>> mags;
  std::map<NodeId, std::unique_ptr<mih::Mihf>> mihfs;
  std::map<LinkId, std::unique_ptr<mih::LinkSap>> saps;
  std::unique_ptr<AaaServer> aaa;
  std::map<NodeId, std::unique_ptr<MobileNode>> mns;

  std::map<LinkId, LinkState> links;
  std::map<std::pair<NodeId, NodeId>, LinkId> wired;
  std::map<std::string, Station> stations;  // keyed by link address text
  std::map<std::pair<NodeId, std::string>, LinkId> assoc;
  std::map<Ipv6Address, NodeId> cn_by_addr;
  std::map<NodeId, Ipv6Address> cn_addr;

  std::vector<FlowRuntime> flows;
  std::map<TrafficSelector, std::size_t> flow_by_sel;
  std::set<std::pair<std::size_t, std::uint64_t>> in_flight;

  Impl(Scenario s, std::uint64_t sd) : sc(std::move(s)), seed(sd), loss_rng(sd ^ 0x9e3779b97f4a7c15ULL) {
    sc.validate();
    horizon = kSimEpoch + ms(sc.horizon_ms);
    result.seed = seed;
    result.horizon = horizon;
    build();
  }

  EntityCtx& ctx_for(const NodeId& id, Role role) {
    roles[id] = role;
    auto& slot = ctxs[id];
    slot = std::make_unique<EntityCtx>(*this, id);
    return *slot;
  }

  void build() {
    const bool trace_packets = sc.trace_packets;

    // Scheduler: base policy, wrapped when flows carry a placement pin.
    lma::SchedulerPolicy base;
    if (sc.scheduler == SchedulerMode::Random)
      base = lma::RandomChoice{seed};
    else
      base = lma::Pinned{sc.preference};
    std::map<TrafficSelector, NodeId> pins;

    for (const auto& cn : sc.cns) {
      cn_by_addr[cn.address] = cn.id;
      cn_addr[cn.id] = cn.address;
      roles[cn.id] = Role::Cn;
    }

    std::mt19937_64 jitter_rng(seed);
    for (const auto& f : sc.flows) {
      const auto* mn = sc.find_mn(f.mn);
      const auto* iface = mn->find_interface(f.iface);
      FlowRuntime rt;
      rt.spec = f;
      const auto mn_addr = interface_address(*iface);
      const auto peer = sc.find_cn(f.cn)->address;
      const bool down = f.direction == FlowDirection::Downlink;
      rt.selector.src_addr = down ? peer : mn_addr;
      rt.selector.dst_addr = down ? mn_addr : peer;
      rt.selector.src_port = f.src_port;
      rt.selector.dst_port = f.dst_port;
      rt.selector.protocol = f.protocol;
      rt.selector.flow_label = f.flow_label;
      rt.period = f.period();
      SimDuration jitter{0};
      if (sc.flow_jitter_ms > 0.0) {
        const auto span = static_cast<std::uint64_t>(std::max<std::int64_t>(1, ms(sc.flow_jitter_ms).count()));
        jitter = SimDuration{static_cast<std::int64_t>(jitter_rng() % span)};
      }
      rt.start = kSimEpoch + ms(f.start_ms) + jitter;
      rt.stop = f.stop_ms ? kSimEpoch + ms(*f.stop_ms) : horizon;
      if (f.via) pins[rt.selector] = *f.via;
      flow_by_sel[rt.selector] = flows.size();
      result.flows.push_back(FlowSummary{f.id, rt.selector, f.direction, rt.period, rt.start, 0, 0, 0, std::nullopt});
      flows.push_back(std::move(rt));
    }

    lma::SchedulerPolicy policy = base;
    if (!pins.empty()) {
      auto fallback = std::make_shared<lma::FlowScheduler>(base);
      policy = lma::External{[pins, fallback](const MnId& mn, const TrafficSelector& sel,
                                              std::span<const lma::BceKey> options) -> std::optional<NodeId> {
        if (const auto it = pins.find(sel); it != pins.end())
          for (const auto& k : options)
            if (k.serving_mag == it->second) return it->second;
        return fallback->choose(mn, sel, options).serving_mag;
      }};
    }

    auto lma_cfg = sc.lma_config;
    lma_cfg.trace_packets = lma_cfg.trace_packets && trace_packets;
    lma = std::make_unique<lma::Lma>(ctx_for(sc.lma, Role::Lma), lma_cfg, std::move(policy));
    if (sc.prefill_rules > 0) lma->prefill_rules(sc.prefill_rules);

    std::map<LinkAddr, AaaServer::Record> table;
    std::map<MnId, std::uint16_t> lifetimes;
    for (const auto& mn : sc.mns) {
      for (const auto& i : mn.interfaces) {
        table[i.addr] = {mn.nai, i.hnp};
        stations[i.addr.to_string()] = Station{mn.id, i.name, i.addr};
      }
      if (mn.lifetime_s) lifetimes[mn.nai] = *mn.lifetime_s;
      mns[mn.id] = std::make_unique<MobileNode>(ctx_for(mn.id, Role::Mn), mn);
    }
    aaa = std::make_unique<AaaServer>(ctx_for(sc.aaa, Role::Aaa), std::move(table), sc.aaa_denied);

    std::map<NodeId, std::vector<mih::LinkRegistration>> registrations;
    for (const auto& m : sc.mags) {
      registrations[m.mihf()].push_back({m.access_link, m.technology, m.sap()});
      links[m.access_link] = LinkState{m.access_latency_ms, true, 0, true, m.id};
    }
    for (auto& [id, regs] : registrations) mihfs[id] = std::make_unique<mih::Mihf>(ctx_for(id, Role::Mihf), regs);

    for (const auto& m : sc.mags) {
      saps[m.access_link] =
          std::make_unique<mih::LinkSap>(ctx_for(m.sap(), Role::Sap), m.access_link, m.technology, m.mihf());
      auto cfg = sc.mag_defaults;
      cfg.access_link = m.access_link;
      cfg.lma = sc.lma;
      cfg.mihf = m.mihf();
      cfg.aaa = sc.aaa;
      cfg.trace_packets = cfg.trace_packets && trace_packets;
      for (const auto& [mn, lt] : lifetimes) cfg.lifetime_overrides[mn] = lt;
      mags[m.id] = std::make_unique<mag::Mag>(ctx_for(m.id, Role::Mag), std::move(cfg));
    }

    for (const auto& l : sc.links) {
      links[l.id] = LinkState{l.latency_ms, true, 0, false, {}};
      wired[std::minmax(l.a, l.b)] = l.id;
    }

    for (auto& [id, mag] : mags) queue.push(kSimEpoch, [m = mag.get()] { m->start(); });
    for (const auto& ev : sc.timeline) schedule_timeline(ev);
    for (std::size_t i = 0; i < flows.size(); ++i) {
      if (flows[i].start <= horizon && flows[i].start < flows[i].stop)
        queue.push(flows[i].start, [this, i] { emit(i); });
    }
  }

  // ---- control plane ---------------------------------------------------

  void sim_trace(std::string kind, TraceFields fields) {
    result.trace.push_back(TraceRecord{now, NodeId{"sim"}, std::move(kind), std::move(fields)});
  }

  const Station* station(const NodeId& id) const {
    const auto it = stations.find(id.value);
    return it == stations.end() ? nullptr : &it->second;
  }

  const LinkId* association(const NodeId& mn, const std::string& iface) const {
    const auto it = assoc.find({mn, iface});
    return it == assoc.end() ? nullptr : &it->second;
  }

  std::optional<Route> resolve(const NodeId& from, const NodeId& to) {
    if (const auto* st = station(to)) {
      const auto role = roles.find(from);
      if (role == roles.end() || role->second != Role::Mag) return std::nullopt;
      const auto* link = association(st->mn, st->iface);
      if (link == nullptr || links.at(*link).mag != from) return std::nullopt;
      return Route{*link, st->mn, st->iface};
    }
    const auto from_role = roles.find(from);
    if (from_role != roles.end() && from_role->second == Role::Mn) {
      const auto* spec = sc.find_mn(from);
      for (const auto& i : spec->interfaces) {
        const auto* link = association(from, i.name);
        if (link != nullptr && links.at(*link).mag == to) return Route{*link, to, i.name};
      }
      return std::nullopt;
    }
    if (!roles.contains(to)) return std::nullopt;
    const auto key = std::minmax(from, to);
    auto it = wired.find(key);
    if (it == wired.end()) {
      LinkId id{key.first.value + "~" + key.second.value};
      links[id] = LinkState{sc.default_latency_ms, true, 0, false, {}};
      it = wired.emplace(key, id).first;
    }
    return Route{it->second, to, {}};
  }

  void send(const NodeId& from, ProtocolMessage msg) {
    msg.src = from;
    msg.sent_at = now;
    auto bytes = std::make_shared<const std::vector<std::uint8_t>>(encode(msg));
    const auto route = resolve(from, msg.dst);
    if (!route || !links.at(route->link).up) {
      ++result.messages_lost;
      sim_trace("msg-lost", {{"type", std::string(to_string(msg.kind))},
                             {"src", from.value},
                             {"dst", msg.dst.value},
                             {"reason", route ? "link-down" : "no-route"}});
      return;
    }
    const auto& link = links.at(route->link);
    const std::uint64_t epoch = link.epoch;
    queue.push(now + ms(link.latency_ms), [this, bytes, r = *route, epoch] { receive(*bytes, r, epoch); });
  }

  void receive(const std::vector<std::uint8_t>& bytes, const Route& route, std::uint64_t epoch) {
    ProtocolMessage msg;
    try {
      msg = decode(bytes);
    } catch (const MalformedMessage& e) {
      ++result.malformed;
      sim_trace("malformed", {{"to", route.dest.value}, {"error", e.what()}});
      return;
    }
    const auto& link = links.at(route.link);
    if (!link.up || link.epoch != epoch) {
      ++result.messages_lost;
      sim_trace("msg-lost", {{"type", std::string(to_string(msg.kind))},
                             {"src", msg.src.value},
                             {"dst", msg.dst.value},
                             {"reason", "link-down"}});
      return;
    }
    ++result.messages[msg.kind];
    result.trace.push_back(TraceRecord{now,
                                       route.dest,
                                       "msg",
                                       {{"type", std::string(to_string(msg.kind))},
                                        {"src", msg.src.value},
                                        {"dst", msg.dst.value},
                                        {"sent", format_ms(msg.sent_at)},
                                        {"hex", to_hex(bytes)}}});
    switch (roles.at(route.dest)) {
      case Role::Lma: lma->on_message(msg); break;
      case Role::Mag: mags.at(route.dest)->on_message(msg); break;
      case Role::Mihf: mihfs.at(route.dest)->on_message(msg); break;
      case Role::Aaa: aaa->on_message(msg); break;
      case Role::Mn: mns.at(route.dest)->on_message(msg, route.iface); break;
      case Role::Sap:
      case Role::Cn: break;
    }
  }

  // ---- timeline ----------------------------------------------------------

  void schedule_timeline(const TimelineEvent& ev) {
    const SimTime at = kSimEpoch + ms(ev.at_ms);
    switch (ev.action) {
      case TimelineAction::Attach:
        queue.push(at, [this, ev] { attach(ev.mn, ev.iface, ev.link); });
        break;
      case TimelineAction::Detach:
        queue.push(at, [this, ev] { detach(ev.mn, ev.iface); });
        break;
      case TimelineAction::LinkDown:
        queue.push(at, [this, link = ev.link] { set_link(link, false); });
        break;
      case TimelineAction::LinkUp:
        queue.push(at, [this, link = ev.link] { set_link(link, true); });
        break;
    }
  }

  LinkAddr addr_of(const NodeId& mn, const std::string& iface) const {
    return sc.find_mn(mn)->find_interface(iface)->addr;
  }

  void after_detect(std::function<void()> action) { queue.push(now + ms(sc.d_detect_ms), std::move(action)); }

  void attach(const NodeId& mn, const std::string& iface, const LinkId& link) {
    if (const auto* old = association(mn, iface)) {
      if (*old == link) return;
      detach(mn, iface);
    }
    assoc[{mn, iface}] = link;
    sim_trace("attach", {{"mn", mn.value}, {"iface", iface}, {"link", link.value}});
    if (!links.at(link).up) return;
    const LinkAddr addr = addr_of(mn, iface);
    after_detect([this, link, addr] { saps.at(link)->attach(addr); });
  }

  void detach(const NodeId& mn, const std::string& iface) {
    const auto it = assoc.find({mn, iface});
    if (it == assoc.end()) return;
    const LinkId link = it->second;
    assoc.erase(it);
    result.link_events.push_back({now, link, false, mn, iface});
    sim_trace("detach", {{"mn", mn.value}, {"iface", iface}, {"link", link.value}});
    const LinkAddr addr = addr_of(mn, iface);
    after_detect([this, link, addr] { saps.at(link)->detach(addr); });
  }

  void set_link(const LinkId& id, bool up) {
    auto& link = links.at(id);
    if (link.up == up) return;
    link.up = up;
    if (!up) ++link.epoch;
    result.link_events.push_back({now, id, up, {}, {}});
    sim_trace(up ? "link-up" : "link-down", {{"link", id.value}});
    if (!link.access) return;
    std::vector<LinkAddr> attached;
    for (const auto& [key, l] : assoc)
      if (l == id) attached.push_back(addr_of(key.first, key.second));
    after_detect([this, id, up, attached] {
      auto& sap = *saps.at(id);
      for (const auto& a : attached) {
        if (up)
          sap.attach(a);
        else
          sap.detach(a);
      }
    });
  }

  // ---- data plane --------------------------------------------------------

  void emit(std::size_t idx) {
    auto& f = flows[idx];
    Packet pkt;
    pkt.selector = f.selector;
    pkt.size = f.spec.size;
    pkt.seq = f.next_seq++;
    pkt.created_at = now;
    const bool downlink = f.spec.direction == FlowDirection::Downlink;
    const NodeId source = downlink ? f.spec.cn : f.spec.mn;
    pkt.record_hop(source, now);
    in_flight.insert({idx, pkt.seq});
    ++result.flows[idx].emitted;
    if (sc.trace_packets)
      result.trace.push_back(TraceRecord{now, source, "emit", {{"flow", f.spec.id}, {"seq", std::to_string(pkt.seq)}}});

    const SimTime next = now + f.period;
    if (next < f.stop && next <= horizon) queue.push(next, [this, idx] { emit(idx); });

    if (downlink) {
      transmit(source, sc.lma, std::move(pkt));
      return;
    }
    const auto* link = association(f.spec.mn, f.spec.iface);
    if (link == nullptr) {
      record_drop(pkt, DropReason::LinkDown, source);
      return;
    }
    transmit(source, links.at(*link).mag, std::move(pkt));
  }

  void transmit(const NodeId& from, const NodeId& to, Packet pkt) {
    const auto route = resolve(from, to);
    if (!route || !links.at(route->link).up) {
      record_drop(pkt, DropReason::LinkDown, from);
      return;
    }
    const auto& link = links.at(route->link);
    if (link.access && sc.wireless_loss > 0.0) {
      const double u = std::uniform_real_distribution<double>(0.0, 1.0)(loss_rng);
      if (u < sc.wireless_loss) {
        record_drop(pkt, DropReason::WirelessLoss, from);
        return;
      }
    }
    const std::uint64_t epoch = link.epoch;
    queue.push(now + ms(link.latency_ms), [this, r = *route, epoch, from, pkt = std::move(pkt)]() mutable {
      const auto& l = links.at(r.link);
      if (!l.up || l.epoch != epoch) {
        record_drop(pkt, DropReason::LinkDown, from);
        return;
      }
      arrive(r, from, std::move(pkt));
    });
  }

  void arrive(const Route& route, const NodeId& from, Packet pkt) {
    pkt.record_hop(route.dest, now);
    switch (roles.at(route.dest)) {
      case Role::Lma: {
        const auto cn = cn_by_addr.find(pkt.selector.dst_addr);
        if (cn != cn_by_addr.end())
          lma->forward_uplink(std::move(pkt), cn->second);
        else
          lma->forward_downlink(std::move(pkt));
        return;
      }
      case Role::Mag: {
        const auto dir = roles.at(from) == Role::Lma ? mag::Direction::Downlink : mag::Direction::Uplink;
        mags.at(route.dest)->forward(std::move(pkt), dir);
        return;
      }
      case Role::Mn:
        if (mns.at(route.dest)->deliver(pkt, route.iface)) record_delivery(std::move(pkt), route.dest, route.iface);
        return;
      case Role::Cn:
        if (cn_addr.at(route.dest) == pkt.selector.dst_addr)
          record_delivery(std::move(pkt), route.dest, {});
        else
          record_drop(pkt, DropReason::Unroutable, route.dest);
        return;
      default: record_drop(pkt, DropReason::Unroutable, route.dest);
    }
  }

  std::optional<std::size_t> settle(const Packet& pkt) {
    const auto it = flow_by_sel.find(pkt.selector);
    if (it == flow_by_sel.end() || in_flight.erase({it->second, pkt.seq}) == 0) {
      ++result.accounting_errors;
      return std::nullopt;
    }
    return it->second;
  }

  void record_delivery(Packet pkt, const NodeId& node, const std::string& iface) {
    const auto idx = settle(pkt);
    if (!idx) return;
    ++result.flows[*idx].delivered;
    if (sc.trace_packets)
      result.trace.push_back(TraceRecord{now,
                                         node,
                                         "deliver",
                                         {{"flow", flows[*idx].spec.id},
                                          {"seq", std::to_string(pkt.seq)},
                                          {"iface", iface.empty() ? "-" : iface}}});
    result.deliveries.push_back(Delivery{*idx, pkt.seq, pkt.created_at, now, node, iface, std::move(pkt.path_trace)});
  }

  void record_drop(const Packet& pkt, DropReason reason, const NodeId& where) {
    const auto idx = settle(pkt);
    if (!idx) return;
    ++result.flows[*idx].dropped;
    if (sc.trace_packets)
      result.trace.push_back(TraceRecord{now,
                                         where,
                                         "drop",
                                         {{"flow", flows[*idx].spec.id},
                                          {"seq", std::to_string(pkt.seq)},
                                          {"reason", std::string(to_string(reason))}}});
    result.drops.push_back(DropRecord{*idx, pkt.seq, now, where, reason});
  }

  // ---- run -----------------------------------------------------------------

  RunResult run() {
    if (ran) throw std::logic_error("Simulator::run called twice");
    ran = true;
    while (!queue.empty() && queue.top().fire_at <= horizon) {
      auto ev = queue.pop();
      now = ev.fire_at;
      ev.action();
    }
    // Whatever is still in flight or queued never arrives.
    if (now < horizon && !in_flight.empty()) now = horizon;
    for (const auto& [idx, seq] : in_flight) {
      ++result.flows[idx].dropped;
      result.drops.push_back(DropRecord{idx, seq, now, NodeId{"sim"}, DropReason::Horizon});
    }
    in_flight.clear();
    queue.clear();

    for (std::size_t i = 0; i < flows.size(); ++i) {
      const auto& bindings = lma->flow_bindings();
      if (const auto it = bindings.find(flows[i].selector); it != bindings.end()) result.flows[i].state = it->second.state;
    }
    result.lma = lma->stats();
    for (const auto& [id, m] : mags) result.mags[id] = m->stats();
    return std::move(result);
  }
};

Simulator::Simulator(Scenario scenario) : Simulator(scenario, scenario.seed) {}

Simulator::Simulator(Scenario scenario, std::uint64_t seed)
    : impl_(std::make_unique<Impl>(std::move(scenario), seed)) {}

Simulator::~Simulator() = default;

RunResult Simulator::run() { return impl_->run(); }

void Simulator::inject_link_down(const LinkId& link, SimTime at) {
  if (!impl_->links.contains(link)) throw std::invalid_argument("unknown link " + link.value);
  impl_->queue.push(at, [i = impl_.get(), link] { i->set_link(link, false); });
}

void Simulator::inject_link_up(const LinkId& link, SimTime at) {
  if (!impl_->links.contains(link)) throw std::invalid_argument("unknown link " + link.value);
  impl_->queue.push(at, [i = impl_.get(), link] { i->set_link(link, true); });
}

SimTime Simulator::now() const { return impl_->now; }
const Scenario& Simulator::scenario() const { return impl_->sc; }
const lma::Lma& Simulator::lma() const { return *impl_->lma; }

const mag::Mag* Simulator::mag(const NodeId& id) const {
  const auto it = impl_->mags.find(id);
  return it == impl_->mags.end() ? nullptr : it->second.get();
}

const mih::Mihf* Simulator::mihf(const NodeId& id) const {
  const auto it = impl_->mihfs.find(id);
  return it == impl_->mihfs.end() ? nullptr : it->second.get();
}

const mih::LinkSap* Simulator::sap(const LinkId& link) const {
  const auto it = impl_->saps.find(link);
  return it == impl_->saps.end() ? nullptr : it->second.get();
}

const MobileNode* Simulator::mn(const NodeId& id) const {
  const auto it = impl_->mns.find(id);
  return it == impl_->mns.end() ? nullptr : it->second.get();
}

RunResult run(const Scenario& scenario, std::uint64_t seed) {
  Simulator sim(scenario, seed);
  return sim.run();
}

}  // namespace pmipfm::netsim
