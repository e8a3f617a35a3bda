#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmipfm/core/message.hpp"
#include "pmipfm/core/trace.hpp"
#include "pmipfm/lma/lma.hpp"
#include "pmipfm/mag/mag.hpp"
#include "pmipfm/mih/link_sap.hpp"
#include "pmipfm/mih/mihf.hpp"
#include "pmipfm/netsim/mobile_node.hpp"
#include "pmipfm/netsim/scenario.hpp"

namespace pmipfm::netsim {

struct FlowSummary {
  std::string id;
  TrafficSelector selector;
  FlowDirection direction = FlowDirection::Downlink;
  SimDuration period{};
  SimTime start{};
  std::size_t emitted = 0;
  std::size_t delivered = 0;
  std::size_t dropped = 0;
  /// LMA flow-cache state at the end of the run; nullopt if never classified.
  std::optional<lma::FlowState> state;
};

struct Delivery {
  std::size_t flow = 0;
  std::uint64_t seq = 0;
  SimTime created_at{};
  SimTime at{};
  NodeId node;
  /// Receiving MN interface; empty for uplink deliveries at a CN.
  std::string iface;
  std::vector<PathHop> path;
};

struct DropRecord {
  std::size_t flow = 0;
  std::uint64_t seq = 0;
  SimTime at{};
  NodeId where;
  DropReason reason = DropReason::LinkDown;
};

/// Link state flip, or an interface leaving a link (mn and iface set).
struct LinkTransition {
  SimTime at{};
  LinkId link;
  bool up = false;
  NodeId mn;
  std::string iface;
};

struct RunResult {
  std::uint64_t seed = 0;
  SimTime horizon{};
  std::vector<TraceRecord> trace;
  std::vector<FlowSummary> flows;
  std::vector<Delivery> deliveries;
  std::vector<DropRecord> drops;
  std::map<MessageKind, std::size_t> messages;
  std::size_t messages_lost = 0;
  std::size_t malformed = 0;
  /// Packets delivered or dropped twice, or never emitted. Always 0 unless
  /// the simulator itself is broken.
  std::size_t accounting_errors = 0;
  std::vector<LinkTransition> link_events;
  lma::LmaStats lma;
  std::map<NodeId, mag::MagStats> mags;

  std::vector<std::string> trace_lines() const;
  /// All trace lines, newline-terminated.
  std::string trace_text() const;
};

/// Single-threaded discrete-event simulator for one scenario and seed.
class Simulator {
 public:
  /// Validates the scenario; throws ScenarioInvalid.
  explicit Simulator(Scenario scenario);
  Simulator(Scenario scenario, std::uint64_t seed);
  ~Simulator();
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Executes events up to and including the horizon. Call once.
  RunResult run();

  void inject_link_down(const LinkId& link, SimTime at);
  void inject_link_up(const LinkId& link, SimTime at);

  SimTime now() const;
  const Scenario& scenario() const;
  const lma::Lma& lma() const;
  const mag::Mag* mag(const NodeId& id) const;
  const mih::Mihf* mihf(const NodeId& id) const;
  const mih::LinkSap* sap(const LinkId& link) const;
  const MobileNode* mn(const NodeId& id) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RunResult run(const Scenario& scenario, std::uint64_t seed);

}  // namespace pmipfm::netsim
