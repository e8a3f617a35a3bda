#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "pmipfm/core/context.hpp"
#include "pmipfm/core/cost.hpp"
#include "pmipfm/core/message.hpp"
#include "pmipfm/lma/binding_cache.hpp"
#include "pmipfm/lma/rule_table.hpp"
#include "pmipfm/lma/scheduler.hpp"

namespace pmipfm::lma {

struct LmaConfig {
  Cost base_kernel_cost = Cost::units(10);
  Cost scan_cost_per_rule = Cost::units(0.065);
  /// Extra per-packet cost of matching a full 6-tuple instead of a prefix.
  Cost selector_match_cost = Cost::units(2);
  Cost divert_cost = Cost::units(200);
  Cost install_cost_base = Cost::units(25);
  Cost install_cost_per_rule = Cost::units(0.05);
  /// Microseconds of latency per forwarding cost unit.
  double cost_unit_us = 1.0;
  /// Microseconds of latency per rule-install cost unit.
  double install_unit_us = 1000.0;
  std::size_t max_bces = 0;
  std::set<MnId> denied;
  /// false: one prefix rule per BCE, no flow identification.
  bool flow_mobility = true;
  bool trace_packets = true;
};

enum class MmmAction { Register, Renew, Handover, Delete, Rejected };

std::string_view to_string(MmmAction action);

enum class FlowState { Active, Dropped };

struct FlowBinding {
  TrafficSelector selector;
  MnId mn_id;
  BceKey bce_ref;
  Mark mark = 0;
  FlowState state = FlowState::Active;
  friend bool operator==(const FlowBinding&, const FlowBinding&) = default;
};

struct FastPath {
  NodeId mag;
  LinkId tunnel;
  Cost cost;
  std::size_t rule_position = 0;
};

struct Diverted {
  Cost cost;
};

struct Unroutable {};

using ForwardOutcome = std::variant<FastPath, Diverted, Unroutable>;

struct ClassifiedFlow {
  MnId mn_id;
  TrafficSelector selector;
};

struct PbuResult {
  MmmAction action = MmmAction::Register;
  PbaBody pba;
};

/// fsm_schedule() on an MN without any BCE.
class NoPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Packets held in user space while their flow's rule is being installed.
class UserSpaceQueue {
 public:
  struct Entry {
    Packet packet;
    SimTime arrived{};
  };

  void push(Packet pkt, SimTime arrived) { entries_.push_back({std::move(pkt), arrived}); }
  /// Removes and returns the packets of `sel`, oldest first.
  std::vector<Entry> take(const TrafficSelector& sel);
  std::size_t count(const TrafficSelector& sel) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::deque<Entry> entries_;
};

struct CostSample {
  SimTime at{};
  TrafficSelector selector;
  std::uint64_t seq = 0;
  Cost cost;
  bool fast_path = true;
  std::size_t rule_position = 0;  // 0 when diverted
  std::size_t rule_count = 0;
};

struct InstallRecord {
  std::optional<TrafficSelector> selector;  // empty for prefix rules
  std::size_t rules_before = 0;
  Cost latency;
  SimTime requested{};
  SimTime started{};
  SimTime completed{};
};

struct LmaStats {
  std::map<MmmAction, std::size_t> actions;
  std::map<TrafficSelector, std::size_t> classify_calls;
  std::size_t fast_path = 0;
  std::size_t diverted = 0;
  std::size_t unroutable = 0;
  std::size_t flow_dropped_packets = 0;
  std::size_t dropped_flows = 0;
  std::vector<CostSample> samples;
  std::vector<InstallRecord> installs;
  std::vector<std::pair<SimTime, std::size_t>> rule_count_history;
};

/// Local Mobility Anchor: binding cache, mobility manager (PBU handling),
/// flow identifier, flow scheduler and the marking/forwarding data path.
class Lma {
 public:
  Lma(Context& ctx, LmaConfig config, SchedulerPolicy policy);

  /// Dispatches PBUs; answers each with a PBA to the sender.
  void on_message(const ProtocolMessage& msg);

  PbuResult mmm_handle_pbu(const PbuBody& pbu, const NodeId& from_mag);

  std::optional<ClassifiedFlow> fim_classify(const Packet& pkt);

  /// Chooses a BCE for the flow and queues its rule installation.
  BceKey fsm_schedule(const MnId& mn, const TrafficSelector& sel);

  /// Reschedules flows of `mn` whose BCE no longer exists.
  void fsm_reroute(const MnId& mn);

  ForwardOutcome forward_downlink(Packet pkt);

  /// Uplink traffic is routed by destination, not by flow: base cost only.
  void forward_uplink(Packet pkt, const NodeId& next_hop);

  /// Installs `n` placeholder rules that never match real traffic.
  void prefill_rules(std::size_t n);

  const BindingCache& binding_cache() const { return cache_; }
  const RuleTable& rule_table() const { return rules_; }
  const std::map<TrafficSelector, FlowBinding>& flow_bindings() const { return flows_; }
  const UserSpaceQueue& user_space_queue() const { return queue_; }
  const LmaStats& stats() const { return stats_; }
  const LmaConfig& config() const { return config_; }
  bool install_pending(const TrafficSelector& sel) const { return pending_selectors_.contains(sel); }
  /// Tunnel a mark currently routes to, if any.
  std::optional<NodeId> route_of(Mark mark) const;

 private:
  struct InstallRequest {
    RuleMatch match;
    std::optional<BceKey> prefix_owner;
    SimTime requested{};
  };

  void remove_bce(const BceKey& key, std::string_view reason);
  void schedule_expiry(const BceKey& key, SimTime expires_at);
  void request_install(InstallRequest req);
  void start_next_install();
  void finish_install(InstallRequest req, std::size_t rules_before, Cost latency, SimTime started);
  void release_queued(const TrafficSelector& sel);
  void drop_queued(const TrafficSelector& sel, DropReason reason);
  void emit(Packet pkt, const NodeId& mag, SimTime ready_at);
  void note_rule_count();
  void trace_packet(std::string_view kind, const Packet& pkt, Cost cost, std::size_t position);

  Context& ctx_;
  LmaConfig config_;
  FlowScheduler scheduler_;
  BindingCache cache_;
  RuleTable rules_;
  UserSpaceQueue queue_;
  std::map<TrafficSelector, FlowBinding> flows_;
  std::map<Mark, NodeId> routes_;
  std::map<TrafficSelector, SimTime> last_egress_;
  std::deque<InstallRequest> install_queue_;
  std::set<TrafficSelector> pending_selectors_;
  bool installing_ = false;
  Mark next_mark_ = 1;
  LmaStats stats_;
};

}  // namespace pmipfm::lma
