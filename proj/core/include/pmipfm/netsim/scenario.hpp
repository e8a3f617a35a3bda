#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pmipfm/core/types.hpp"
#include "pmipfm/lma/lma.hpp"
#include "pmipfm/mag/mag.hpp"

namespace pmipfm::netsim {

/// Scenario rejected at load or validation time. `line` is the source line
/// of the offending element when known, else 0.
class ScenarioInvalid : public std::runtime_error {
 public:
  ScenarioInvalid(int line, const std::string& detail, const std::string& origin = {});
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  int line_;
  std::string detail_;
};

enum class HostModel { WeakHost, LogicalInterface };

std::string_view to_string(HostModel model);

struct MnInterfaceSpec {
  std::string name;
  LinkAddr addr;
  Prefix hnp;
  int line = 0;
};

struct MnSpec {
  NodeId id;
  MnId nai;
  HostModel host_model = HostModel::WeakHost;
  /// false: the MN never answers neighbour solicitations.
  bool responsive = true;
  std::optional<std::uint16_t> lifetime_s;
  std::vector<MnInterfaceSpec> interfaces;
  int line = 0;

  const MnInterfaceSpec* find_interface(std::string_view name) const;
};

struct CnSpec {
  NodeId id;
  Ipv6Address address;
  int line = 0;
};

struct MagSpec {
  NodeId id;
  /// Femtocell hosting this MAG; MAGs on one host share its MIHF.
  std::string host;
  LinkId access_link;
  std::string technology = "wifi";
  double access_latency_ms = 1.0;
  int line = 0;

  NodeId mihf() const;
  NodeId sap() const;
};

struct WiredLinkSpec {
  LinkId id;
  NodeId a;
  NodeId b;
  double latency_ms = 1.0;
  int line = 0;
};

enum class FlowDirection { Downlink, Uplink };

struct FlowSpec {
  std::string id;
  NodeId cn;
  NodeId mn;
  std::string iface;
  FlowDirection direction = FlowDirection::Downlink;
  double rate_kbps = 100.0;
  std::uint32_t size = 250;
  double start_ms = 0.0;
  std::optional<double> stop_ms;
  std::uint16_t src_port = 5001;
  std::uint16_t dst_port = 5001;
  std::uint8_t protocol = 17;
  std::uint32_t flow_label = 0;
  /// Initial placement onto this MAG's BCE while it exists.
  std::optional<NodeId> via;
  int line = 0;

  /// size·8 / rate, rounded to the simulator's 1 µs resolution.
  SimDuration period() const;
};

enum class TimelineAction { Attach, Detach, LinkDown, LinkUp };

std::string_view to_string(TimelineAction action);

struct TimelineEvent {
  double at_ms = 0.0;
  TimelineAction action = TimelineAction::Attach;
  NodeId mn;
  std::string iface;
  LinkId link;
  int line = 0;
};

enum class SchedulerMode { Pinned, Random };

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  double horizon_ms = 60'000.0;

  NodeId lma{"lma"};
  NodeId aaa{"aaa"};
  std::vector<MagSpec> mags;
  std::vector<MnSpec> mns;
  std::vector<CnSpec> cns;
  std::vector<WiredLinkSpec> links;
  std::vector<FlowSpec> flows;
  std::vector<TimelineEvent> timeline;

  lma::LmaConfig lma_config;
  /// Per-MAG fields (ids, access link) are filled in by the simulator.
  mag::MagConfig mag_defaults;
  SchedulerMode scheduler = SchedulerMode::Pinned;
  std::vector<NodeId> preference;
  std::set<MnId> aaa_denied;

  double d_detect_ms = 50.0;
  /// Latency of wired node pairs without an explicit link entry.
  double default_latency_ms = 1.0;
  double wireless_loss = 0.0;
  /// Flow start times are offset by a seeded uniform draw in [0, jitter).
  double flow_jitter_ms = 0.0;
  std::size_t prefill_rules = 0;
  bool trace_packets = true;

  /// Throws ScenarioInvalid naming the first offending element.
  void validate() const;

  const MnSpec* find_mn(const NodeId& id) const;
  const MagSpec* find_mag(const NodeId& id) const;
  const MagSpec* find_mag_by_link(const LinkId& link) const;
  const CnSpec* find_cn(const NodeId& id) const;
};

/// Address of an MN interface inside its home network prefix: the prefix
/// with the interface identifier as host part.
Ipv6Address interface_address(const MnInterfaceSpec& iface);

}  // namespace pmipfm::netsim
