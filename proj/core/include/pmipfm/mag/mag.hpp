#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pmipfm/core/context.hpp"
#include "pmipfm/core/cost.hpp"
#include "pmipfm/core/message.hpp"

namespace pmipfm::mag {

/// Attachment detection source. Only MIH is implemented; Syslog is kept as
/// a configuration value that is refused at construction.
enum class DetectionSource { Mih, Syslog };

struct MagConfig {
  LinkId access_link;
  NodeId lma;
  NodeId mihf;
  NodeId aaa;
  std::uint16_t lifetime_s = 300;
  std::map<MnId, std::uint16_t> lifetime_overrides;
  SimDuration renewal_margin = std::chrono::seconds(30);
  SimDuration probe_timeout = std::chrono::seconds(1);
  int probe_retries = 1;
  SimDuration tick = std::chrono::seconds(1);
  SimDuration pba_timeout = std::chrono::seconds(1);
  int pbu_retransmissions = 0;
  Cost forward_cost = Cost::units(6);
  double cost_unit_us = 1.0;
  DetectionSource detection = DetectionSource::Mih;
  bool trace_packets = true;
};

enum class EntryStatus { Temporary, Permanent };

std::string_view to_string(EntryStatus status);

struct MagBindingEntry {
  MnId mn_id;
  InterfaceId interface_id;
  LinkAddr link_addr;
  /// Prefixes assigned to this interface by AAA; advertised in the RA.
  std::vector<Prefix> assigned_hnp;
  /// Prefixes the LMA returned in the PBA; used for downlink matching.
  std::vector<Prefix> hnp;
  EntryStatus status = EntryStatus::Temporary;
  SimTime lifetime_expires_at{};
  LinkId access_link;
  std::uint16_t pending_sequence = 0;
  bool awaiting_pba = false;
  int retransmissions_left = 0;
  /// Set on re-attachment of a Permanent entry: the next PBA triggers an RA.
  bool advertise_on_ack = false;
};

struct PendingProbe {
  MnId mn_id;
  InterfaceId interface_id;
  LinkAddr target;
  SimTime solicitation_sent_at{};
  SimTime timeout_at{};
  int retries_left = 0;
};

struct Attachment {
  LinkAddr addr;
};
struct Detachment {
  LinkAddr addr;
};
struct PbaRegister {
  PbaBody pba;
};
struct PbaDeregister {
  PbaBody pba;
};

using MagEvent = std::variant<Attachment, Detachment, PbaRegister, PbaDeregister>;

enum class HandshakeState { Idle, Registering, Discovering, Subscribing, Ready, UnknownLink, Refused };

std::string_view to_string(HandshakeState state);

enum class Direction { Downlink, Uplink };

struct MagCostSample {
  SimTime at{};
  TrafficSelector selector;
  std::uint64_t seq = 0;
  Cost cost;
  Direction direction = Direction::Downlink;
};

struct MagStats {
  std::size_t anomalies = 0;
  std::size_t rejected_attachments = 0;
  std::size_t register_pbus = 0;
  std::size_t renewal_pbus = 0;
  std::size_t deregister_pbus = 0;
  std::size_t retransmitted_pbus = 0;
  std::size_t renewals_confirmed = 0;
  std::size_t probe_timeouts = 0;
  std::size_t temporary_expired = 0;
  std::size_t downlink_drops = 0;
  std::size_t forwarded = 0;
  std::vector<MagCostSample> samples;
};

/// Mobile Access Gateway for one access link.
class Mag {
 public:
  /// Throws std::invalid_argument for the Syslog detection source.
  Mag(Context& ctx, MagConfig config);

  /// Starts the MIH handshake with the configured MIHF.
  void start();

  void on_message(const ProtocolMessage& msg);

  void handle_event(const MagEvent& ev);

  /// Probes entries close to expiry and drives renewals.
  void lifetime_tick();

  /// Returns the egress the packet was handed to, or nullopt if dropped.
  std::optional<NodeId> forward(Packet pkt, Direction direction);

  HandshakeState handshake_state() const { return handshake_; }
  const std::map<InterfaceId, MagBindingEntry>& entries() const { return entries_; }
  const std::map<MnId, PendingProbe>& probes() const { return probes_; }
  const MagStats& stats() const { return stats_; }
  const MagConfig& config() const { return config_; }

 private:
  void handle_mih(const ProtocolMessage& msg);
  void on_attachment(const LinkAddr& addr);
  void on_detachment(const LinkAddr& addr, std::string_view cause);
  void on_aaa_response(const AaaResponseBody& resp);
  void on_pba_register(const PbaBody& pba);
  void on_pba_deregister(const PbaBody& pba);
  void on_neighbor_advertisement(const NeighborAdvertisementBody& na);

  std::uint16_t lifetime_for(const MnId& mn) const;
  void send_pbu(MagBindingEntry& entry, std::uint16_t lifetime);
  void arm_pba_timer(const InterfaceId& id, std::uint16_t seq);
  void send_probe(PendingProbe& probe);
  void arm_probe_timer(const MnId& mn, SimTime timeout_at);
  void ensure_ticking();
  void anomaly(std::string_view reason, TraceFields fields = {});
  void transition(std::string_view event, const InterfaceId& id, std::optional<EntryStatus> before,
                  std::optional<EntryStatus> after, std::string_view emitted);

  Context& ctx_;
  MagConfig config_;
  HandshakeState handshake_ = HandshakeState::Idle;
  std::size_t confirmations_pending_ = 0;
  std::map<InterfaceId, MagBindingEntry> entries_;
  std::map<InterfaceId, LinkAddr> pending_aaa_;
  std::map<MnId, PendingProbe> probes_;
  std::uint16_t next_sequence_ = 0;
  bool ticking_ = false;
  MagStats stats_;
};

}  // namespace pmipfm::mag
