#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pmipfm/core/time.hpp"
#include "pmipfm/core/types.hpp"

namespace pmipfm::lma {

/// Forwarding label binding a packet to one tunnel route.
using Mark = std::uint32_t;

/// A BCE is identified by the pair (MN ID, serving MAG).
struct BceKey {
  MnId mn_id;
  NodeId serving_mag;

  std::string to_string() const { return mn_id.value + "@" + serving_mag.value; }
  friend auto operator<=>(const BceKey&, const BceKey&) = default;
};

struct BindingCacheEntry {
  MnId mn_id;
  InterfaceId interface_id;
  NodeId serving_mag;
  std::vector<Prefix> hnp;
  SimTime lifetime_expires_at{};
  LinkId tunnel_id;
  Mark mark = 0;

  BceKey key() const { return {mn_id, serving_mag}; }
  friend bool operator==(const BindingCacheEntry&, const BindingCacheEntry&) = default;
};

/// Name of the LMA<->MAG tunnel serving `mag`.
LinkId tunnel_id_for(const NodeId& mag);

class BindingCache {
 public:
  /// `capacity` of 0 means unbounded.
  explicit BindingCache(std::size_t capacity = 0) : capacity_(capacity) {}

  const BindingCacheEntry* find(const BceKey& key) const;
  BindingCacheEntry* find(const BceKey& key);

  /// Entry of `mn` bound to `interface_id`, whichever MAG serves it.
  const BindingCacheEntry* find_interface(const MnId& mn, const InterfaceId& interface_id) const;

  /// Returns false (and leaves the cache untouched) when the key is taken
  /// or the cache is full.
  bool insert(BindingCacheEntry entry);
  bool erase(const BceKey& key);

  /// Moves the entry at `from` to (mn, new_mag). The destination key must be free.
  BindingCacheEntry& rekey(const BceKey& from, const NodeId& new_mag);

  /// Live keys of `mn`, in key order.
  std::vector<BceKey> keys_for(const MnId& mn) const;

  /// Prefixes of every live BCE of `mn`, with `first`'s prefixes leading.
  std::vector<Prefix> prefixes_for(const MnId& mn, const BceKey* first = nullptr) const;

  /// Owner of the longest BCE prefix covering `addr`.
  std::optional<MnId> owner_of(const Ipv6Address& addr) const;

  bool full() const { return capacity_ != 0 && entries_.size() >= capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  friend bool operator==(const BindingCache&, const BindingCache&) = default;

 private:
  std::size_t capacity_;
  std::map<BceKey, BindingCacheEntry> entries_;
};

}  // namespace pmipfm::lma
