#include "pmipfm/lma/binding_cache.hpp"

#include <stdexcept>

namespace pmipfm::lma {

LinkId tunnel_id_for(const NodeId& mag) { return LinkId{"tun-" + mag.value}; }

const BindingCacheEntry* BindingCache::find(const BceKey& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

BindingCacheEntry* BindingCache::find(const BceKey& key) {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

const BindingCacheEntry* BindingCache::find_interface(const MnId& mn, const InterfaceId& interface_id) const {
  for (auto it = entries_.lower_bound(BceKey{mn, NodeId{}}); it != entries_.end() && it->first.mn_id == mn; ++it)
    if (it->second.interface_id == interface_id) return &it->second;
  return nullptr;
}

bool BindingCache::insert(BindingCacheEntry entry) {
  if (full()) return false;
  auto key = entry.key();
  return entries_.emplace(std::move(key), std::move(entry)).second;
}

bool BindingCache::erase(const BceKey& key) { return entries_.erase(key) > 0; }

BindingCacheEntry& BindingCache::rekey(const BceKey& from, const NodeId& new_mag) {
  auto node = entries_.extract(from);
  if (node.empty()) throw std::logic_error("rekey of unknown BCE " + from.to_string());
  node.key().serving_mag = new_mag;
  node.mapped().serving_mag = new_mag;
  node.mapped().tunnel_id = tunnel_id_for(new_mag);
  auto res = entries_.insert(std::move(node));
  if (!res.inserted) throw std::logic_error("rekey onto occupied BCE key");
  return res.position->second;
}

std::vector<BceKey> BindingCache::keys_for(const MnId& mn) const {
  std::vector<BceKey> keys;
  for (auto it = entries_.lower_bound(BceKey{mn, NodeId{}}); it != entries_.end() && it->first.mn_id == mn; ++it)
    keys.push_back(it->first);
  return keys;
}

std::vector<Prefix> BindingCache::prefixes_for(const MnId& mn, const BceKey* first) const {
  std::vector<Prefix> out;
  if (first != nullptr)
    if (const auto* e = find(*first)) out = e->hnp;
  for (auto it = entries_.lower_bound(BceKey{mn, NodeId{}}); it != entries_.end() && it->first.mn_id == mn; ++it) {
    if (first != nullptr && it->first == *first) continue;
    out.insert(out.end(), it->second.hnp.begin(), it->second.hnp.end());
  }
  return out;
}

std::optional<MnId> BindingCache::owner_of(const Ipv6Address& addr) const {
  const BindingCacheEntry* best = nullptr;
  int best_len = -1;
  for (const auto& [key, entry] : entries_) {
    for (const auto& p : entry.hnp) {
      if (p.length > best_len && p.contains(addr)) {
        best = &entry;
        best_len = p.length;
      }
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->mn_id;
}

}  // namespace pmipfm::lma
