#pragma once

#include <set>
#include <string>

#include "pmipfm/core/context.hpp"
#include "pmipfm/core/message.hpp"

namespace pmipfm::mih {

/// Media-specific adapter for one access link. Reports LinkUp when an
/// address enters the attached set and LinkDown when it leaves.
class LinkSap {
 public:
  LinkSap(Context& ctx, LinkId link, std::string technology, NodeId mihf);

  /// Returns false (and reports nothing) if already attached.
  bool attach(const LinkAddr& addr);
  /// Returns false (and reports nothing) if not attached.
  bool detach(const LinkAddr& addr);

  const LinkId& link() const { return link_; }
  const std::string& technology() const { return technology_; }
  const std::set<LinkAddr>& attached() const { return attached_; }

 private:
  void report(const LinkAddr& addr, LinkEvent event);

  Context& ctx_;
  LinkId link_;
  std::string technology_;
  NodeId mihf_;
  std::set<LinkAddr> attached_;
};

}  // namespace pmipfm::mih
