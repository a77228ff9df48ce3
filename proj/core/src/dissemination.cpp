#include "esdmesh/dissemination.hpp"

#include <algorithm>
#include <tuple>

namespace esdmesh {

DschMessage build_advertisement(StateTable& table, std::size_t capacity) {
  DschMessage msg{table.owner_, {}};
  const std::uint64_t seq = ++table.sequence_;

  auto take = [&](NodeId k) {
    msg.entries.push_back({k, table.entries_.at(k)});
    table.last_sent_[k] = seq;
  };

  std::vector<NodeId> sent_dirty;
  if (capacity > 0 && table.dirty_.contains(table.owner_)) {
    take(table.owner_);
    sent_dirty.push_back(table.owner_);
  }
  for (NodeId k : table.dirty_) {
    if (msg.entries.size() >= capacity) break;
    if (k == table.owner_) continue;
    take(k);
    sent_dirty.push_back(k);
  }
  for (NodeId k : sent_dirty) table.dirty_.erase(k);

  if (msg.entries.size() < capacity) {
    // Anti-entropy: refresh the entries that have gone longest unadvertised.
    std::vector<std::tuple<std::uint64_t, NodeId>> stale;
    for (const auto& [k, state] : table.entries_) {
      if (table.dirty_.contains(k) ||
          std::find(sent_dirty.begin(), sent_dirty.end(), k) != sent_dirty.end()) {
        continue;
      }
      auto it = table.last_sent_.find(k);
      stale.emplace_back(it == table.last_sent_.end() ? 0 : it->second, k);
    }
    std::sort(stale.begin(), stale.end());
    for (const auto& [when, k] : stale) {
      if (msg.entries.size() >= capacity) break;
      take(k);
    }
  }
  return msg;
}

std::size_t merge_advertisement(StateTable& table, const DschMessage& message) {
  std::size_t adopted = 0;
  for (const AdvertisedEntry& e : message.entries) {
    if (e.node == table.owner_) continue;
    auto it = table.entries_.find(e.node);
    if (it != table.entries_.end() && e.state.timestamp <= it->second.timestamp) continue;
    table.entries_[e.node] = e.state;
    table.dirty_.insert(e.node);
    ++adopted;
  }
  return adopted;
}

bool is_converged(std::span<const StateTable> tables) {
  const std::size_t n = tables.size();
  for (const StateTable& t : tables) {
    if (t.size() != n) return false;
    if (!t.entries().empty() && t.entries().rbegin()->first >= n) return false;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (tables[i].entries() != tables[0].entries()) return false;
  }
  return true;
}

}  // namespace esdmesh
