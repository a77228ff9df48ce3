#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>

#include "esdmesh/topology.hpp"

namespace esdmesh {

/// Frame number of the last change to a node's advertised state.
using Timestamp = std::uint64_t;

/// What every node disseminates about itself.
struct NodeState {
  std::uint32_t flowdesc = 0;  // incoming + outgoing MAC-level flows
  double etau = 1.0;           // expected slots between control transmissions
  Timestamp timestamp = 0;

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

struct DschMessage;

/// One node's view of every node's (flowdesc, E[tau], timestamp) triple.
///
/// The owner's own entry is authoritative and changes only through
/// update_self(). Entries touched since they were last advertised are kept
/// in the dirty set.
class StateTable {
 public:
  StateTable(NodeId owner, NodeState self);

  NodeId owner() const { return owner_; }
  const std::map<NodeId, NodeState>& entries() const { return entries_; }
  const std::set<NodeId>& dirty() const { return dirty_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(NodeId k) const { return entries_.contains(k); }

  /// Throws std::out_of_range when the table has no entry for `k`.
  const NodeState& at(NodeId k) const;
  const NodeState& self() const { return entries_.at(owner_); }

  /// Replaces the owner's entry and marks it dirty. `frame` must not be
  /// older than the current self timestamp.
  void update_self(std::uint32_t flowdesc, double etau, Timestamp frame);

 private:
  friend DschMessage build_advertisement(StateTable& table, std::size_t capacity);
  friend std::size_t merge_advertisement(StateTable& table, const DschMessage& message);

  NodeId owner_;
  std::map<NodeId, NodeState> entries_;
  std::set<NodeId> dirty_;
  // Advertisement sequence number at which each entry was last sent; 0 = never.
  std::map<NodeId, std::uint64_t> last_sent_;
  std::uint64_t sequence_ = 0;
};

}  // namespace esdmesh
