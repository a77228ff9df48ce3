#include "esdmesh/state_table.hpp"

#include <stdexcept>
#include <string>

namespace esdmesh {

StateTable::StateTable(NodeId owner, NodeState self) : owner_(owner) {
  if (!(self.etau > 0.0)) throw std::invalid_argument("E[tau] must be positive");
  entries_.emplace(owner, self);
  dirty_.insert(owner);
}

const NodeState& StateTable::at(NodeId k) const {
  auto it = entries_.find(k);
  if (it == entries_.end()) {
    throw std::out_of_range("node " + std::to_string(owner_) + " has no state for node " +
                            std::to_string(k));
  }
  return it->second;
}

void StateTable::update_self(std::uint32_t flowdesc, double etau, Timestamp frame) {
  if (!(etau > 0.0)) throw std::invalid_argument("E[tau] must be positive");
  NodeState& self = entries_.at(owner_);
  if (frame < self.timestamp) {
    throw std::invalid_argument("self timestamp would move backwards (" + std::to_string(frame) +
                                " < " + std::to_string(self.timestamp) + ")");
  }
  self = NodeState{flowdesc, etau, frame};
  dirty_.insert(owner_);
}

}  // namespace esdmesh
