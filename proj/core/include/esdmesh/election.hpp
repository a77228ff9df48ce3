#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "esdmesh/analytic_model.hpp"
#include "esdmesh/topology.hpp"

namespace esdmesh {

/// Global transmission-opportunity counter.
using SlotIndex = std::uint64_t;

/// Deterministic per-(node, slot) election priority: the high 32 bits of a
/// splitmix64-style finalizer applied to
/// ((node+1) * 0x9E3779B97F4A7C15) ^ ((slot+1) * 0xBF58476D1CE4E5B9).
std::uint32_t mixing_value(NodeId node, SlotIndex slot);

struct ElectionState {
  std::vector<SlotIndex> next_eligible;
  std::vector<std::vector<SlotIndex>> win_history;

  explicit ElectionState(std::size_t node_count = 0)
      : next_eligible(node_count, 0), win_history(node_count) {}
};

/// `k` together with every eligible 2-hop neighbor at slot `s`, sorted.
std::vector<NodeId> contenders(const MeshGraph& g, const ElectionState& st, NodeId k,
                               SlotIndex s);

/// Slot-by-slot holdoff election.
///
/// An eligible node wins a slot iff its (mixing value, -id) pair is the
/// strict maximum among its contenders. A winner at slot s is next eligible
/// at s + 2^(x+base) + 1; a loser re-contends at s + 1.
class Election {
 public:
  Election(const MeshGraph& g, const SchedulerConfig& cfg, bool keep_history = true);

  SlotIndex next_slot() const { return slot_; }

  /// Resolves the next slot and returns its winners in ascending id order.
  std::vector<NodeId> step();

  const ElectionState& state() const { return state_; }

 private:
  const MeshGraph* graph_;
  std::vector<SlotIndex> holdoff_;
  ElectionState state_;
  SlotIndex slot_ = 0;
  bool keep_history_;
  std::vector<std::uint32_t> value_;
  std::vector<char> eligible_;
};

struct ElectionTrace {
  std::vector<std::vector<NodeId>> winners;  // indexed by slot
  ElectionState final_state;

  /// Win slots of `node` recovered from the per-slot winner lists.
  std::vector<SlotIndex> wins_of(NodeId node) const;
};

ElectionTrace run_election(const MeshGraph& g, const SchedulerConfig& cfg,
                           std::size_t total_slots);

/// Mean gap between successive wins; throws std::invalid_argument for fewer than two wins.
double measured_interval(std::span<const SlotIndex> wins);
double measured_interval(const ElectionTrace& trace, NodeId node);

/// Slots in which two winners lie within 2 hops of each other.
std::size_t count_collisions(const MeshGraph& g, const ElectionTrace& trace);

/// Consecutive wins of one node separated by no more than its holdoff.
std::size_t count_holdoff_violations(const SchedulerConfig& cfg, const ElectionTrace& trace);

}  // namespace esdmesh
