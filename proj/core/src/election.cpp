#include "esdmesh/election.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <stdexcept>

namespace esdmesh {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// (value, -id) ordering: larger value wins, smaller id breaks ties.
bool beats(std::uint32_t va, NodeId a, std::uint32_t vb, NodeId b) {
  return va > vb || (va == vb && a < b);
}

}  // namespace

std::uint32_t mixing_value(NodeId node, SlotIndex slot) {
  const std::uint64_t seed = ((std::uint64_t{node} + 1) * 0x9E3779B97F4A7C15ULL) ^
                             ((slot + 1) * 0xBF58476D1CE4E5B9ULL);
  return static_cast<std::uint32_t>(mix64(seed) >> 32);
}

std::vector<NodeId> contenders(const MeshGraph& g, const ElectionState& st, NodeId k,
                               SlotIndex s) {
  std::vector<NodeId> out{k};
  for (NodeId j : g.two_hop(k)) {
    if (st.next_eligible.at(j) <= s) out.push_back(j);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Election::Election(const MeshGraph& g, const SchedulerConfig& cfg, bool keep_history)
    : graph_(&g),
      state_(g.node_count()),
      keep_history_(keep_history),
      value_(g.node_count()),
      eligible_(g.node_count()) {
  cfg.validate(g.node_count());
  holdoff_.reserve(g.node_count());
  for (int x : cfg.exponents) holdoff_.push_back(holdoff_time(x, cfg.base));
}

std::vector<NodeId> Election::step() {
  const std::size_t n = graph_->node_count();
  const SlotIndex s = slot_++;
  for (NodeId k = 0; k < n; ++k) {
    eligible_[k] = state_.next_eligible[k] <= s;
    if (eligible_[k]) value_[k] = mixing_value(k, s);
  }

  std::vector<NodeId> winners;
  for (NodeId k = 0; k < n; ++k) {
    if (!eligible_[k]) continue;
    const auto hood = graph_->two_hop(k);
    const bool wins = std::none_of(hood.begin(), hood.end(), [&](NodeId j) {
      return eligible_[j] && beats(value_[j], j, value_[k], k);
    });
    if (wins) winners.push_back(k);
  }
  for (NodeId k : winners) {
    state_.next_eligible[k] = s + holdoff_[k] + 1;
    if (keep_history_) state_.win_history[k].push_back(s);
  }
  return winners;
}

std::vector<SlotIndex> ElectionTrace::wins_of(NodeId node) const {
  std::vector<SlotIndex> out;
  for (SlotIndex s = 0; s < winners.size(); ++s) {
    if (std::binary_search(winners[s].begin(), winners[s].end(), node)) out.push_back(s);
  }
  return out;
}

ElectionTrace run_election(const MeshGraph& g, const SchedulerConfig& cfg,
                           std::size_t total_slots) {
  if (total_slots < 1) throw std::invalid_argument("total_slots must be >= 1");
  Election election(g, cfg);
  ElectionTrace trace;
  trace.winners.reserve(total_slots);
  for (std::size_t s = 0; s < total_slots; ++s) trace.winners.push_back(election.step());
  trace.final_state = election.state();
  return trace;
}

double measured_interval(std::span<const SlotIndex> wins) {
  if (wins.size() < 2) throw std::invalid_argument("need at least two wins to measure an interval");
  if (std::adjacent_find(wins.begin(), wins.end(), std::greater_equal<>{}) != wins.end()) {
    throw std::invalid_argument("win slots must be strictly increasing");
  }
  // Successive gaps telescope to last - first.
  return static_cast<double>(wins.back() - wins.front()) / static_cast<double>(wins.size() - 1);
}

double measured_interval(const ElectionTrace& trace, NodeId node) {
  return measured_interval(trace.final_state.win_history.at(node));
}

std::size_t count_collisions(const MeshGraph& g, const ElectionTrace& trace) {
  std::size_t bad = 0;
  for (const auto& slot_winners : trace.winners) {
    for (std::size_t i = 0; i < slot_winners.size(); ++i) {
      auto hood = g.two_hop(slot_winners[i]);
      for (std::size_t j = i + 1; j < slot_winners.size(); ++j) {
        if (std::binary_search(hood.begin(), hood.end(), slot_winners[j])) ++bad;
      }
    }
  }
  return bad;
}

std::size_t count_holdoff_violations(const SchedulerConfig& cfg, const ElectionTrace& trace) {
  // Audits the per-slot winner lists, not the election's own bookkeeping.
  std::size_t bad = 0;
  std::vector<std::optional<SlotIndex>> last(cfg.exponents.size());
  for (SlotIndex s = 0; s < trace.winners.size(); ++s) {
    for (NodeId w : trace.winners[s]) {
      const SlotIndex holdoff = holdoff_time(cfg.exponents.at(w), cfg.base);
      if (last.at(w) && s - *last[w] <= holdoff) ++bad;
      last[w] = s;
    }
  }
  return bad;
}

}  // namespace esdmesh
