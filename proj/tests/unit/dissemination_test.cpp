#include <gtest/gtest.h>

#include <random>

#include "esdmesh/dissemination.hpp"
#include "esdmesh/topology.hpp"

namespace esdmesh {
namespace {

std::vector<NodeId> ids(const DschMessage& m) {
  std::vector<NodeId> out;
  for (const auto& e : m.entries) out.push_back(e.node);
  return out;
}

DschMessage message(NodeId sender, std::vector<std::pair<NodeId, Timestamp>> items) {
  DschMessage m{sender, {}};
  for (auto [k, ts] : items) m.entries.push_back({k, NodeState{k, 17.0 + k, ts}});
  return m;
}

TEST(StateTable, StartsWithDirtySelf) {
  StateTable t(3, NodeState{0, 17.0, 0});
  EXPECT_EQ(t.size(), 1u);
  EXPECT_TRUE(t.contains(3));
  EXPECT_EQ(t.dirty(), (std::set<NodeId>{3}));
  EXPECT_THROW(t.at(0), std::out_of_range);
}

TEST(StateTable, UpdateSelfRejectsOlderFrames) {
  StateTable t(0, NodeState{0, 17.0, 5});
  t.update_self(2, 20.0, 5);
  EXPECT_EQ(t.self(), (NodeState{2, 20.0, 5}));
  EXPECT_THROW(t.update_self(1, 20.0, 4), std::invalid_argument);
}

TEST(BuildAdvertisement, SelfFirstThenDirtyByIdThenStalest) {
  StateTable t(5, NodeState{1, 17.0, 0});
  merge_advertisement(t, message(9, {{9, 1}, {2, 1}, {7, 1}}));
  EXPECT_EQ(ids(build_advertisement(t, 8)), (std::vector<NodeId>{5, 2, 7, 9}));
  EXPECT_TRUE(t.dirty().empty());

  // Nothing dirty: anti-entropy cycles the least recently advertised,
  // ties by id.
  EXPECT_EQ(ids(build_advertisement(t, 2)), (std::vector<NodeId>{2, 5}));
  EXPECT_EQ(ids(build_advertisement(t, 2)), (std::vector<NodeId>{7, 9}));
  EXPECT_EQ(ids(build_advertisement(t, 2)), (std::vector<NodeId>{2, 5}));

  // Dirty entries preempt the rotation.
  merge_advertisement(t, message(9, {{9, 2}}));
  EXPECT_EQ(ids(build_advertisement(t, 2)), (std::vector<NodeId>{9, 7}));
}

TEST(BuildAdvertisement, CapacityBoundsAndCarriesOverDirt) {
  StateTable t(0, NodeState{0, 17.0, 0});
  std::vector<std::pair<NodeId, Timestamp>> many;
  for (NodeId k = 1; k <= 20; ++k) many.push_back({k, 1});
  merge_advertisement(t, message(1, many));
  const auto first = build_advertisement(t, 8);
  EXPECT_EQ(first.entries.size(), 8u);
  EXPECT_EQ(first.sender, 0u);
  EXPECT_EQ(ids(first), (std::vector<NodeId>{0, 1, 2, 3, 4, 5, 6, 7}));
  EXPECT_EQ(t.dirty().size(), 13u);
  EXPECT_EQ(ids(build_advertisement(t, 8)).front(), 8u);
  EXPECT_TRUE(build_advertisement(t, 0).entries.empty());
}

TEST(MergeAdvertisement, AdoptsOnlyStrictlyNewer) {
  StateTable t(0, NodeState{0, 17.0, 0});
  EXPECT_EQ(merge_advertisement(t, message(1, {{1, 3}})), 1u);
  EXPECT_EQ(merge_advertisement(t, message(1, {{1, 3}})), 0u);  // equal timestamp
  EXPECT_EQ(merge_advertisement(t, message(1, {{1, 2}})), 0u);  // older
  EXPECT_EQ(t.at(1).timestamp, 3u);
  EXPECT_EQ(merge_advertisement(t, message(1, {{1, 4}})), 1u);
  EXPECT_EQ(t.at(1).timestamp, 4u);
  EXPECT_TRUE(t.dirty().contains(1));
}

TEST(MergeAdvertisement, IgnoresEntriesAboutReceiver) {
  StateTable t(0, NodeState{3, 17.0, 1});
  EXPECT_EQ(merge_advertisement(t, message(1, {{0, 99}})), 0u);
  EXPECT_EQ(t.self(), (NodeState{3, 17.0, 1}));
}

TEST(MergeAdvertisement, ReplayIsIdempotent) {
  StateTable a(0, NodeState{0, 17.0, 0});
  const auto m = message(2, {{1, 4}, {2, 5}, {3, 1}});
  merge_advertisement(a, m);
  const auto snapshot = a.entries();
  const auto dirty = a.dirty();
  EXPECT_EQ(merge_advertisement(a, m), 0u);
  EXPECT_EQ(a.entries(), snapshot);
  EXPECT_EQ(a.dirty(), dirty);
}

TEST(Gossip, RandomExchangesConvergeAndNeverRegress) {
  std::mt19937_64 rng(21);
  const MeshGraph g = build_grid(4, 4);
  const std::size_t n = g.node_count();
  std::vector<StateTable> tables;
  for (NodeId k = 0; k < n; ++k) tables.emplace_back(k, NodeState{0, 17.0, 0});
  EXPECT_FALSE(is_converged(tables));

  Timestamp frame = 0;
  for (int round = 0; round < 4000; ++round) {
    const NodeId s = rng() % n;
    if (rng() % 50 == 0) {
      tables[s].update_self(static_cast<std::uint32_t>(rng() % 4), 17.0, ++frame);
    }
    const auto before = tables;
    const auto m = build_advertisement(tables[s], 8);
    for (NodeId r : g.neighbors(s)) merge_advertisement(tables[r], m);
    for (NodeId k = 0; k < n; ++k) {
      for (const auto& [id, st] : before[k].entries()) {
        EXPECT_GE(tables[k].at(id).timestamp, st.timestamp);
      }
    }
  }
  // Quiesce: keep gossiping without updates.
  for (int round = 0; round < 4000 && !is_converged(tables); ++round) {
    const NodeId s = rng() % n;
    const auto m = build_advertisement(tables[s], 8);
    for (NodeId r : g.neighbors(s)) merge_advertisement(tables[r], m);
  }
  EXPECT_TRUE(is_converged(tables));
  for (NodeId k = 0; k < n; ++k) EXPECT_EQ(tables[0].at(k), tables[k].self());
}

TEST(IsConverged, RequiresFullAgreement) {
  std::vector<StateTable> tables{StateTable(0, {0, 17, 0}), StateTable(1, {0, 17, 0})};
  EXPECT_FALSE(is_converged(tables));
  merge_advertisement(tables[0], build_advertisement(tables[1]));
  merge_advertisement(tables[1], build_advertisement(tables[0]));
  EXPECT_TRUE(is_converged(tables));
  tables[0].update_self(1, 17, 1);
  EXPECT_FALSE(is_converged(tables));
  EXPECT_TRUE(is_converged(std::span<const StateTable>{}));
}

}  // namespace
}  // namespace esdmesh
