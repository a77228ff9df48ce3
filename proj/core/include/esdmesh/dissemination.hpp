#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esdmesh/state_table.hpp"

namespace esdmesh {

inline constexpr std::size_t kDefaultAdvertisementCapacity = 8;

struct AdvertisedEntry {
  NodeId node;
  NodeState state;

  friend bool operator==(const AdvertisedEntry&, const AdvertisedEntry&) = default;
};

/// State-table delta piggybacked on a won control slot.
struct DschMessage {
  NodeId sender = 0;
  std::vector<AdvertisedEntry> entries;
};

/// Builds the next advertisement from `table` and clears the dirty flag of
/// every entry it carries.
///
/// Order: the self entry if dirty, then remaining dirty entries by ascending
/// id, then (if capacity remains) non-dirty entries least recently
/// advertised first, ties by ascending id.
DschMessage build_advertisement(StateTable& table,
                                std::size_t capacity = kDefaultAdvertisementCapacity);

/// Adopts every carried entry whose timestamp is strictly newer than the
/// local copy, or which is locally absent, and marks it dirty for onward
/// propagation. Entries about the receiver itself are ignored. Returns the
/// number of adopted entries.
std::size_t merge_advertisement(StateTable& table, const DschMessage& message);

/// True iff every table holds an entry for every node and all tables agree.
bool is_converged(std::span<const StateTable> tables);

}  // namespace esdmesh
