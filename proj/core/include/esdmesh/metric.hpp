#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "esdmesh/state_table.hpp"
#include "esdmesh/topology.hpp"

namespace esdmesh {

/// Flow-weighted expected waiting, in slots. Never negative.
using LinkCost = double;

/// Per-node flow descriptor counts, indexed by NodeId.
using FlowCounts = std::vector<std::uint32_t>;

/// Expected scheduler delay of the link a-b: the mean of the two endpoints'
/// flow-weighted expected transmission intervals.
LinkCost esd_link(const NodeState& a, const NodeState& b);

/// Node-sum path cost: every node on the path contributes E[tau] * flowdesc
/// once, endpoints included. Throws std::invalid_argument on a path with
/// fewer than two nodes or non-adjacent consecutive nodes.
double path_cost(const MeshGraph& g, std::span<const NodeId> path, const StateTable& states);

/// Same cost assembled from link weights: the sum of esd_link over the path
/// plus half of each endpoint's term (endpoints are only half-counted by the
/// link sum).
double path_cost_by_links(const MeshGraph& g, std::span<const NodeId> path,
                          const StateTable& states);

/// Admits (delta = +1) or tears down (delta = -1) a MAC-level flow along
/// `route`: endpoints change by 1, relays by 2 (incoming and outgoing).
/// On underflow nothing is modified and std::underflow_error is thrown.
void apply_flow(FlowCounts& counts, const MeshGraph& g, std::span<const NodeId> route,
                int delta);

}  // namespace esdmesh
