#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "esdmesh/metric.hpp"
#include "esdmesh/state_table.hpp"
#include "esdmesh/topology.hpp"

namespace esdmesh {

enum class MetricKind { Esd, HopCount };

std::string_view to_string(MetricKind m);
/// Accepts "esd" and "hopcount"; throws std::invalid_argument otherwise.
MetricKind parse_metric_kind(std::string_view text);

/// Loop-free node sequence from source to destination, carried by packets.
struct SourceRoute {
  std::vector<NodeId> nodes;

  std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }
  NodeId source() const { return nodes.front(); }
  NodeId destination() const { return nodes.back(); }
  SourceRoute reversed() const { return {{nodes.rbegin(), nodes.rend()}}; }

  friend bool operator==(const SourceRoute&, const SourceRoute&) = default;
};

/// Simple path of >= 2 nodes with every consecutive pair adjacent in `g`.
bool is_valid_route(const MeshGraph& g, std::span<const NodeId> nodes);

/// Link weights aligned with g.links().
using LinkWeights = std::vector<LinkCost>;

/// ESD: esd_link per link from `states`, which must hold every node (throws
/// std::out_of_range otherwise). HOP_COUNT: 1 per link, `states` unused.
LinkWeights link_weights(const MeshGraph& g, const StateTable& states, MetricKind m);
LinkWeights hop_count_weights(const MeshGraph& g);

struct ShortestPaths {
  NodeId source = 0;
  std::vector<double> dist;  // +inf when unreachable
  std::vector<std::size_t> hops;
  std::vector<std::optional<NodeId>> predecessor;

  bool reachable(NodeId v) const;
  /// Node sequence source..v following predecessors; throws if unreachable.
  std::vector<NodeId> path_to(NodeId v) const;
};

/// Single-source Bellman-Ford over the undirected graph.
///
/// Candidate paths are ordered by (cost, hop count, node sequence), so ties
/// resolve to the fewest hops and then the lexicographically smallest path.
/// Throws std::invalid_argument on a negative or non-finite weight.
ShortestPaths bellman_ford(const MeshGraph& g, std::span<const LinkCost> weights, NodeId src);

/// Minimum-cost route under the given weights. Throws std::invalid_argument
/// for src == dst and std::runtime_error when dst is unreachable.
SourceRoute compute_route(const MeshGraph& g, std::span<const LinkCost> weights, NodeId src,
                          NodeId dst);
SourceRoute compute_route(const MeshGraph& g, const StateTable& states, MetricKind m, NodeId src,
                          NodeId dst);

/// Sum of link weights along a valid route.
double route_cost(const MeshGraph& g, std::span<const LinkCost> weights,
                  std::span<const NodeId> nodes);

}  // namespace esdmesh
