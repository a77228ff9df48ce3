#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace esdmesh {

/// Dense node index, 0..N-1 within one graph.
using NodeId = std::uint32_t;

/// Unordered link stored with `a < b`.
struct Link {
  NodeId a;
  NodeId b;

  friend bool operator==(const Link&, const Link&) = default;
  friend auto operator<=>(const Link&, const Link&) = default;
};

/// Immutable, simple undirected connectivity graph.
///
/// Adjacency lists and 2-hop contention neighborhoods are computed once at
/// construction. Links are canonicalized (`a < b`) and kept sorted, so the
/// link index returned by `link_index` is stable for the graph's lifetime.
class MeshGraph {
 public:
  MeshGraph() = default;

  /// Throws std::invalid_argument on self-links, duplicates or ids out of range.
  MeshGraph(std::size_t node_count, std::vector<std::pair<NodeId, NodeId>> links);

  std::size_t node_count() const { return adjacency_.size(); }
  std::span<const Link> links() const { return links_; }

  /// Sorted 1-hop neighbors of `k`.
  std::span<const NodeId> neighbors(NodeId k) const;

  /// Sorted nodes at graph distance 1 or 2 from `k`, excluding `k`.
  std::span<const NodeId> two_hop(NodeId k) const;

  bool adjacent(NodeId a, NodeId b) const;

  /// Index of link {a,b} in links(), or -1 when the nodes are not adjacent.
  std::ptrdiff_t link_index(NodeId a, NodeId b) const;

 private:
  void check_node(NodeId k) const;

  std::vector<Link> links_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<std::vector<NodeId>> two_hop_;
};

/// rows x cols lattice, 4-connectivity, node id = row * cols + col.
MeshGraph build_grid(std::size_t rows, std::size_t cols);

/// Copy of the 2-hop neighborhood of `k`; throws std::out_of_range for an invalid id.
std::vector<NodeId> two_hop_neighborhood(const MeshGraph& g, NodeId k);

/// True for a single connected component (an empty graph counts as connected).
bool is_connected(const MeshGraph& g);

/// Hop distances from `src` by BFS; unreachable nodes get SIZE_MAX.
std::vector<std::size_t> bfs_distances(const MeshGraph& g, NodeId src);

/// Parses the line format `nodes N` followed by `link A B` lines.
/// Blank lines and `#` comments are ignored.
MeshGraph read_topology(std::istream& in);
MeshGraph load_topology_file(const std::string& path);
void write_topology(std::ostream& out, const MeshGraph& g);

}  // namespace esdmesh
