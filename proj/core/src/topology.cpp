#include "esdmesh/topology.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace esdmesh {

MeshGraph::MeshGraph(std::size_t node_count, std::vector<std::pair<NodeId, NodeId>> links)
    : adjacency_(node_count), two_hop_(node_count) {
  if (node_count > std::numeric_limits<NodeId>::max()) {
    throw std::invalid_argument("node count exceeds NodeId range");
  }
  links_.reserve(links.size());
  for (auto [a, b] : links) {
    if (a >= node_count || b >= node_count) {
      throw std::invalid_argument("link (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") references a node >= " + std::to_string(node_count));
    }
    if (a == b) {
      throw std::invalid_argument("self-link on node " + std::to_string(a));
    }
    links_.push_back(Link{std::min(a, b), std::max(a, b)});
  }
  std::sort(links_.begin(), links_.end());
  if (auto dup = std::adjacent_find(links_.begin(), links_.end()); dup != links_.end()) {
    throw std::invalid_argument("duplicate link (" + std::to_string(dup->a) + "," +
                                std::to_string(dup->b) + ")");
  }

  for (const Link& l : links_) {
    adjacency_[l.a].push_back(l.b);
    adjacency_[l.b].push_back(l.a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  for (std::size_t k = 0; k < node_count; ++k) {
    std::vector<NodeId>& out = two_hop_[k];
    for (NodeId j : adjacency_[k]) {
      out.push_back(j);
      for (NodeId i : adjacency_[j]) {
        if (i != k) out.push_back(i);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
}

void MeshGraph::check_node(NodeId k) const {
  if (k >= adjacency_.size()) {
    throw std::out_of_range("node " + std::to_string(k) + " not in graph of " +
                            std::to_string(adjacency_.size()) + " nodes");
  }
}

std::span<const NodeId> MeshGraph::neighbors(NodeId k) const {
  check_node(k);
  return adjacency_[k];
}

std::span<const NodeId> MeshGraph::two_hop(NodeId k) const {
  check_node(k);
  return two_hop_[k];
}

bool MeshGraph::adjacent(NodeId a, NodeId b) const { return link_index(a, b) >= 0; }

std::ptrdiff_t MeshGraph::link_index(NodeId a, NodeId b) const {
  check_node(a);
  check_node(b);
  const Link key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(links_.begin(), links_.end(), key);
  if (it == links_.end() || *it != key) return -1;
  return it - links_.begin();
}

MeshGraph build_grid(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("grid dimensions must be >= 1");
  std::vector<std::pair<NodeId, NodeId>> links;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const auto id = static_cast<NodeId>(r * cols + c);
      if (c + 1 < cols) links.emplace_back(id, id + 1);
      if (r + 1 < rows) links.emplace_back(id, static_cast<NodeId>(id + cols));
    }
  }
  return MeshGraph(rows * cols, std::move(links));
}

std::vector<NodeId> two_hop_neighborhood(const MeshGraph& g, NodeId k) {
  auto span = g.two_hop(k);
  return {span.begin(), span.end()};
}

std::vector<std::size_t> bfs_distances(const MeshGraph& g, NodeId src) {
  std::vector<std::size_t> dist(g.node_count(), std::numeric_limits<std::size_t>::max());
  std::queue<NodeId> frontier;
  dist.at(src) = 0;
  frontier.push(src);
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == std::numeric_limits<std::size_t>::max()) {
        dist[v] = dist[u] + 1;
        frontier.push(v);
      }
    }
  }
  return dist;
}

bool is_connected(const MeshGraph& g) {
  if (g.node_count() == 0) return true;
  const auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
    return d == std::numeric_limits<std::size_t>::max();
  });
}

MeshGraph read_topology(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_count = false;
  std::size_t count = 0;
  std::vector<std::pair<NodeId, NodeId>> links;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword)) continue;
    auto fail = [&](const std::string& what) {
      throw std::invalid_argument("topology line " + std::to_string(line_no) + ": " + what);
    };
    if (keyword == "nodes") {
      long long n = -1;
      if (have_count) fail("duplicate `nodes` line");
      if (!(ls >> n) || n < 0) fail("expected `nodes N` with N >= 0");
      count = static_cast<std::size_t>(n);
      have_count = true;
    } else if (keyword == "link") {
      long long a = -1, b = -1;
      if (!have_count) fail("`link` before `nodes`");
      if (!(ls >> a >> b) || a < 0 || b < 0) fail("expected `link A B`");
      links.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    } else {
      fail("unknown keyword `" + keyword + "`");
    }
    std::string extra;
    if (ls >> extra) fail("trailing token `" + extra + "`");
  }
  if (!have_count) throw std::invalid_argument("topology: missing `nodes N` line");
  return MeshGraph(count, std::move(links));
}

MeshGraph load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open topology file " + path);
  return read_topology(in);
}

void write_topology(std::ostream& out, const MeshGraph& g) {
  out << "nodes " << g.node_count() << '\n';
  for (const Link& l : g.links()) out << "link " << l.a << ' ' << l.b << '\n';
}

}  // namespace esdmesh
