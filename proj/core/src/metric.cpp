#include "esdmesh/metric.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace esdmesh {

namespace {

double load(const NodeState& s) { return s.etau * static_cast<double>(s.flowdesc); }

void check_path(const MeshGraph& g, std::span<const NodeId> path) {
  if (path.size() < 2) throw std::invalid_argument("path needs at least two nodes");
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!g.adjacent(path[i - 1], path[i])) {
      throw std::invalid_argument("path hop " + std::to_string(path[i - 1]) + "->" +
                                  std::to_string(path[i]) + " is not a link");
    }
  }
}

}  // namespace

LinkCost esd_link(const NodeState& a, const NodeState& b) { return (load(a) + load(b)) / 2.0; }

double path_cost(const MeshGraph& g, std::span<const NodeId> path, const StateTable& states) {
  check_path(g, path);
  double total = 0.0;
  for (NodeId k : path) total += load(states.at(k));
  return total;
}

double path_cost_by_links(const MeshGraph& g, std::span<const NodeId> path,
                          const StateTable& states) {
  check_path(g, path);
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += esd_link(states.at(path[i - 1]), states.at(path[i]));
  }
  return total + (load(states.at(path.front())) + load(states.at(path.back()))) / 2.0;
}

void apply_flow(FlowCounts& counts, const MeshGraph& g, std::span<const NodeId> route,
                int delta) {
  if (delta != 1 && delta != -1) throw std::invalid_argument("flow delta must be +1 or -1");
  if (counts.size() != g.node_count()) {
    throw std::invalid_argument("flow counts do not cover every node");
  }
  check_path(g, route);
  std::vector<char> seen(g.node_count(), 0);
  for (NodeId k : route) {
    if (seen[k]++) throw std::invalid_argument("route revisits node " + std::to_string(k));
  }

  auto weight = [&](std::size_t i) -> std::uint32_t {
    return (i == 0 || i + 1 == route.size()) ? 1 : 2;
  };
  if (delta < 0) {
    for (std::size_t i = 0; i < route.size(); ++i) {
      if (counts[route[i]] < weight(i)) {
        throw std::underflow_error("flowdesc underflow at node " + std::to_string(route[i]));
      }
    }
  }
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (delta > 0) {
      counts[route[i]] += weight(i);
    } else {
      counts[route[i]] -= weight(i);
    }
  }
}

}  // namespace esdmesh
