#include "esdmesh/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace esdmesh {

std::string_view to_string(MetricKind m) {
  switch (m) {
    case MetricKind::Esd:
      return "esd";
    case MetricKind::HopCount:
      return "hopcount";
  }
  return "?";
}

MetricKind parse_metric_kind(std::string_view text) {
  if (text == "esd") return MetricKind::Esd;
  if (text == "hopcount") return MetricKind::HopCount;
  throw std::invalid_argument("unknown metric `" + std::string(text) + "`");
}

bool is_valid_route(const MeshGraph& g, std::span<const NodeId> nodes) {
  if (nodes.size() < 2) return false;
  std::vector<char> seen(g.node_count(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] >= g.node_count() || seen[nodes[i]]++) return false;
    if (i > 0 && !g.adjacent(nodes[i - 1], nodes[i])) return false;
  }
  return true;
}

LinkWeights hop_count_weights(const MeshGraph& g) { return LinkWeights(g.links().size(), 1.0); }

LinkWeights link_weights(const MeshGraph& g, const StateTable& states, MetricKind m) {
  if (m == MetricKind::HopCount) return hop_count_weights(g);
  LinkWeights w;
  w.reserve(g.links().size());
  for (const Link& l : g.links()) w.push_back(esd_link(states.at(l.a), states.at(l.b)));
  return w;
}

bool ShortestPaths::reachable(NodeId v) const { return std::isfinite(dist.at(v)); }

std::vector<NodeId> ShortestPaths::path_to(NodeId v) const {
  if (!reachable(v)) {
    throw std::runtime_error("node " + std::to_string(v) + " unreachable from " +
                             std::to_string(source));
  }
  std::vector<NodeId> path{v};
  while (path.back() != source) {
    if (path.size() > dist.size()) throw std::logic_error("predecessor chain has a cycle");
    path.push_back(predecessor[path.back()].value());
  }
  std::reverse(path.begin(), path.end());
  return path;
}

ShortestPaths bellman_ford(const MeshGraph& g, std::span<const LinkCost> weights, NodeId src) {
  const std::size_t n = g.node_count();
  if (weights.size() != g.links().size()) {
    throw std::invalid_argument("weight vector does not match the link count");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw std::invalid_argument("link " + std::to_string(i) + " has invalid weight " +
                                  std::to_string(weights[i]));
    }
  }
  if (src >= n) throw std::out_of_range("source node out of range");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  ShortestPaths sp;
  sp.source = src;
  sp.dist.assign(n, kInf);
  sp.hops.assign(n, 0);
  sp.predecessor.assign(n, std::nullopt);
  // Best node sequence per node, kept for the lexicographic tie-break.
  std::vector<std::vector<NodeId>> best(n);
  sp.dist[src] = 0.0;
  best[src] = {src};

  auto relax = [&](NodeId u, NodeId v, double w) {
    if (!std::isfinite(sp.dist[u])) return false;
    const double cand = sp.dist[u] + w;
    const std::size_t cand_hops = sp.hops[u] + 1;
    bool better = cand < sp.dist[v];
    if (!better && cand == sp.dist[v]) {
      if (cand_hops != sp.hops[v]) {
        better = cand_hops < sp.hops[v];
      } else {
        // Same length: compare best[u] + v against best[v] without copying.
        better = std::lexicographical_compare(best[u].begin(), best[u].end(), best[v].begin(),
                                              best[v].end() - 1) ||
                 (std::equal(best[u].begin(), best[u].end(), best[v].begin()) &&
                  v < best[v].back());
      }
    }
    if (!better) return false;
    sp.dist[v] = cand;
    sp.hops[v] = cand_hops;
    sp.predecessor[v] = u;
    best[v] = best[u];
    best[v].push_back(v);
    return true;
  };

  const auto links = g.links();
  bool changed = true;
  for (std::size_t round = 0; changed; ++round) {
    if (round > n) throw std::logic_error("Bellman-Ford failed to settle");
    changed = false;
    for (std::size_t i = 0; i < links.size(); ++i) {
      changed |= relax(links[i].a, links[i].b, weights[i]);
      changed |= relax(links[i].b, links[i].a, weights[i]);
    }
  }
  return sp;
}

SourceRoute compute_route(const MeshGraph& g, std::span<const LinkCost> weights, NodeId src,
                          NodeId dst) {
  if (src == dst) throw std::invalid_argument("route source equals destination");
  if (dst >= g.node_count()) throw std::out_of_range("destination node out of range");
  const ShortestPaths sp = bellman_ford(g, weights, src);
  SourceRoute route{sp.path_to(dst)};
  if (!is_valid_route(g, route.nodes)) throw std::logic_error("computed route is not a simple path");
  return route;
}

SourceRoute compute_route(const MeshGraph& g, const StateTable& states, MetricKind m, NodeId src,
                          NodeId dst) {
  return compute_route(g, link_weights(g, states, m), src, dst);
}

double route_cost(const MeshGraph& g, std::span<const LinkCost> weights,
                  std::span<const NodeId> nodes) {
  if (!is_valid_route(g, nodes)) throw std::invalid_argument("not a valid route");
  double total = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    total += weights[static_cast<std::size_t>(g.link_index(nodes[i - 1], nodes[i]))];
  }
  return total;
}

}  // namespace esdmesh
