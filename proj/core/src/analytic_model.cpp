#include "esdmesh/analytic_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace esdmesh {

namespace {

void check_exponent(int x) {
  if (x < kMinHoldoffExponent || x > kMaxHoldoffExponent) {
    throw std::invalid_argument("holdoff exponent " + std::to_string(x) + " outside [0,7]");
  }
}

void check_base(int base) {
  if (base < 0 || base > kMaxHoldoffBase) {
    throw std::invalid_argument("holdoff base " + std::to_string(base) + " outside [0," +
                                std::to_string(kMaxHoldoffBase) + "]");
  }
}

}  // namespace

SchedulerConfig SchedulerConfig::uniform(std::size_t node_count, int exponent, int base) {
  SchedulerConfig cfg{base, std::vector<int>(node_count, exponent)};
  cfg.validate(node_count);
  return cfg;
}

void SchedulerConfig::validate(std::size_t node_count) const {
  check_base(base);
  if (exponents.size() != node_count) {
    throw std::invalid_argument("scheduler config has " + std::to_string(exponents.size()) +
                                " exponents for " + std::to_string(node_count) + " nodes");
  }
  std::for_each(exponents.begin(), exponents.end(), check_exponent);
}

NeighborhoodKnowledge NeighborhoodKnowledge::full(const MeshGraph& g) {
  NeighborhoodKnowledge nk;
  nk.known.reserve(g.node_count());
  for (NodeId k = 0; k < g.node_count(); ++k) nk.known.push_back(two_hop_neighborhood(g, k));
  nk.unknown_count.assign(g.node_count(), 0);
  return nk;
}

void NeighborhoodKnowledge::validate(const MeshGraph& g) const {
  if (known.size() != g.node_count() || unknown_count.size() != g.node_count()) {
    throw std::invalid_argument("neighborhood knowledge does not cover every node");
  }
  for (NodeId k = 0; k < g.node_count(); ++k) {
    auto hood = g.two_hop(k);
    std::vector<NodeId> sorted = known[k];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("node " + std::to_string(k) + ": duplicate known neighbor");
    }
    if (!std::includes(hood.begin(), hood.end(), sorted.begin(), sorted.end())) {
      throw std::invalid_argument("node " + std::to_string(k) +
                                  ": known set is not within its 2-hop neighborhood");
    }
    if (sorted.size() + unknown_count[k] > hood.size()) {
      throw std::invalid_argument("node " + std::to_string(k) +
                                  ": known + unknown exceeds the 2-hop neighborhood size");
    }
  }
}

std::uint64_t holdoff_time(int exponent, int base) {
  check_exponent(exponent);
  check_base(base);
  return std::uint64_t{1} << (exponent + base);
}

double expected_interval(int exponent, double es, int base) {
  if (!(es >= 1.0)) throw std::invalid_argument("expected contention must be >= 1");
  return static_cast<double>(holdoff_time(exponent, base)) + es;
}

ExpectedSchedule solve_expected_contention(const MeshGraph& g, const SchedulerConfig& cfg,
                                           const NeighborhoodKnowledge& nk, double tol,
                                           std::size_t max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  cfg.validate(g.node_count());
  nk.validate(g);

  const std::size_t n = g.node_count();
  std::vector<double> holdoff(n);
  for (std::size_t k = 0; k < n; ++k) {
    holdoff[k] = static_cast<double>(holdoff_time(cfg.exponents[k], cfg.base));
  }

  // Split each known set into the neighbors that contribute a ratio term and
  // a constant count of faster-cycling neighbors.
  std::vector<std::vector<NodeId>> competing(n);
  std::vector<double> constant(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t faster = 0;
    for (NodeId j : nk.known[k]) {
      if (cfg.exponents[j] >= cfg.exponents[k]) {
        competing[k].push_back(j);
      } else {
        ++faster;
      }
    }
    constant[k] = static_cast<double>(faster + nk.unknown_count[k]) + 1.0;
  }

  ExpectedSchedule out;
  std::vector<double> current = constant;
  std::vector<double> next(n);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    double delta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double own_cycle = holdoff[k] + current[k];
      double sum = constant[k];
      for (NodeId j : competing[k]) sum += own_cycle / (holdoff[j] + current[j]);
      if (!std::isfinite(sum)) {
        throw std::runtime_error("contention fixed point diverged at node " +
                                 std::to_string(k) + " (iteration " + std::to_string(it) + ")");
      }
      next[k] = sum;
      delta = std::max(delta, std::abs(sum - current[k]));
    }
    current.swap(next);
    out.iterations = it;
    if (delta <= tol) {
      out.converged = true;
      break;
    }
  }

  out.es = current;
  out.etau.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.etau[k] = holdoff[k] + out.es[k];
  return out;
}

ExpectedSchedule solve_expected_contention(const MeshGraph& g, const SchedulerConfig& cfg,
                                           double tol, std::size_t max_iter) {
  return solve_expected_contention(g, cfg, NeighborhoodKnowledge::full(g), tol, max_iter);
}

}  // namespace esdmesh
