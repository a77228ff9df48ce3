#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "esdmesh/topology.hpp"

namespace esdmesh {

inline constexpr int kMinHoldoffExponent = 0;
inline constexpr int kMaxHoldoffExponent = 7;  // 3-bit field
inline constexpr int kDefaultHoldoffBase = 4;
inline constexpr int kMaxHoldoffBase = 32;

/// Per-node transmit holdoff exponents plus the shared base offset.
struct SchedulerConfig {
  int base = kDefaultHoldoffBase;
  std::vector<int> exponents;

  static SchedulerConfig uniform(std::size_t node_count, int exponent,
                                 int base = kDefaultHoldoffBase);

  /// Throws std::invalid_argument when base or any exponent is out of range,
  /// or when the exponent count does not match `node_count`.
  void validate(std::size_t node_count) const;
};

/// Which 2-hop neighbors each node has schedule information for.
struct NeighborhoodKnowledge {
  std::vector<std::vector<NodeId>> known;
  std::vector<std::size_t> unknown_count;

  /// Every 2-hop neighbor known, no unknowns.
  static NeighborhoodKnowledge full(const MeshGraph& g);

  void validate(const MeshGraph& g) const;
};

struct ExpectedSchedule {
  std::vector<double> es;    // expected contention slots, >= 1
  std::vector<double> etau;  // expected slots between successive wins
  bool converged = false;
  std::size_t iterations = 0;
};

inline constexpr double kDefaultSolverTolerance = 1e-9;
inline constexpr std::size_t kDefaultSolverMaxIterations = 10000;

/// 2^(x + base) transmission opportunities.
std::uint64_t holdoff_time(int exponent, int base = kDefaultHoldoffBase);

/// Holdoff plus expected contention.
double expected_interval(int exponent, double es, int base = kDefaultHoldoffBase);

/// Solves the contention fixed point by Jacobi iteration:
///
///   S_k = sum_{j known, x_j >= x_k} (H_k + S_k) / (H_j + S_j)
///       + #{j known : x_j < x_k} + unknown_k + 1,   H_k = 2^(x_k + base)
///
/// starting from the lower bound 1 + #{x_j < x_k} + unknown_k. Stops when the
/// max-norm change between iterates is <= tol; if max_iter is exhausted the
/// last iterate is returned with converged = false. Throws std::runtime_error
/// if an iterate becomes non-finite.
ExpectedSchedule solve_expected_contention(const MeshGraph& g, const SchedulerConfig& cfg,
                                           const NeighborhoodKnowledge& nk,
                                           double tol = kDefaultSolverTolerance,
                                           std::size_t max_iter = kDefaultSolverMaxIterations);

/// Full-knowledge convenience overload.
ExpectedSchedule solve_expected_contention(const MeshGraph& g, const SchedulerConfig& cfg,
                                           double tol = kDefaultSolverTolerance,
                                           std::size_t max_iter = kDefaultSolverMaxIterations);

}  // namespace esdmesh
