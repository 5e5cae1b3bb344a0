#pragma once

#include <array>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/map.hpp"

namespace hyperwalk {

/// Nested triangles at levels 0 (outer) .. n (inner), consecutive triangles
/// joined by an antiprism band of 6 faces. Vertex 3k + j is corner j of level k.
struct TrapGraph {
  int n = 0;
  std::vector<int> level;
  WeightedGraph graph;
  std::vector<int> entry;  // the level-1 triangle
  std::vector<std::array<int, 3>> faces;  // counter-clockwise
  std::vector<int> outer;  // level-0 triangle, counter-clockwise
};

TrapGraph build_trap(int n);

/// The trap as a triangulated 3-gon (root from outer[0] to outer[1]).
HalfEdgeMap trap_map(const TrapGraph& trap);

/// For each vertex: neighbours (with multiplicity) at level - 1, level, level + 1.
std::vector<std::array<int, 3>> trap_level_counts(const TrapGraph& trap);
/// Every vertex at a level 0 < k < n has equally many neighbours at k-1, k, k+1.
bool trap_lumpable(const TrapGraph& trap);

struct ConfinementResult {
  double probability = 0.0;   // 0 if it underflowed
  double log_probability = 0.0;
  bool underflow = false;
};

/// P(X_t in the level-1 triangle, no visit to level 0 up to t) for SRW on the
/// trap started at a level-1 vertex.
ConfinementResult trap_confinement_dp(int n, long t);

/// P(X_t = 1, X_s in [1, n] for s <= t) for the walk with steps uniform in {-1, 0, 1} started at 1.
ConfinementResult interval_confinement_dp(int n, long t);

using BigRational = boost::multiprecision::cpp_rational;
/// Same probability in exact rational arithmetic (small n, t only).
BigRational interval_confinement_exact(int n, int t);

}  // namespace hyperwalk
