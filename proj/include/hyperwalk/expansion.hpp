#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "hyperwalk/graph.hpp"
#include "hyperwalk/map.hpp"

namespace hyperwalk {

/// |S| is the weight (degree sum) of S; Cardinality counts vertices instead
/// and is not used by the built-in checks.
enum class Volume { DegreeSum, Cardinality };

/// Delta_i S = i |S| - |dS|. Throws GraphError on an empty set.
double isolation(const WeightedGraph& g, const std::vector<int>& set, double i, Volume volume = Volume::DegreeSum);
/// Total weight of edges leaving the set (loops excluded).
double boundary_weight(const WeightedGraph& g, const std::vector<int>& set);

/// Delta_i S > Delta_i A for every proper subset A (exhaustive; |S| <= 24).
bool is_core(const WeightedGraph& g, const std::vector<int>& set, double i, Volume volume = Volume::DegreeSum);

struct CoreSet {
  std::vector<int> vertices;
  double delta = 0.0;
  bool is_core = true;
};

struct IsolationReport {
  double i = 0.0;
  std::vector<CoreSet> sets;
  std::vector<int> union_set;  // A_i
  std::vector<std::vector<int>> islands;
  std::vector<std::vector<int>> oceans;
  bool partial = false;  // cores larger than the size cap were not searched
};

inline constexpr int kMaxCoreCandidates = 20;

/// All i-isolated cores among the non-sink vertices with at most `size_cap`
/// vertices, their union A_i, islands and oceans.
IsolationReport enumerate_cores(const WeightedGraph& g, double i, int size_cap = 12, Volume volume = Volume::DegreeSum);

struct OceanChain {
  WeightedGraph graph;
  std::vector<int> ocean;  // vertex of g for each vertex of graph
  Eigen::MatrixXd weights; // w_i(u, v) over ocean indices, as computed (not symmetrized)
  IsolationReport report;
};

/// Induced chain on G \ A_i. w_i(u, v) = w(u, v) + sum_b w(u, b) h_b(v), where
/// h_b(v) is the probability that the walk from island vertex b first enters
/// the ocean at v.
OceanChain ocean_chain(const WeightedGraph& g, double i, int size_cap = 12);

struct CheegerResult {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> set;
};

/// inf |dS| / |S| over nonempty S avoiding the sinks (exhaustive; at most 16 candidates).
CheegerResult cheeger_bruteforce(const WeightedGraph& g, Volume volume = Volume::DegreeSum);

struct SpectralReport {
  double cheeger = 0.0;
  double norm = 0.0;  // operator norm of the chain killed at the sinks
  double bound = 0.0; // 1 - i^2 / 2
  bool holds = false;
  int iterations = 0;
  int root = -1;
  std::vector<double> return_probability;  // P_root(X_t = root, no sink before t), t = 0..n_max
  std::vector<double> return_bound;        // bound^t
  bool returns_hold = false;
};

/// Power iteration for the norm; i < 0 means "use cheeger_bruteforce".
SpectralReport spectral_bound_check(const WeightedGraph& g, double i = -1.0, int n_max = 50, double tol = 1e-10);

/// Exact law of X_n from x (loops included, sinks ignored).
std::vector<double> n_step_distribution(const WeightedGraph& g, int x, int n);

struct CarneVaropoulosReport {
  int x = 0;
  int n = 0;
  std::vector<double> slack;  // P_x(X_n = y) / bound(y)
  std::vector<int> distance;
  double max_slack = 0.0;
  bool holds = false;
};

CarneVaropoulosReport carne_varopoulos_check(const WeightedGraph& g, int x, int n);

struct HittingReport {
  int edges = 0;
  int m = 0;
  std::int64_t horizon = 0;  // 4 m k^2
  double max_survival = 0.0;
  int worst_start = -1;
  double bound = 0.0;  // 2^-m
  bool holds = false;
};

HittingReport hitting_tail_check(const WeightedGraph& g, const std::vector<int>& target, int m);

struct PathDegreeReport {
  int length = 0;
  std::uint64_t paths = 0;
  double max_average = 0.0;
  double mean_average = 0.0;
  int max_degree_sum = 0;
  bool capped = false;
  bool touched_frontier = false;
  std::vector<double> averages;  // one per path, in enumeration order
};

/// Simple paths of `length` edges from the root vertex that avoid the boundary
/// line except at the root; reports the average degree along each.
PathDegreeReport path_degree_scan(const HalfEdgeMap& map, int length, std::uint64_t cap = 1'000'000);

/// Cores of the radius-r ball around the root of a revealed map, with the
/// frontier and everything outside the ball merged into one sink vertex.
struct MapIslandReport {
  std::vector<VertexId> ball;
  IsolationReport report;  // vertex k of the report is ball[k]
};
MapIslandReport revealed_islands(const HalfEdgeMap& map, int r, double i, int size_cap = 12);

}  // namespace hyperwalk
