#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperwalk/map.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite graph with symmetric positive edge weights and optional loops.
/// Vertex weight w(u) = sum_v w(u, v), loops included.
///
/// Vertices flagged as sinks stand in for "infinity" of an infinite graph:
/// finite sets in the isoperimetric sense (Cheeger sets, cores) avoid them.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n = 0) : adj_(static_cast<std::size_t>(n)), loop_(static_cast<std::size_t>(n), 0.0),
                                      sink_(static_cast<std::size_t>(n), 0) {}

  [[nodiscard]] int size() const { return static_cast<int>(adj_.size()); }
  int add_vertex();

  /// Adds w to the weight of {u, v}; u == v adds to the loop weight.
  void add_edge(int u, int v, double w = 1.0);

  [[nodiscard]] const std::vector<std::pair<int, double>>& neighbors(int u) const { return adj_[idx(u)]; }
  [[nodiscard]] double loop_weight(int u) const { return loop_[idx(u)]; }
  [[nodiscard]] double edge_weight(int u, int v) const;
  [[nodiscard]] double vertex_weight(int u) const;
  /// Number of distinct non-loop edges.
  [[nodiscard]] int edge_count() const;
  [[nodiscard]] double total_weight() const;

  void set_sink(int u, bool sink = true) { sink_[idx(u)] = sink ? 1 : 0; }
  [[nodiscard]] bool is_sink(int u) const { return sink_[idx(u)] != 0; }
  [[nodiscard]] bool has_sinks() const;

  std::optional<int> root;

  /// Unweighted BFS distances from x (-1 if unreachable).
  [[nodiscard]] std::vector<int> distances(int x) const;
  [[nodiscard]] bool connected() const;

 private:
  [[nodiscard]] std::size_t idx(int u) const {
    if (u < 0 || u >= size()) throw GraphError("vertex " + std::to_string(u) + " out of range");
    return static_cast<std::size_t>(u);
  }

  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<double> loop_;
  std::vector<char> sink_;
};

/// Graph of a revealed map: edge weight = multiplicity. `vertex_of` (if given)
/// receives the map vertex of each graph vertex; the root becomes the map's root vertex.
WeightedGraph graph_from_map(const HalfEdgeMap& map, std::vector<VertexId>* vertex_of = nullptr);

/// Connected random graph: a random recursive tree plus up to `vertices`
/// extra edges, integer weights in [1, max_weight], root 0. With `sink` set,
/// the last vertex is a sink.
WeightedGraph random_graph(Rng& rng, int vertices, int max_weight = 1, bool sink = false);

/// Text format: one "u v weight" triple per line (weight optional, default 1),
/// "vertices n", "sink u" and "root u" directives, '#' comments. Vertex count is
/// the larger of the "vertices" directive and 1 + the largest id.
WeightedGraph read_edge_list(std::istream& in);
void write_edge_list(const WeightedGraph& g, std::ostream& out);

}  // namespace hyperwalk
