#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperwalk/ids.hpp"

namespace hyperwalk {

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Side { Left, Right };

/// An unfilled polygon created by a connect step: `start` is its first half-edge
/// (hole on the left) and following `next` visits the `perimeter` hole half-edges.
struct PolygonHandle {
  HalfEdgeId start;
  int perimeter = 0;
};

struct IntegrityReport {
  std::vector<std::string> issues;
  [[nodiscard]] bool ok() const { return issues.empty(); }
  [[nodiscard]] std::string to_string() const;
};

/// Rooted planar triangulated disc stored as half-edges.
///
/// Two shapes are supported. A half-plane window represents the revealed part
/// of a half-planar triangulation: a finite stretch v_{-k} .. v_{k'} of the
/// boundary line plus every revealed triangle. Its outer face cycle runs left
/// to right along the frontier (the boundary of the unrevealed region, with
/// the unrevealed region on the left of each frontier half-edge) and then back
/// along the underside of the boundary line ("exterior" half-edges). A polygon
/// map is a triangulation of an m-gon, possibly with holes still to be filled.
///
/// The face of a half-edge is the face on its left. Internal faces are always
/// triangles. Half-edges deleted by digon closing are tombstoned and ids are
/// never reused.
class HalfEdgeMap {
 public:
  static constexpr std::int64_t kNoLineIndex = std::numeric_limits<std::int64_t>::min();

  enum class Kind { HalfPlane, Polygon };

  struct HalfEdge {
    VertexId origin;
    HalfEdgeId twin;
    HalfEdgeId next;
    HalfEdgeId prev;
    FaceId face = kOuterFace;
    bool exterior = false;
    bool alive = true;
  };

  struct Vertex {
    HalfEdgeId anchor;
    int degree = 0;
    std::int64_t line_index = kNoLineIndex;
    bool frontier = false;
  };

  /// Boundary line segment of `width` edges with root (v_0 -> v_1).
  static HalfEdgeMap half_plane_segment(int width);
  /// Unfilled m-gon: the inside is a single hole whose first half-edge is the root.
  static HalfEdgeMap open_polygon(int perimeter);
  /// Triangulated polygon from counter-clockwise triangles over vertices
  /// 0..vertex_count-1 and the counter-clockwise boundary cycle; the root is
  /// boundary[0] -> boundary[1]. Multiple edges are not supported here.
  static HalfEdgeMap polygon_from_triangles(int vertex_count, const std::vector<std::array<int, 3>>& triangles,
                                            const std::vector<int>& boundary);

  [[nodiscard]] Kind kind() const { return kind_; }

  // -- element access -------------------------------------------------------
  [[nodiscard]] std::size_t vertex_slots() const { return vertices_.size(); }
  [[nodiscard]] std::size_t half_edge_slots() const { return half_edges_.size(); }
  [[nodiscard]] std::size_t vertex_count() const { return vertices_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return live_half_edges_ / 2; }
  [[nodiscard]] std::size_t face_count() const { return faces_.size(); }

  [[nodiscard]] const HalfEdge& half_edge(HalfEdgeId h) const { return half_edges_[h.index()]; }
  [[nodiscard]] const Vertex& vertex(VertexId v) const { return vertices_[v.index()]; }
  [[nodiscard]] HalfEdgeId face_half_edge(FaceId f) const { return faces_[f.index()]; }

  [[nodiscard]] VertexId origin(HalfEdgeId h) const { return half_edge(h).origin; }
  [[nodiscard]] VertexId head(HalfEdgeId h) const { return origin(twin(h)); }
  [[nodiscard]] HalfEdgeId twin(HalfEdgeId h) const { return half_edge(h).twin; }
  [[nodiscard]] HalfEdgeId next(HalfEdgeId h) const { return half_edge(h).next; }
  [[nodiscard]] HalfEdgeId prev(HalfEdgeId h) const { return half_edge(h).prev; }
  [[nodiscard]] FaceId face(HalfEdgeId h) const { return half_edge(h).face; }

  /// Outer half-edge facing the unrevealed region.
  [[nodiscard]] bool is_frontier(HalfEdgeId h) const {
    const auto& e = half_edge(h);
    return e.alive && e.face == kOuterFace && !e.exterior;
  }
  [[nodiscard]] bool on_frontier(VertexId v) const { return vertex(v).frontier; }
  [[nodiscard]] bool on_line(VertexId v) const { return vertex(v).line_index != kNoLineIndex; }
  [[nodiscard]] std::int64_t line_index(VertexId v) const { return vertex(v).line_index; }

  /// Number of incident edges, counted with multiplicity.
  [[nodiscard]] int degree(VertexId v) const { return vertex(v).degree; }

  [[nodiscard]] HalfEdgeId root() const { return root_; }
  [[nodiscard]] VertexId root_vertex() const { return origin(root_); }

  /// Calls f(h) for every live half-edge leaving v, in rotation order from the anchor.
  template <class F>
  void for_each_outgoing(VertexId v, F&& f) const {
    const HalfEdgeId start = vertex(v).anchor;
    HalfEdgeId h = start;
    do {
      f(h);
      h = next(twin(h));
    } while (h != start);
  }

  /// The k-th outgoing half-edge of v in rotation order (k < degree(v)).
  [[nodiscard]] HalfEdgeId outgoing(VertexId v, int k) const;

  // -- boundary line window (half-plane maps) --------------------------------
  [[nodiscard]] std::int64_t window_left() const { return window_left_; }
  [[nodiscard]] std::int64_t window_right() const { return window_left_ + static_cast<std::int64_t>(line_.size()) - 1; }
  [[nodiscard]] VertexId line_vertex(std::int64_t index) const;
  [[nodiscard]] bool in_window(std::int64_t index) const { return index >= window_left() && index <= window_right(); }
  void extend_left(int count);
  void extend_right(int count);

  /// The frontier half-edge leaving v, if v is on the frontier and not the right window end.
  [[nodiscard]] std::optional<HalfEdgeId> frontier_edge_from(VertexId v) const;
  /// The frontier half-edge arriving at v, if v is on the frontier and not the left window end.
  [[nodiscard]] std::optional<HalfEdgeId> frontier_edge_into(VertexId v) const;

  /// Ordered vertex sequence of the boundary path: the frontier (left to right)
  /// for half-plane windows, the outer cycle from the root for polygons.
  [[nodiscard]] std::vector<VertexId> boundary_path() const;

  // -- surgeries ------------------------------------------------------------
  /// Triangle on frontier edge e with a new vertex; returns the vertex.
  VertexId attach_alpha_triangle(HalfEdgeId e);
  /// Triangle on frontier edge e whose third vertex lies i frontier steps beyond
  /// e on the given side. Returns the enclosed, still empty (i+1)-gon.
  PolygonHandle attach_connect_triangle(HalfEdgeId e, Side side, int i);
  /// Sews a triangulated polygon into the hole. `fill` must be a polygon map
  /// whose perimeter equals the hole's; its root is matched to `hole.start`.
  void glue_fill(const PolygonHandle& hole, const HalfEdgeMap& fill);

  // Hole-level primitives used by the Boltzmann sampler. `h` is a hole half-edge.
  /// Adds a triangle (origin h, head h, new vertex); returns the new hole half-edge origin(h) -> v.
  HalfEdgeId hole_add_vertex(HalfEdgeId h);
  /// Adds the triangle on h whose apex is j hole steps after head(h). Returns the
  /// first half-edges of the two resulting holes (perimeters j+1 and p-j).
  std::pair<HalfEdgeId, HalfEdgeId> hole_connect(HalfEdgeId h, int j);
  /// Closes the 2-gon {h, next(h)} by identifying its two edges.
  void close_digon(HalfEdgeId h);

  [[nodiscard]] int cycle_length(HalfEdgeId h) const;

  [[nodiscard]] IntegrityReport check_integrity() const;

  /// Direct mutable access for tests that deliberately corrupt a map.
  HalfEdge& mutable_half_edge_for_testing(HalfEdgeId h) { return half_edges_[h.index()]; }

 private:
  friend HalfEdgeMap deserialize(const std::string& text);

  VertexId new_vertex();
  HalfEdgeId new_edge(VertexId a, VertexId b);  // returns a->b; twin is b->a
  FaceId new_face(HalfEdgeId h0, HalfEdgeId h1, HalfEdgeId h2);
  void link(HalfEdgeId a, HalfEdgeId b) {
    half_edges_[a.index()].next = b;
    half_edges_[b.index()].prev = a;
  }
  HalfEdge& he(HalfEdgeId h) { return half_edges_[h.index()]; }
  Vertex& vx(VertexId v) { return vertices_[v.index()]; }

  HalfEdgeId add_vertex_on(HalfEdgeId h, VertexId* created);
  std::pair<HalfEdgeId, HalfEdgeId> connect_forward(HalfEdgeId h, int j);
  std::pair<HalfEdgeId, HalfEdgeId> connect_backward(HalfEdgeId h, int j);

  Kind kind_ = Kind::HalfPlane;
  std::vector<HalfEdge> half_edges_;
  std::vector<Vertex> vertices_;
  std::vector<HalfEdgeId> faces_;
  std::deque<VertexId> line_;
  std::int64_t window_left_ = 0;
  std::size_t live_half_edges_ = 0;
  HalfEdgeId root_;
  // Exterior half-edges at the window ends: leaving the right end, entering the left end.
  HalfEdgeId bottom_right_;
  HalfEdgeId bottom_left_;
};

/// Graph distance from `source` to the nearest vertex satisfying `is_target`,
/// ignoring edge multiplicity. Returns nullopt if none lies within `cap`.
template <class Pred>
std::optional<int> bfs_distance(const HalfEdgeMap& map, VertexId source, Pred&& is_target, int cap);

/// Distances from a set of sources to every vertex (-1 if unreached or beyond cap).
std::vector<int> bfs_distances(const HalfEdgeMap& map, const std::vector<VertexId>& sources,
                               int cap = std::numeric_limits<int>::max());

/// Canonical JSON text of the map (ids renumbered by a traversal from the root).
std::string serialize(const HalfEdgeMap& map);
HalfEdgeMap deserialize(const std::string& text);

// ---------------------------------------------------------------------------

template <class Pred>
std::optional<int> bfs_distance(const HalfEdgeMap& map, VertexId source, Pred&& is_target, int cap) {
  std::vector<int> dist(map.vertex_slots(), -1);
  std::vector<VertexId> frontier{source};
  dist[source.index()] = 0;
  if (is_target(source)) return 0;
  for (int d = 1; d <= cap && !frontier.empty(); ++d) {
    std::vector<VertexId> next_layer;
    for (VertexId u : frontier) {
      bool hit = false;
      map.for_each_outgoing(u, [&](HalfEdgeId h) {
        const VertexId w = map.head(h);
        if (dist[w.index()] >= 0) return;
        dist[w.index()] = d;
        if (is_target(w)) hit = true;
        next_layer.push_back(w);
      });
      if (hit) return d;
    }
    frontier = std::move(next_layer);
  }
  return std::nullopt;
}

}  // namespace hyperwalk
