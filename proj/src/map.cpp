#include "hyperwalk/map.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace hyperwalk {

std::string IntegrityReport::to_string() const {
  if (issues.empty()) return "ok\n";
  std::ostringstream out;
  for (const auto& issue : issues) out << "- " << issue << '\n';
  return out.str();
}

VertexId HalfEdgeMap::new_vertex() {
  vertices_.emplace_back();
  return VertexId(static_cast<std::int32_t>(vertices_.size() - 1));
}

HalfEdgeId HalfEdgeMap::new_edge(VertexId a, VertexId b) {
  const HalfEdgeId ab(static_cast<std::int32_t>(half_edges_.size()));
  const HalfEdgeId ba(ab.value + 1);
  HalfEdge forward;
  forward.origin = a;
  forward.twin = ba;
  HalfEdge backward;
  backward.origin = b;
  backward.twin = ab;
  half_edges_.push_back(forward);
  half_edges_.push_back(backward);
  live_half_edges_ += 2;
  vx(a).degree += 1;
  vx(b).degree += 1;
  if (!vx(a).anchor.valid()) vx(a).anchor = ab;
  if (!vx(b).anchor.valid()) vx(b).anchor = ba;
  return ab;
}

FaceId HalfEdgeMap::new_face(HalfEdgeId h0, HalfEdgeId h1, HalfEdgeId h2) {
  const FaceId f(static_cast<std::int32_t>(faces_.size()));
  faces_.push_back(h0);
  for (HalfEdgeId h : {h0, h1, h2}) he(h).face = f;
  link(h0, h1);
  link(h1, h2);
  link(h2, h0);
  return f;
}

HalfEdgeMap HalfEdgeMap::half_plane_segment(int width) {
  if (width < 1) throw MapError("half_plane_segment: width must be at least 1");
  HalfEdgeMap map;
  map.kind_ = Kind::HalfPlane;
  const std::int64_t left = -static_cast<std::int64_t>((width - 1) / 2);
  map.window_left_ = left;
  for (int k = 0; k <= width; ++k) {
    const VertexId v = map.new_vertex();
    map.vx(v).line_index = left + k;
    map.vx(v).frontier = true;
    map.line_.push_back(v);
  }
  std::vector<HalfEdgeId> up;
  for (int k = 0; k < width; ++k) {
    const HalfEdgeId h = map.new_edge(map.line_[k], map.line_[k + 1]);
    map.he(map.twin(h)).exterior = true;
    up.push_back(h);
  }
  for (int k = 0; k + 1 < width; ++k) {
    map.link(up[k], up[k + 1]);
    map.link(map.twin(up[k + 1]), map.twin(up[k]));
  }
  map.link(up.back(), map.twin(up.back()));
  map.link(map.twin(up.front()), up.front());
  map.bottom_right_ = map.twin(up.back());
  map.bottom_left_ = map.twin(up.front());
  map.root_ = up[static_cast<std::size_t>(-left)];
  return map;
}

HalfEdgeMap HalfEdgeMap::open_polygon(int perimeter) {
  if (perimeter < 2) throw MapError("open_polygon: perimeter must be at least 2");
  HalfEdgeMap map;
  map.kind_ = Kind::Polygon;
  std::vector<VertexId> vs;
  for (int k = 0; k < perimeter; ++k) vs.push_back(map.new_vertex());
  std::vector<HalfEdgeId> inner;
  for (int k = 0; k < perimeter; ++k) {
    const HalfEdgeId h = map.new_edge(vs[k], vs[(k + 1) % perimeter]);
    map.he(h).face = kHoleFace;
    inner.push_back(h);
  }
  for (int k = 0; k < perimeter; ++k) {
    const int nk = (k + 1) % perimeter;
    map.link(inner[k], inner[nk]);
    map.link(map.twin(inner[nk]), map.twin(inner[k]));
  }
  for (int k = 0; k < perimeter; ++k) map.vx(vs[k]).anchor = inner[k];
  map.root_ = inner[0];
  return map;
}

HalfEdgeMap HalfEdgeMap::polygon_from_triangles(int vertex_count, const std::vector<std::array<int, 3>>& triangles,
                                                const std::vector<int>& boundary) {
  if (boundary.size() < 3) throw MapError("polygon_from_triangles: boundary needs at least 3 vertices");
  HalfEdgeMap map;
  map.kind_ = Kind::Polygon;
  for (int v = 0; v < vertex_count; ++v) map.new_vertex();
  auto check_vertex = [&](int v) {
    if (v < 0 || v >= vertex_count) throw MapError("polygon_from_triangles: vertex out of range");
  };
  std::map<std::pair<int, int>, HalfEdgeId> directed;
  auto half = [&](int a, int b) {
    const auto key = std::make_pair(a, b);
    if (auto it = directed.find(key); it != directed.end()) return it->second;
    const auto twin_key = std::make_pair(b, a);
    if (auto it = directed.find(twin_key); it != directed.end()) {
      const HalfEdgeId h = map.twin(it->second);
      directed.emplace(key, h);
      return h;
    }
    const HalfEdgeId h = map.new_edge(VertexId(a), VertexId(b));
    directed.emplace(key, h);
    directed.emplace(twin_key, map.twin(h));
    return h;
  };
  std::set<std::pair<int, int>> used;
  for (const auto& t : triangles) {
    std::array<HalfEdgeId, 3> sides;
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<std::size_t>(k)];
      const int b = t[static_cast<std::size_t>((k + 1) % 3)];
      check_vertex(a);
      check_vertex(b);
      if (a == b) throw MapError("polygon_from_triangles: degenerate triangle");
      if (!used.emplace(a, b).second) throw MapError("polygon_from_triangles: directed edge used twice");
      sides[static_cast<std::size_t>(k)] = half(a, b);
    }
    map.new_face(sides[0], sides[1], sides[2]);
  }
  const std::size_t m = boundary.size();
  std::vector<HalfEdgeId> outer(m);
  for (std::size_t k = 0; k < m; ++k) {
    const int a = boundary[k];
    const int b = boundary[(k + 1) % m];
    if (!used.count({a, b})) throw MapError("polygon_from_triangles: boundary edge not covered by a triangle");
    if (used.count({b, a})) throw MapError("polygon_from_triangles: boundary edge has triangles on both sides");
    outer[k] = map.twin(directed.at({a, b}));
    used.emplace(b, a);
  }
  for (std::size_t k = 0; k < m; ++k) map.link(outer[(k + 1) % m], outer[k]);
  if (used.size() != directed.size()) throw MapError("polygon_from_triangles: interior edge with a triangle on one side only");
  map.root_ = directed.at({boundary[0], boundary[1]});
  return map;
}

HalfEdgeId HalfEdgeMap::outgoing(VertexId v, int k) const {
  HalfEdgeId h = vertex(v).anchor;
  for (int s = 0; s < k; ++s) h = next(twin(h));
  return h;
}

VertexId HalfEdgeMap::line_vertex(std::int64_t index) const {
  if (!in_window(index)) throw MapError("line_vertex: index outside the revealed window");
  return line_[static_cast<std::size_t>(index - window_left_)];
}

void HalfEdgeMap::extend_right(int count) {
  if (kind_ != Kind::HalfPlane) throw MapError("extend_right: not a half-plane map");
  for (int c = 0; c < count; ++c) {
    const VertexId end = line_.back();
    const VertexId v = new_vertex();
    vx(v).line_index = vx(end).line_index + 1;
    vx(v).frontier = true;
    const HalfEdgeId up = new_edge(end, v);
    const HalfEdgeId down = twin(up);
    he(down).exterior = true;
    const HalfEdgeId last_frontier = prev(bottom_right_);
    link(last_frontier, up);
    link(up, down);
    link(down, bottom_right_);
    bottom_right_ = down;
    line_.push_back(v);
  }
}

void HalfEdgeMap::extend_left(int count) {
  if (kind_ != Kind::HalfPlane) throw MapError("extend_left: not a half-plane map");
  for (int c = 0; c < count; ++c) {
    const VertexId end = line_.front();
    const VertexId v = new_vertex();
    vx(v).line_index = vx(end).line_index - 1;
    vx(v).frontier = true;
    const HalfEdgeId up = new_edge(v, end);
    const HalfEdgeId down = twin(up);
    he(down).exterior = true;
    const HalfEdgeId first_frontier = next(bottom_left_);
    link(bottom_left_, down);
    link(down, up);
    link(up, first_frontier);
    bottom_left_ = down;
    line_.push_front(v);
    --window_left_;
  }
}

std::optional<HalfEdgeId> HalfEdgeMap::frontier_edge_from(VertexId v) const {
  if (!on_frontier(v)) return std::nullopt;
  std::optional<HalfEdgeId> found;
  for_each_outgoing(v, [&](HalfEdgeId h) {
    if (!found && is_frontier(h)) found = h;
  });
  return found;
}

std::optional<HalfEdgeId> HalfEdgeMap::frontier_edge_into(VertexId v) const {
  if (!on_frontier(v)) return std::nullopt;
  std::optional<HalfEdgeId> found;
  for_each_outgoing(v, [&](HalfEdgeId h) {
    if (!found && is_frontier(twin(h))) found = twin(h);
  });
  return found;
}

std::vector<VertexId> HalfEdgeMap::boundary_path() const {
  std::vector<VertexId> path;
  if (kind_ == Kind::HalfPlane) {
    HalfEdgeId h = next(bottom_left_);
    path.push_back(origin(h));
    const std::size_t limit = half_edges_.size();
    while (is_frontier(h) && path.size() <= limit) {
      path.push_back(head(h));
      h = next(h);
    }
    return path;
  }
  // Polygon: outer half-edges run clockwise; report counter-clockwise order from the root.
  const HalfEdgeId o0 = twin(root_);
  std::vector<HalfEdgeId> outer{o0};
  for (HalfEdgeId h = next(o0); h != o0 && outer.size() <= half_edges_.size(); h = next(h)) outer.push_back(h);
  path.push_back(head(outer[0]));
  for (std::size_t k = outer.size() - 1; k >= 1; --k) path.push_back(head(outer[k]));
  return path;
}

int HalfEdgeMap::cycle_length(HalfEdgeId h) const {
  int n = 1;
  for (HalfEdgeId g = next(h); g != h; g = next(g)) {
    ++n;
    if (static_cast<std::size_t>(n) > half_edges_.size()) throw MapError("cycle_length: next is not a permutation");
  }
  return n;
}

HalfEdgeId HalfEdgeMap::add_vertex_on(HalfEdgeId h, VertexId* created) {
  const VertexId a = origin(h);
  const VertexId b = head(h);
  const FaceId marker = face(h);
  const HalfEdgeId before = prev(h);
  const HalfEdgeId after = next(h);

  const VertexId v = new_vertex();
  const HalfEdgeId t1 = new_edge(b, v);
  const HalfEdgeId s1 = twin(t1);
  const HalfEdgeId t2 = new_edge(v, a);
  const HalfEdgeId s2 = twin(t2);
  new_face(h, t1, t2);
  he(s1).face = marker;
  he(s2).face = marker;
  link(before, s2);
  link(s2, s1);
  link(s1, after);
  if (created != nullptr) *created = v;
  return s2;
}

std::pair<HalfEdgeId, HalfEdgeId> HalfEdgeMap::connect_forward(HalfEdgeId h, int j) {
  const VertexId a = origin(h);
  const VertexId b = head(h);
  const FaceId marker = face(h);
  std::vector<HalfEdgeId> path;
  HalfEdgeId x = next(h);
  for (int k = 0; k < j; ++k) {
    const auto& e = half_edge(x);
    if (x == h || e.exterior || e.face != marker) throw MapError("connect: boundary too short on the right");
    path.push_back(x);
    x = next(x);
  }
  const VertexId z = head(path.back());
  if (z == a) throw MapError("connect: apex equals the edge origin (self-loop)");
  const HalfEdgeId before = prev(h);
  const HalfEdgeId after = x;

  const HalfEdgeId t1 = new_edge(b, z);
  const HalfEdgeId s1 = twin(t1);
  const HalfEdgeId t2 = new_edge(z, a);
  const HalfEdgeId s2 = twin(t2);
  new_face(h, t1, t2);

  for (HalfEdgeId p : path) he(p).face = kHoleFace;
  he(s1).face = kHoleFace;
  link(path.back(), s1);
  link(s1, path.front());

  he(s2).face = marker;
  link(before, s2);
  link(s2, after);

  if (marker == kOuterFace) {
    for (HalfEdgeId p : path) vx(origin(p)).frontier = false;
  }
  return {s1, s2};
}

std::pair<HalfEdgeId, HalfEdgeId> HalfEdgeMap::connect_backward(HalfEdgeId h, int j) {
  const VertexId a = origin(h);
  const VertexId b = head(h);
  const FaceId marker = face(h);
  std::vector<HalfEdgeId> path;  // path[0] ends at a, path[j-1] starts at z
  HalfEdgeId y = prev(h);
  for (int k = 0; k < j; ++k) {
    const auto& e = half_edge(y);
    if (y == h || e.exterior || e.face != marker) throw MapError("connect: boundary too short on the left");
    path.push_back(y);
    y = prev(y);
  }
  const VertexId z = origin(path.back());
  if (z == b) throw MapError("connect: apex equals the edge head (self-loop)");
  const HalfEdgeId before = y;
  const HalfEdgeId after = next(h);

  const HalfEdgeId t1 = new_edge(b, z);
  const HalfEdgeId s1 = twin(t1);
  const HalfEdgeId t2 = new_edge(z, a);
  const HalfEdgeId s2 = twin(t2);
  new_face(h, t1, t2);

  for (HalfEdgeId p : path) he(p).face = kHoleFace;
  he(s2).face = kHoleFace;
  link(path.front(), s2);
  link(s2, path.back());

  he(s1).face = marker;
  link(before, s1);
  link(s1, after);

  if (marker == kOuterFace) {
    for (HalfEdgeId p : path) vx(head(p)).frontier = false;
  }
  return {s2, s1};
}

VertexId HalfEdgeMap::attach_alpha_triangle(HalfEdgeId e) {
  if (!e.valid() || e.index() >= half_edges_.size() || !is_frontier(e)) {
    throw MapError("attach_alpha_triangle: edge is not on the frontier");
  }
  VertexId v;
  add_vertex_on(e, &v);
  vx(v).frontier = true;
  return v;
}

PolygonHandle HalfEdgeMap::attach_connect_triangle(HalfEdgeId e, Side side, int i) {
  if (i < 1) throw MapError("attach_connect_triangle: i must be at least 1");
  if (!e.valid() || e.index() >= half_edges_.size() || !is_frontier(e)) {
    throw MapError("attach_connect_triangle: edge is not on the frontier");
  }
  const auto [hole, rest] = side == Side::Right ? connect_forward(e, i) : connect_backward(e, i);
  (void)rest;
  return PolygonHandle{hole, i + 1};
}

HalfEdgeId HalfEdgeMap::hole_add_vertex(HalfEdgeId h) {
  if (face(h) != kHoleFace) throw MapError("hole_add_vertex: not a hole half-edge");
  return add_vertex_on(h, nullptr);
}

std::pair<HalfEdgeId, HalfEdgeId> HalfEdgeMap::hole_connect(HalfEdgeId h, int j) {
  if (face(h) != kHoleFace) throw MapError("hole_connect: not a hole half-edge");
  if (j < 1) throw MapError("hole_connect: j must be at least 1");
  return connect_forward(h, j);
}

void HalfEdgeMap::close_digon(HalfEdgeId h) {
  const HalfEdgeId g = next(h);
  if (g == h || next(g) != h) throw MapError("close_digon: not a 2-gon");
  const VertexId a = origin(h);
  const VertexId b = origin(g);
  const HalfEdgeId th = twin(h);  // b -> a
  const HalfEdgeId tg = twin(g);  // a -> b
  if (th == g) throw MapError("close_digon: 2-gon made of a single edge");
  he(th).twin = tg;
  he(tg).twin = th;
  he(h).alive = false;
  he(g).alive = false;
  live_half_edges_ -= 2;
  vx(a).degree -= 1;
  vx(b).degree -= 1;
  if (vx(a).anchor == h || vx(a).anchor == g) vx(a).anchor = tg;
  if (vx(b).anchor == h || vx(b).anchor == g) vx(b).anchor = th;
  if (root_ == h) root_ = tg;
  if (root_ == g) root_ = th;
}

void HalfEdgeMap::glue_fill(const PolygonHandle& hole, const HalfEdgeMap& fill) {
  if (fill.kind() != Kind::Polygon) throw MapError("glue_fill: fill is not a polygon map");
  if (!hole.start.valid() || face(hole.start) != kHoleFace) throw MapError("glue_fill: handle is not a hole");
  const int perimeter = cycle_length(hole.start);
  if (perimeter != hole.perimeter) throw MapError("glue_fill: handle perimeter is stale");
  for (std::size_t k = 0; k < fill.half_edges_.size(); ++k) {
    const auto& e = fill.half_edges_[k];
    if (!e.alive) continue;
    if (e.face == kHoleFace) throw MapError("glue_fill: fill has unfilled holes");
    if (e.origin == fill.origin(e.twin)) throw MapError("glue_fill: fill has a self-loop");
  }
  const int fill_perimeter = fill.cycle_length(fill.twin(fill.root_));
  if (fill_perimeter != perimeter) throw MapError("glue_fill: perimeter mismatch");

  if (fill.face_count() == 0) {
    if (perimeter != 2 || fill.edge_count() != 1) throw MapError("glue_fill: face-less fill must be a closed 2-gon");
    close_digon(hole.start);
    return;
  }

  // Fill boundary half-edges (inside) in counter-clockwise order from the root.
  std::vector<HalfEdgeId> outer{fill.twin(fill.root_)};
  for (HalfEdgeId h = fill.next(outer[0]); h != outer[0]; h = fill.next(h)) outer.push_back(h);
  std::vector<HalfEdgeId> fill_inner{fill.root_};
  for (std::size_t k = outer.size() - 1; k >= 1; --k) fill_inner.push_back(fill.twin(outer[k]));
  std::vector<HalfEdgeId> hole_edges{hole.start};
  for (int k = 1; k < perimeter; ++k) hole_edges.push_back(next(hole_edges.back()));

  std::vector<VertexId> vmap(fill.vertices_.size());
  std::vector<HalfEdgeId> hmap(fill.half_edges_.size());
  std::vector<char> is_boundary(fill.half_edges_.size(), 0);
  for (int k = 0; k < perimeter; ++k) {
    hmap[fill_inner[k].index()] = hole_edges[k];
    is_boundary[fill_inner[k].index()] = 1;
    vmap[fill.origin(fill_inner[k]).index()] = origin(hole_edges[k]);
  }
  for (std::size_t v = 0; v < fill.vertices_.size(); ++v) {
    if (!vmap[v].valid()) vmap[v] = new_vertex();
  }
  std::vector<char> is_outer(fill.half_edges_.size(), 0);
  for (HalfEdgeId o : outer) is_outer[o.index()] = 1;
  for (std::size_t k = 0; k < fill.half_edges_.size(); ++k) {
    if (!fill.half_edges_[k].alive || is_outer[k] || is_boundary[k]) continue;
    half_edges_.emplace_back();
    hmap[k] = HalfEdgeId(static_cast<std::int32_t>(half_edges_.size() - 1));
    ++live_half_edges_;
  }
  std::vector<FaceId> fmap(fill.faces_.size());
  for (std::size_t f = 0; f < fill.faces_.size(); ++f) {
    fmap[f] = FaceId(static_cast<std::int32_t>(faces_.size()));
    faces_.push_back(hmap[fill.faces_[f].index()]);
  }
  for (std::size_t k = 0; k < fill.half_edges_.size(); ++k) {
    const auto& src = fill.half_edges_[k];
    if (!src.alive || is_outer[k]) continue;
    HalfEdge& dst = he(hmap[k]);
    dst.origin = vmap[src.origin.index()];
    dst.face = fmap[src.face.index()];
    dst.next = hmap[src.next.index()];
    dst.prev = hmap[src.prev.index()];
    dst.exterior = false;
    dst.alive = true;
    if (!is_boundary[k]) {
      dst.twin = hmap[src.twin.index()];
      vx(dst.origin).degree += 1;
    }
  }
  for (std::size_t v = 0; v < fill.vertices_.size(); ++v) {
    Vertex& dst = vx(vmap[v]);
    if (!dst.anchor.valid()) dst.anchor = hmap[fill.vertices_[v].anchor.index()];
  }
}

IntegrityReport HalfEdgeMap::check_integrity() const {
  IntegrityReport report;
  auto issue = [&](std::string text) { report.issues.push_back(std::move(text)); };
  const std::size_t n = half_edges_.size();
  auto valid_he = [&](HalfEdgeId h) { return h.valid() && h.index() < n && half_edges_[h.index()].alive; };

  std::vector<int> degree(vertices_.size(), 0);
  std::size_t live = 0;
  bool pointers_ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = half_edges_[k];
    if (!e.alive) continue;
    ++live;
    const std::string name = "half-edge " + std::to_string(k);
    if (!e.origin.valid() || e.origin.index() >= vertices_.size()) {
      issue(name + ": origin out of range");
      pointers_ok = false;
      continue;
    }
    degree[e.origin.index()] += 1;
    if (!valid_he(e.twin)) {
      issue(name + ": twin is not a live half-edge");
      pointers_ok = false;
    } else if (e.twin.index() == k) {
      issue(name + ": twin is a fixed point");
      pointers_ok = false;
    } else if (half_edges_[e.twin.index()].twin.index() != k) {
      issue(name + ": twin is not an involution");
      pointers_ok = false;
    } else if (half_edges_[e.twin.index()].origin == e.origin) {
      issue(name + ": self-loop");
    }
    if (!valid_he(e.next) || !valid_he(e.prev)) {
      issue(name + ": next/prev is not a live half-edge");
      pointers_ok = false;
    } else {
      if (half_edges_[e.next.index()].prev.index() != k) issue(name + ": prev(next(h)) != h");
      if (valid_he(e.twin) && half_edges_[e.next.index()].origin != half_edges_[e.twin.index()].origin) {
        issue(name + ": next does not start at the head");
        pointers_ok = false;
      }
    }
  }
  if (live != live_half_edges_) issue("live half-edge count mismatch");
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    const auto& vert = vertices_[v];
    if (!valid_he(vert.anchor) || half_edges_[vert.anchor.index()].origin.index() != v) {
      issue("vertex " + std::to_string(v) + ": anchor does not leave the vertex");
      pointers_ok = false;
    }
    if (degree[v] != vert.degree) issue("vertex " + std::to_string(v) + ": stored degree is stale");
  }
  if (!pointers_ok) return report;

  // Face orbits.
  std::vector<char> seen(n, 0);
  std::size_t hole_cycles = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!half_edges_[k].alive || seen[k]) continue;
    const FaceId f = half_edges_[k].face;
    std::size_t len = 0;
    HalfEdgeId h(static_cast<std::int32_t>(k));
    bool mixed = false;
    do {
      seen[h.index()] = 1;
      if (half_edges_[h.index()].face != f) mixed = true;
      h = half_edges_[h.index()].next;
      ++len;
    } while (h.index() != k && len <= n);
    const std::string name = "half-edge " + std::to_string(k);
    if (mixed) issue(name + ": face orbit mixes faces");
    if (f.valid()) {
      if (len != 3) issue(name + ": internal face orbit has length " + std::to_string(len));
      if (f.index() >= faces_.size()) issue(name + ": face id out of range");
    } else if (f == kHoleFace) {
      ++hole_cycles;
    }
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!valid_he(faces_[f]) || half_edges_[faces_[f].index()].face.index() != f) {
      issue("face " + std::to_string(f) + ": representative half-edge does not bound it");
    }
  }

  // Vertex rotations must be single cycles covering every outgoing half-edge.
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    int count = 0;
    HalfEdgeId start = vertices_[v].anchor;
    HalfEdgeId h = start;
    do {
      ++count;
      h = next(twin(h));
    } while (h != start && count <= vertices_[v].degree + 1);
    if (count != vertices_[v].degree) {
      issue("vertex " + std::to_string(v) + ": rotation visits " + std::to_string(count) + " of " +
            std::to_string(vertices_[v].degree) + " half-edges");
    }
  }

  const long euler = static_cast<long>(vertices_.size()) - static_cast<long>(live / 2) +
                     static_cast<long>(faces_.size()) + static_cast<long>(hole_cycles);
  if (euler != 1) issue("Euler characteristic V - E + F = " + std::to_string(euler) + ", expected 1");

  const auto path = boundary_path();
  std::unordered_set<VertexId> distinct(path.begin(), path.end());
  if (distinct.size() != path.size()) issue("boundary path is not simple");

  if (kind_ == Kind::HalfPlane) {
    std::vector<char> touches(vertices_.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
      const HalfEdgeId h(static_cast<std::int32_t>(k));
      if (!is_frontier(h)) continue;
      touches[origin(h).index()] = 1;
      touches[head(h).index()] = 1;
    }
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (static_cast<bool>(touches[v]) != vertices_[v].frontier) {
        issue("vertex " + std::to_string(v) + ": frontier flag disagrees with the outer face");
      }
    }
    for (std::size_t k = 0; k < line_.size(); ++k) {
      if (vertices_[line_[k].index()].line_index != window_left_ + static_cast<std::int64_t>(k)) {
        issue("line vertex " + std::to_string(k) + ": index mismatch");
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = half_edges_[k];
      if (!e.alive || !e.exterior) continue;
      const auto a = vertices_[e.origin.index()].line_index;
      const auto b = vertices_[half_edges_[e.twin.index()].origin.index()].line_index;
      if (a == kNoLineIndex || b != a - 1) issue("half-edge " + std::to_string(k) + ": exterior edge off the line");
    }
  }
  return report;
}

std::vector<int> bfs_distances(const HalfEdgeMap& map, const std::vector<VertexId>& sources, int cap) {
  std::vector<int> dist(map.vertex_slots(), -1);
  std::vector<VertexId> layer;
  for (VertexId s : sources) {
    if (dist[s.index()] < 0) {
      dist[s.index()] = 0;
      layer.push_back(s);
    }
  }
  for (int d = 1; d <= cap && !layer.empty(); ++d) {
    std::vector<VertexId> next_layer;
    for (VertexId u : layer) {
      map.for_each_outgoing(u, [&](HalfEdgeId h) {
        const VertexId w = map.head(h);
        if (dist[w.index()] >= 0) return;
        dist[w.index()] = d;
        next_layer.push_back(w);
      });
    }
    layer = std::move(next_layer);
  }
  return dist;
}

}  // namespace hyperwalk
