#include <deque>

#include <json.hpp>

#include "hyperwalk/map.hpp"

namespace hyperwalk {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::int64_t face_code(FaceId f) { return f.value; }

}  // namespace

std::string serialize(const HalfEdgeMap& map) {
  // Canonical numbering: breadth-first over half-edges from the root via (twin, next).
  std::vector<std::int32_t> he_id(map.half_edge_slots(), -1);
  std::vector<char> queued(map.half_edge_slots(), 0);
  std::vector<HalfEdgeId> order;
  std::deque<HalfEdgeId> queue{map.root()};
  queued[map.root().index()] = 1;
  while (!queue.empty()) {
    const HalfEdgeId h = queue.front();
    queue.pop_front();
    order.push_back(h);
    for (HalfEdgeId g : {map.twin(h), map.next(h)}) {
      if (queued[g.index()]) continue;
      queued[g.index()] = 1;
      queue.push_back(g);
    }
  }
  for (std::size_t k = 0; k < order.size(); ++k) he_id[order[k].index()] = static_cast<std::int32_t>(k);

  std::vector<std::int32_t> v_id(map.vertex_slots(), -1);
  std::vector<HalfEdgeId> v_anchor;
  std::vector<VertexId> v_order;
  std::vector<std::int32_t> f_id(map.face_count(), -1);
  std::int32_t faces = 0;
  for (HalfEdgeId h : order) {
    const VertexId v = map.origin(h);
    if (v_id[v.index()] < 0) {
      v_id[v.index()] = static_cast<std::int32_t>(v_order.size());
      v_order.push_back(v);
      v_anchor.push_back(h);
    }
    const FaceId f = map.face(h);
    if (f.valid() && f_id[f.index()] < 0) f_id[f.index()] = faces++;
  }

  json doc;
  doc["format"] = "hyperwalk-map";
  doc["version"] = kFormatVersion;
  doc["kind"] = map.kind() == HalfEdgeMap::Kind::HalfPlane ? "half_plane" : "polygon";
  doc["root"] = 0;
  if (map.kind() == HalfEdgeMap::Kind::HalfPlane) {
    doc["window"] = {{"left", map.window_left()}, {"right", map.window_right()}};
  }
  json vertices = json::array();
  for (std::size_t k = 0; k < v_order.size(); ++k) {
    const auto& v = map.vertex(v_order[k]);
    json entry;
    entry["anchor"] = he_id[v_anchor[k].index()];
    entry["line_index"] = v.line_index == HalfEdgeMap::kNoLineIndex ? json(nullptr) : json(v.line_index);
    entry["frontier"] = v.frontier;
    vertices.push_back(entry);
  }
  doc["vertices"] = std::move(vertices);
  json half_edges = json::array();
  for (HalfEdgeId h : order) {
    const auto& e = map.half_edge(h);
    const std::int64_t f = e.face.valid() ? f_id[e.face.index()] : face_code(e.face);
    half_edges.push_back({{"origin", v_id[e.origin.index()]},
                          {"twin", he_id[e.twin.index()]},
                          {"next", he_id[e.next.index()]},
                          {"face", f},
                          {"exterior", e.exterior}});
  }
  doc["half_edges"] = std::move(half_edges);
  json boundary = json::array();
  for (VertexId v : map.boundary_path()) boundary.push_back(v_id[v.index()]);
  doc["boundary"] = std::move(boundary);
  return doc.dump();
}

HalfEdgeMap deserialize(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw MapError(std::string("deserialize: malformed JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "hyperwalk-map") throw MapError("deserialize: unknown format tag");
    if (doc.at("version").get<int>() != kFormatVersion) throw MapError("deserialize: unsupported version");
    HalfEdgeMap map;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "half_plane") {
      map.kind_ = HalfEdgeMap::Kind::HalfPlane;
    } else if (kind == "polygon") {
      map.kind_ = HalfEdgeMap::Kind::Polygon;
    } else {
      throw MapError("deserialize: unknown kind '" + kind + "'");
    }
    const auto& hes = doc.at("half_edges");
    const auto& vs = doc.at("vertices");
    const auto n_he = static_cast<std::int64_t>(hes.size());
    const auto n_v = static_cast<std::int64_t>(vs.size());
    auto check = [](std::int64_t value, std::int64_t bound, const char* what) {
      if (value < 0 || value >= bound) throw MapError(std::string("deserialize: ") + what + " out of range");
      return static_cast<std::int32_t>(value);
    };
    std::int64_t max_face = -1;
    map.half_edges_.resize(static_cast<std::size_t>(n_he));
    for (std::int64_t k = 0; k < n_he; ++k) {
      const auto& src = hes[static_cast<std::size_t>(k)];
      auto& dst = map.half_edges_[static_cast<std::size_t>(k)];
      dst.origin = VertexId(check(src.at("origin").get<std::int64_t>(), n_v, "origin"));
      dst.twin = HalfEdgeId(check(src.at("twin").get<std::int64_t>(), n_he, "twin"));
      dst.next = HalfEdgeId(check(src.at("next").get<std::int64_t>(), n_he, "next"));
      const auto f = src.at("face").get<std::int64_t>();
      if (f < kHoleFace.value) throw MapError("deserialize: face out of range");
      dst.face = FaceId(static_cast<std::int32_t>(f));
      max_face = std::max(max_face, f);
      dst.exterior = src.at("exterior").get<bool>();
    }
    std::vector<int> incoming(static_cast<std::size_t>(n_he), 0);
    for (std::int64_t k = 0; k < n_he; ++k) {
      const auto nx = map.half_edges_[static_cast<std::size_t>(k)].next;
      if (++incoming[nx.index()] > 1) throw MapError("deserialize: next is not a permutation");
      map.half_edges_[nx.index()].prev = HalfEdgeId(static_cast<std::int32_t>(k));
    }
    map.faces_.assign(static_cast<std::size_t>(max_face + 1), HalfEdgeId{});
    for (std::int64_t k = 0; k < n_he; ++k) {
      const FaceId f = map.half_edges_[static_cast<std::size_t>(k)].face;
      if (f.valid() && !map.faces_[f.index()].valid()) map.faces_[f.index()] = HalfEdgeId(static_cast<std::int32_t>(k));
    }
    for (const auto& f : map.faces_) {
      if (!f.valid()) throw MapError("deserialize: face ids are not dense");
    }
    map.vertices_.resize(static_cast<std::size_t>(n_v));
    for (std::int64_t k = 0; k < n_v; ++k) {
      const auto& src = vs[static_cast<std::size_t>(k)];
      auto& dst = map.vertices_[static_cast<std::size_t>(k)];
      dst.anchor = HalfEdgeId(check(src.at("anchor").get<std::int64_t>(), n_he, "anchor"));
      const auto& li = src.at("line_index");
      dst.line_index = li.is_null() ? HalfEdgeMap::kNoLineIndex : li.get<std::int64_t>();
      dst.frontier = src.at("frontier").get<bool>();
    }
    for (const auto& e : map.half_edges_) map.vertices_[e.origin.index()].degree += 1;
    map.live_half_edges_ = map.half_edges_.size();
    map.root_ = HalfEdgeId(check(doc.at("root").get<std::int64_t>(), n_he, "root"));

    if (map.kind_ == HalfEdgeMap::Kind::HalfPlane) {
      const std::int64_t left = doc.at("window").at("left").get<std::int64_t>();
      const std::int64_t right = doc.at("window").at("right").get<std::int64_t>();
      if (right <= left) throw MapError("deserialize: empty window");
      std::vector<VertexId> line(static_cast<std::size_t>(right - left + 1));
      for (std::int64_t k = 0; k < n_v; ++k) {
        const auto li = map.vertices_[static_cast<std::size_t>(k)].line_index;
        if (li == HalfEdgeMap::kNoLineIndex) continue;
        if (li < left || li > right || line[static_cast<std::size_t>(li - left)].valid()) {
          throw MapError("deserialize: inconsistent line indices");
        }
        line[static_cast<std::size_t>(li - left)] = VertexId(static_cast<std::int32_t>(k));
      }
      for (const auto& v : line) {
        if (!v.valid()) throw MapError("deserialize: gap in the boundary line");
      }
      map.line_.assign(line.begin(), line.end());
      map.window_left_ = left;
      for (std::int64_t k = 0; k < n_he; ++k) {
        const auto& e = map.half_edges_[static_cast<std::size_t>(k)];
        if (!e.exterior) continue;
        const HalfEdgeId id(static_cast<std::int32_t>(k));
        if (e.origin == line.back()) map.bottom_right_ = id;
        if (map.half_edges_[e.twin.index()].origin == line.front()) map.bottom_left_ = id;
      }
      if (!map.bottom_left_.valid() || !map.bottom_right_.valid()) {
        throw MapError("deserialize: boundary line has no exterior side");
      }
    }
    return map;
  } catch (const json::exception& e) {
    throw MapError(std::string("deserialize: malformed map record: ") + e.what());
  }
}

}  // namespace hyperwalk
