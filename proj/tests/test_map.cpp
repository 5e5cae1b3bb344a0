#include <doctest.h>

#include <set>

#include "hyperwalk/boltzmann.hpp"
#include "hyperwalk/map.hpp"
#include "hyperwalk/peeling.hpp"

using namespace hyperwalk;

namespace {

long euler(const HalfEdgeMap& m) {
  return static_cast<long>(m.vertex_count()) - static_cast<long>(m.edge_count()) + static_cast<long>(m.face_count());
}

HalfEdgeMap closed_digon() {
  Rng rng(1);
  FreeSampler sampler(0.0);
  return sampler.sample(2, rng);
}

HalfEdgeMap single_triangle() {
  Rng rng(1);
  FreeSampler sampler(0.0);
  return sampler.sample(3, rng);
}

}  // namespace

TEST_CASE("segment of width 1 is a single edge") {
  const auto m = HalfEdgeMap::half_plane_segment(1);
  CHECK(m.vertex_count() == 2);
  CHECK(m.edge_count() == 1);
  CHECK(m.face_count() == 0);
  CHECK(m.check_integrity().ok());
}

TEST_CASE("segment of width 3 satisfies the path Euler count") {
  const auto m = HalfEdgeMap::half_plane_segment(3);
  CHECK(m.vertex_count() == 4);
  CHECK(m.edge_count() == 3);
  CHECK(euler(m) == 1);
}

TEST_CASE("segment labels run from v_-2 to v_3 around the root") {
  const auto m = HalfEdgeMap::half_plane_segment(5);
  CHECK(m.window_left() == -2);
  CHECK(m.window_right() == 3);
  CHECK(m.origin(m.root()) == m.line_vertex(0));
  CHECK(m.head(m.root()) == m.line_vertex(1));
  for (std::int64_t k = -2; k <= 3; ++k) CHECK(m.line_index(m.line_vertex(k)) == k);
  CHECK(m.is_frontier(m.root()));
}

TEST_CASE("zero width is rejected") { CHECK_THROWS_AS(HalfEdgeMap::half_plane_segment(0), MapError); }

TEST_CASE("alpha triangle on the root") {
  auto m = HalfEdgeMap::half_plane_segment(3);
  const auto before = m.boundary_path().size();
  const VertexId v = m.attach_alpha_triangle(m.root());
  CHECK(m.vertex_count() == 5);
  CHECK(m.edge_count() == 5);
  CHECK(m.face_count() == 1);
  CHECK(euler(m) == 1);
  CHECK(m.boundary_path().size() == before + 1);
  CHECK_FALSE(m.on_line(v));
  CHECK(m.on_frontier(v));
  CHECK(m.check_integrity().ok());
}

TEST_CASE("alpha triangle on a non-boundary edge is an error") {
  auto m = HalfEdgeMap::half_plane_segment(3);
  CHECK_THROWS_AS(m.attach_alpha_triangle(m.twin(m.root())), MapError);
  m.attach_alpha_triangle(m.root());
  CHECK_THROWS_AS(m.attach_alpha_triangle(m.root()), MapError);
}

TEST_CASE("connect steps enclose polygons of perimeter i + 1") {
  SUBCASE("(R,1)") {
    auto m = HalfEdgeMap::half_plane_segment(5);
    const auto before = m.boundary_path().size();
    const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 1);
    CHECK(hole.perimeter == 2);
    CHECK(m.cycle_length(hole.start) == 2);
    CHECK(m.boundary_path().size() == before - 1);
    CHECK_FALSE(m.on_frontier(m.line_vertex(1)));
  }
  SUBCASE("(R,2)") {
    auto m = HalfEdgeMap::half_plane_segment(5);
    const auto before = m.boundary_path().size();
    const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 2);
    CHECK(hole.perimeter == 3);
    CHECK(m.boundary_path().size() == before - 2);
    CHECK_FALSE(m.on_frontier(m.line_vertex(1)));
    CHECK_FALSE(m.on_frontier(m.line_vertex(2)));
  }
  SUBCASE("(L,2)") {
    auto m = HalfEdgeMap::half_plane_segment(5);
    const auto hole = m.attach_connect_triangle(m.root(), Side::Left, 2);
    CHECK(hole.perimeter == 3);
    CHECK_FALSE(m.on_frontier(m.line_vertex(0)));
    CHECK_FALSE(m.on_frontier(m.line_vertex(-1)));
    CHECK(m.on_frontier(m.line_vertex(-2)));
  }
}

TEST_CASE("connect with i = 0 or beyond the window is an error") {
  auto m = HalfEdgeMap::half_plane_segment(5);
  CHECK_THROWS_AS(m.attach_connect_triangle(m.root(), Side::Right, 0), MapError);
  CHECK_THROWS_AS(m.attach_connect_triangle(m.root(), Side::Right, 3), MapError);
  CHECK_THROWS_AS(m.attach_connect_triangle(m.root(), Side::Left, 4), MapError);
}

TEST_CASE("closed 2-gon fill identifies the hole edges into a double edge") {
  auto m = HalfEdgeMap::half_plane_segment(5);
  const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 1);
  m.glue_fill(hole, closed_digon());
  CHECK(m.check_integrity().ok());
  CHECK(m.face_count() == 1);
  CHECK(m.edge_count() == 6);  // 5 line edges + the chord v0-v2; v1-v2 is shared
  CHECK(euler(m) == 1);
  // v1 now sees v2 twice: the line edge and the triangle side are the same edge
  const VertexId v1 = m.line_vertex(1);
  CHECK(m.degree(v1) == 2);
  CHECK_FALSE(m.on_frontier(v1));
}

TEST_CASE("a non-empty 2-gon fill leaves a genuine double edge") {
  Rng rng(5);
  FreeSampler sampler(0.07);
  HalfEdgeMap fill = sampler.sample(2, rng);
  while (fill.face_count() == 0) fill = sampler.sample(2, rng);
  auto m = HalfEdgeMap::half_plane_segment(5);
  const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 1);
  m.glue_fill(hole, fill);
  CHECK(m.check_integrity().ok());
  CHECK(euler(m) == 1);
  const VertexId v1 = m.line_vertex(1);
  const VertexId v2 = m.line_vertex(2);
  int multiplicity = 0;
  m.for_each_outgoing(v1, [&](HalfEdgeId h) { multiplicity += m.head(h) == v2 ? 1 : 0; });
  CHECK(multiplicity >= 2);  // the fill may add more parallel edges
  CHECK(bfs_distance(m, v1, [&](VertexId v) { return v == v2; }, 5) == 1);
}

TEST_CASE("3-gon with a single-triangle fill adds one face and no vertex") {
  auto m = HalfEdgeMap::half_plane_segment(5);
  const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 2);
  const auto vertices = m.vertex_count();
  m.glue_fill(hole, single_triangle());
  CHECK(m.vertex_count() == vertices);
  CHECK(m.face_count() == 2);
  CHECK(euler(m) == 1);
  CHECK(m.check_integrity().ok());
}

TEST_CASE("fill with the wrong perimeter is rejected") {
  auto m = HalfEdgeMap::half_plane_segment(5);
  const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 2);
  CHECK_THROWS_AS(m.glue_fill(hole, closed_digon()), MapError);
  Rng rng(3);
  FreeSampler sampler(0.05);
  CHECK_THROWS_AS(m.glue_fill(hole, sampler.sample(4, rng)), MapError);
}

TEST_CASE("sampled fills glue into holes of every perimeter") {
  Rng rng(11);
  FreeSampler sampler(0.06);
  for (int i = 1; i <= 6; ++i) {
    auto m = HalfEdgeMap::half_plane_segment(16);
    const auto hole = m.attach_connect_triangle(m.root(), Side::Right, i);
    const auto fill = sampler.sample(i + 1, rng);
    const auto v_before = m.vertex_count();
    m.glue_fill(hole, fill);
    INFO("i = " << i);
    CHECK(m.check_integrity().ok());
    CHECK(euler(m) == 1);
    CHECK(m.vertex_count() == v_before + fill.vertex_count() - static_cast<std::size_t>(i + 1));
  }
}

TEST_CASE("bfs distance on a segment") {
  const auto m = HalfEdgeMap::half_plane_segment(5);
  const VertexId v0 = m.line_vertex(0);
  const VertexId v3 = m.line_vertex(3);
  CHECK(bfs_distance(m, v0, [&](VertexId v) { return v == v0; }, 10) == 0);
  CHECK(bfs_distance(m, v0, [&](VertexId v) { return v == v3; }, 10) == 3);
  CHECK_FALSE(bfs_distance(m, v0, [&](VertexId v) { return v == v3; }, 2).has_value());
  const auto all = bfs_distances(m, {v0});
  CHECK(all[m.line_vertex(-2).index()] == 2);
}

TEST_CASE("degrees count multiplicity") {
  const auto m = HalfEdgeMap::half_plane_segment(3);
  CHECK(m.degree(m.line_vertex(0)) == 2);
  CHECK(m.degree(m.line_vertex(m.window_right())) == 1);
  CHECK(m.degree(m.line_vertex(m.window_left())) == 1);
}

TEST_CASE("serialization round-trips sampled maps") {
  auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    LazyHalfPlane lazy(law, seed);
    lazy.reveal_hull({lazy.map().root_vertex()}, 2);
    const std::string text = serialize(lazy.map());
    const HalfEdgeMap back = deserialize(text);
    CHECK(back.check_integrity().ok());
    CHECK(back.vertex_count() == lazy.map().vertex_count());
    CHECK(back.edge_count() == lazy.map().edge_count());
    CHECK(back.face_count() == lazy.map().face_count());
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("deserialize rejects malformed input") {
  CHECK_THROWS(deserialize("not json"));
  CHECK_THROWS(deserialize("{\"version\": 99}"));
}

TEST_CASE("integrity report names a corrupted half-edge") {
  auto m = HalfEdgeMap::half_plane_segment(3);
  m.attach_alpha_triangle(m.root());
  REQUIRE(m.check_integrity().ok());
  m.mutable_half_edge_for_testing(HalfEdgeId(0)).twin = HalfEdgeId(2);
  const auto report = m.check_integrity();
  CHECK_FALSE(report.ok());
  CHECK(report.to_string().find("half-edge 0") != std::string::npos);
}

TEST_CASE("surgeries keep every invariant along a long peeling run") {
  auto law = std::make_shared<const StepLaw>(make_step_law(0.75));
  LazyHalfPlane lazy(law, 99);
  for (int k = 0; k < 400; ++k) {
    const auto frontier = lazy.frontier();
    const VertexId v = frontier[frontier.size() / 2];
    lazy.reveal_walk_neighborhood(v);
    if (k % 50 == 0) {
      const auto report = lazy.map().check_integrity();
      REQUIRE_MESSAGE(report.ok(), report.to_string());
      CHECK(euler(lazy.map()) == 1);
      const auto path = lazy.map().boundary_path();
      CHECK(std::set<VertexId>(path.begin(), path.end()).size() == path.size());
    }
  }
}

TEST_CASE("polygon from triangles") {
  // square 0,1,2,3 split by the diagonal 0-2
  const auto m = HalfEdgeMap::polygon_from_triangles(4, {{0, 1, 2}, {0, 2, 3}}, {0, 1, 2, 3});
  CHECK(m.check_integrity().ok());
  CHECK(m.face_count() == 2);
  CHECK(m.edge_count() == 5);
  CHECK(m.degree(VertexId(0)) == 3);
  CHECK_THROWS_AS(HalfEdgeMap::polygon_from_triangles(4, {{0, 1, 2}, {0, 1, 3}}, {0, 1, 2, 3}), MapError);
  CHECK_THROWS_AS(HalfEdgeMap::polygon_from_triangles(4, {{0, 1, 2}}, {0, 1, 2, 3}), MapError);
}
