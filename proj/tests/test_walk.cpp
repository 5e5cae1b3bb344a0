#include <doctest.h>

#include <cmath>
#include <functional>

#include "hyperwalk/stats.hpp"
#include "hyperwalk/walk.hpp"

using namespace hyperwalk;

namespace {

std::shared_ptr<const StepLaw> law08() {
  static const auto law = std::make_shared<const StepLaw>(make_step_law(0.8));
  return law;
}

std::vector<VertexId> line_of(const HalfEdgeMap& m) {
  std::vector<VertexId> line;
  for (auto k = m.window_left(); k <= m.window_right(); ++k) line.push_back(m.line_vertex(k));
  return line;
}

// Sum over all n-step paths from the root back to the root, by recursion.
double enumerate_returns(const HalfEdgeMap& m, VertexId v, VertexId root, int left) {
  if (left == 0) return v == root ? 1.0 : 0.0;
  double total = 0.0;
  const double p = 1.0 / m.degree(v);
  m.for_each_outgoing(v, [&](HalfEdgeId h) { total += p * enumerate_returns(m, m.head(h), root, left - 1); });
  return total;
}

}  // namespace

TEST_CASE("walk starts on the boundary at the root") {
  WalkState w(law08(), 1);
  CHECK(w.position() == w.start());
  CHECK(w.map().on_line(w.start()));
  CHECK(w.boundary_visits() == 1);
  CHECK(w.step_index() == 0);
}

TEST_CASE("first step is uniform over the root's half-edges") {
  int hits_v1 = 0;
  double expected = 0.0;
  const int n = 4000;
  for (int k = 0; k < n; ++k) {
    WalkState w(law08(), replica_seed(3, "test-first", static_cast<std::uint64_t>(k)));
    w.lazy().reveal_walk_neighborhood(w.start());
    const auto& m = w.map();
    const VertexId v1 = m.line_vertex(1);
    int mult = 0;
    m.for_each_outgoing(w.start(), [&](HalfEdgeId h) { mult += m.head(h) == v1 ? 1 : 0; });
    expected += static_cast<double>(mult) / m.degree(w.start());
    w.step();
    hits_v1 += w.position() == v1 ? 1 : 0;
  }
  const double p = expected / n;
  CHECK(std::abs(hits_v1 - expected) < 4 * std::sqrt(n * p * (1 - p)));
}

TEST_CASE("boundary visit bookkeeping") {
  WalkState w(law08(), 8);
  std::uint64_t visits = 1, last = 0;
  for (int t = 1; t <= 300; ++t) {
    REQUIRE(w.step() == StepStatus::Moved);
    if (w.map().on_line(w.position())) {
      ++visits;
      last = static_cast<std::uint64_t>(t);
    }
  }
  CHECK(w.boundary_visits() == visits);
  CHECK(w.last_boundary_visit() == last);
  CHECK(w.step_index() == 300);
}

TEST_CASE("distance to the start never exceeds the step count") {
  WalkState w(law08(), 21);
  for (int t = 1; t <= 200; ++t) {
    w.step();
    const auto d = distance_to_start(w);
    CHECK(d.lower <= d.upper);
    CHECK(d.upper <= t);
  }
}

TEST_CASE("certificate on a bare segment") {
  const auto m = HalfEdgeMap::half_plane_segment(5);
  const auto c = certify_distance(m, m.line_vertex(0), {m.line_vertex(0)});
  CHECK(c.lower == 0);
  CHECK(c.upper == 0);
  CHECK(c.exact);
  // everything is frontier, so lower = 0 + 1 + 0 caps at upper
  const auto far = certify_distance(m, m.line_vertex(-2), {m.line_vertex(3)});
  CHECK(far.upper == 5);
  CHECK(far.lower == 1);
  CHECK_FALSE(far.exact);
}

TEST_CASE("certificates only tighten as more is revealed") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    WalkState w(law08(), seed);
    for (int t = 0; t < 40; ++t) w.step();
    const auto line = line_of(w.map());
    const auto small = certify_distance(w.map(), w.position(), line);
    REQUIRE(small.lower <= small.upper);
    w.lazy().set_budget(Budget{std::numeric_limits<std::uint64_t>::max(), 200'000});
    w.lazy().reveal_hull({w.position()}, std::min(small.upper + 2, 6));
    const auto big = certify_distance(w.map(), w.position(), line_of(w.map()));
    CHECK(small.lower <= big.lower);
    CHECK(big.lower <= big.upper);
    CHECK(big.upper <= small.upper);
  }
}

TEST_CASE("distance_to_boundary is zero on the line and respects its peel budget") {
  WalkState w(law08(), 4);
  const auto at_start = distance_to_boundary(w, 1000);
  CHECK(at_start.exact);
  CHECK(at_start.upper == 0);
  for (int t = 0; t < 100; ++t) w.step();
  const auto d = distance_to_boundary(w, 20000);
  CHECK(d.lower <= d.upper);
  CHECK(d.lower >= (w.map().on_line(w.position()) ? 0 : 1));
}

TEST_CASE("exact return curve: n = 0, 1, 2") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    LazyHalfPlane lazy(law08(), seed);
    const auto curve = exact_return_curve(lazy, 2, false);
    REQUIRE(curve.probability.size() == 3);
    CHECK(curve.probability[0] == 1.0);
    CHECK(curve.probability[1] == 0.0);  // no loops
    const auto& m = lazy.map();
    const VertexId root = m.root_vertex();
    double p = 0.0;
    m.for_each_outgoing(root, [&](HalfEdgeId h) {
      const VertexId u = m.head(h);
      int back = 0;
      m.for_each_outgoing(u, [&](HalfEdgeId g) { back += m.head(g) == root ? 1 : 0; });
      p += static_cast<double>(back) / (m.degree(root) * m.degree(u));
    });
    CHECK(curve.probability[2] == doctest::Approx(p).epsilon(1e-14));
  }
}

TEST_CASE("exact return curve agrees with path enumeration") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    LazyHalfPlane lazy(law08(), seed);
    const auto curve = exact_return_curve(lazy, 6, false);
    CHECK(curve.max_mass_defect < 1e-12);
    const VertexId root = lazy.map().root_vertex();
    for (int n = 0; n <= 6; ++n) {
      INFO("seed " << seed << " n " << n);
      CHECK(curve.probability[static_cast<std::size_t>(n)] ==
            doctest::Approx(enumerate_returns(lazy.map(), root, root, n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("serial and parallel return DPs agree") {
  LazyHalfPlane a(law08(), 9);
  LazyHalfPlane b(law08(), 9);
  const auto s = exact_return_curve(a, 8, false);
  const auto p = exact_return_curve(b, 8, true);
  REQUIRE(s.probability.size() == p.probability.size());
  for (std::size_t t = 0; t < s.probability.size(); ++t) CHECK(s.probability[t] == doctest::Approx(p.probability[t]).epsilon(1e-13));
}

TEST_CASE("exact curve throws when the hull does not fit") {
  LazyHalfPlane lazy(law08(), 1, 8, Budget{std::numeric_limits<std::uint64_t>::max(), 200});
  CHECK_THROWS_AS(exact_return_curve(lazy, 10), BudgetExceeded);
  CHECK_THROWS_AS(exact_return_curve(lazy, -1), std::invalid_argument);
}

TEST_CASE("Monte Carlo matches the annealed exact mean") {
  const std::vector<int> ns{2, 4};
  std::vector<std::vector<double>> exact(ns.size());
  for (int k = 0; k < 40; ++k) {
    LazyHalfPlane lazy(law08(), replica_seed(2, "test-exact", static_cast<std::uint64_t>(k)));
    const auto curve = exact_return_curve(lazy, 4, false);
    for (std::size_t j = 0; j < ns.size(); ++j) exact[j].push_back(curve.probability[static_cast<std::size_t>(ns[j])]);
  }
  std::uint64_t dropped = 0;
  const auto mc = return_probability_mc(0.8, ns, 20000, 6, Budget{}, &dropped);
  CHECK(dropped == 0);
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const double se = std::hypot(standard_error(exact[j]), mc[j].stderr_);
    INFO("n = " << ns[j] << " exact " << mean(exact[j]) << " mc " << mc[j].p);
    CHECK(std::abs(mean(exact[j]) - mc[j].p) < 4 * se);
  }
}

TEST_CASE("odd times are possible but rarer than the neighbouring even times") {
  const auto mc = return_probability_mc(0.8, {0, 1, 2, 3}, 20000, 11);
  CHECK(mc[0].p == 1.0);
  CHECK(mc[1].hits == 0);
  CHECK(mc[3].p < mc[2].p);
}

TEST_CASE("a tiny budget pauses the walk and a larger one resumes it") {
  WalkState w(law08(), 5, Budget{30, 2'000'000});
  int moved = 0;
  while (w.step() == StepStatus::Moved) ++moved;
  CHECK(w.lazy().peel_count() <= 30);
  const auto position = w.position();
  CHECK(w.step() == StepStatus::Paused);
  CHECK(w.position() == position);
  w.lazy().set_budget(Budget{});
  CHECK(w.step() == StepStatus::Moved);
  CHECK(w.step_index() == static_cast<std::uint64_t>(moved) + 1);
}

TEST_CASE("walks are reproducible from the seed") {
  WalkState a(law08(), 99);
  WalkState b(law08(), 99);
  for (int t = 0; t < 500; ++t) {
    a.step();
    b.step();
  }
  CHECK(a.position() == b.position());
  CHECK(a.boundary_visits() == b.boundary_visits());
  CHECK(serialize(a.map()) == serialize(b.map()));
}

TEST_CASE("bad MC arguments") {
  CHECK_THROWS_AS(return_probability_mc(0.8, {2}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(return_probability_mc(0.8, {-2}, 10, 1), std::invalid_argument);
}
