#include <doctest.h>

#include <cmath>

#include "hyperwalk/kernels.hpp"

using namespace hyperwalk;

namespace {

SparseChain random_chain(Rng& rng, int n) {
  SparseChain c;
  for (int u = 0; u < n; ++u) {
    std::vector<std::pair<int, double>> row;
    const int k = 1 + static_cast<int>(rng.below(5));
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      const double w = rng.uniform() + 0.1;
      row.emplace_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))), w);
      total += w;
    }
    for (auto& e : row) e.second /= total;
    c.add_row(row);
  }
  return c;
}

}  // namespace

TEST_CASE("transpose twice is the identity on the dense matrix") {
  Rng rng(1);
  const auto c = random_chain(rng, 30);
  const auto tt = c.transpose().transpose();
  std::vector<double> dense_a(900, 0.0), dense_b(900, 0.0);
  for (int u = 0; u < 30; ++u) {
    for (auto k = c.offsets[u]; k < c.offsets[u + 1]; ++k) dense_a[static_cast<std::size_t>(u * 30 + c.targets[k])] += c.probs[k];
    for (auto k = tt.offsets[u]; k < tt.offsets[u + 1]; ++k) dense_b[static_cast<std::size_t>(u * 30 + tt.targets[k])] += tt.probs[k];
  }
  for (std::size_t i = 0; i < dense_a.size(); ++i) CHECK(dense_a[i] == doctest::Approx(dense_b[i]));
}

TEST_CASE("serial and parallel propagation agree and keep mass") {
  Rng rng(2);
  const auto c = random_chain(rng, 500);
  const auto t = c.transpose();
  std::vector<double> a(500, 0.0), b, s, p;
  a[7] = 1.0;
  b = a;
  for (int step = 0; step < 25; ++step) {
    propagate_serial(c, a, s);
    propagate_parallel(t, b, p);
    a.swap(s);
    b.swap(p);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
    total += a[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("serial and parallel subset tables agree") {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto g = random_graph(rng, k < 4 ? 13 + k : 4 + static_cast<int>(rng.below(10)), 3, true);
    std::vector<int> vertices;
    for (int u = 0; u < g.size(); ++u) {
      if (!g.is_sink(u)) vertices.push_back(u);
    }
    const auto s = subset_table_serial(g, vertices);
    const auto p = subset_table_parallel(g, vertices);
    REQUIRE(s.volume.size() == (std::size_t{1} << vertices.size()));
    REQUIRE(p.volume.size() == s.volume.size());
    for (std::size_t m = 0; m < s.volume.size(); ++m) {
      CHECK(s.volume[m] == doctest::Approx(p.volume[m]));
      CHECK(s.boundary[m] == doctest::Approx(p.boundary[m]));
    }
    // the full set's boundary is the weight into the sink
    double into_sink = 0.0;
    for (int u : vertices) {
      for (const auto& [v, w] : g.neighbors(u)) into_sink += g.is_sink(v) ? w : 0.0;
    }
    CHECK(s.boundary.back() == doctest::Approx(into_sink));
  }
}

TEST_CASE("subset tables refuse oversized vertex lists") {
  WeightedGraph g(kMaxSubsetVertices + 1);
  std::vector<int> all;
  for (int u = 0; u < g.size(); ++u) all.push_back(u);
  CHECK_THROWS(subset_table_serial(g, all));
  CHECK_THROWS(subset_table_parallel(g, all));
  CHECK(kernel_threads() >= 1);
}
