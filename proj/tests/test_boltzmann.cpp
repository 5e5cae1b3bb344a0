#include <doctest.h>

#include <cmath>
#include <vector>

#include "hyperwalk/boltzmann.hpp"
#include "hyperwalk/stats.hpp"

using namespace hyperwalk;

namespace {

BigCount factorial(int n) {
  BigCount r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

// Tutte's count of triangulations of a (k+2)-gon with n internal vertices.
BigCount phi_closed_form(int n, int k) {
  BigCount num = BigCount(1) << (n + 1);
  num *= factorial(2 * k + 1) * factorial(2 * k + 3 * n);
  const BigCount den = factorial(k) * factorial(k) * factorial(n) * factorial(2 * k + 2 * n + 2);
  REQUIRE(num % den == 0);
  return num / den;
}

double log_phi_closed_form(int n, int k) {
  return (n + 1) * std::log(2.0) + std::lgamma(2 * k + 2) + std::lgamma(2 * k + 3 * n + 1) - 2 * std::lgamma(k + 1) -
         std::lgamma(n + 1) - std::lgamma(2 * k + 2 * n + 3);
}

}  // namespace

TEST_CASE("solve_theta endpoints and forward map") {
  CHECK(solve_theta(0.0) == 0.0);
  CHECK(solve_theta(kCriticalQ) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  for (double q : {0.001, 0.01, 0.03, 0.064, 0.07, 0.074}) {
    const double t = solve_theta(q);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0 / 6.0);
    CHECK(std::abs(t * (1 - 2 * t) * (1 - 2 * t) - q) <= 1e-14);
  }
  CHECK_THROWS_AS(solve_theta(-0.01), std::domain_error);
  CHECK_THROWS_AS(solve_theta(0.08), std::domain_error);
}

TEST_CASE("partition function small values") {
  CHECK(partition_Z(2, 0.0) == doctest::Approx(1.0));
  CHECK(partition_Z(3, 0.0) == doctest::Approx(1.0));
  CHECK(partition_Z(4, 0.0) == doctest::Approx(2.0));   // two diagonals
  CHECK(partition_Z(5, 0.0) == doctest::Approx(5.0));   // Catalan
  CHECK(partition_Z(2, kCriticalQ) == doctest::Approx(9.0 / 8.0).epsilon(1e-10));
  CHECK_THROWS(partition_Z(1, 0.01));
  CHECK_THROWS(partition_Z(3, 0.1));
}

TEST_CASE("Z_2 = 1 + q Z_3 across the q grid") {
  for (double q = 0.01; q <= 0.0745; q += 0.004) {
    INFO("q = " << q);
    CHECK(std::abs(partition_Z(2, q) - 1.0 - q * partition_Z(3, q)) <= 1e-12);
  }
}

TEST_CASE("log-space evaluation stays finite for large m") {
  const double lz = log_partition_Z(5000, 0.05);
  CHECK(std::isfinite(lz));
  CHECK(lz > log_partition_Z(4999, 0.05));
}

TEST_CASE("phi_count agrees with the closed form") {
  for (int m = 2; m <= 10; ++m) {
    for (int n = 0; n + m <= 10; ++n) {
      INFO("n = " << n << ", m = " << m);
      CHECK(phi_count(n, m) == phi_closed_form(n, m - 2));
    }
  }
  CHECK(phi_count(0, 3) == 1);
  CHECK(phi_count(0, 4) == 2);
  CHECK(phi_count(1, 3) == 4);
  CHECK(phi_count(1, 2) == 1);
  CHECK_THROWS(phi_count(5, 6));
  CHECK(phi_count(5, 6, 11) == phi_closed_form(5, 4));
}

TEST_CASE("catalan numbers at n = 0") {
  const int catalan[] = {1, 1, 2, 5, 14, 42, 132};
  for (int k = 0; k <= 6; ++k) CHECK(phi_count(0, k + 2) == catalan[k]);
}

TEST_CASE("series of counts converges to Z from below") {
  for (int m : {2, 3, 5}) {
    const double q = 0.03;
    const double z = partition_Z(m, q);
    double partial = 0.0;
    double previous = -1.0;
    for (int n = 0; n <= 3000; ++n) {
      partial += std::exp(log_phi_closed_form(n, m - 2) + n * std::log(q));
      CHECK(partial >= previous);
      CHECK(partial <= z * (1 + 1e-12));
      previous = partial;
    }
    CHECK(partial == doctest::Approx(z).epsilon(1e-10));
  }
}

TEST_CASE("one-step law sums to one") {
  FreeSampler sampler(0.05);
  for (int p = 2; p <= 12; ++p) {
    const auto law = sampler.step_law(p);
    double s = 0.0;
    for (double x : law) s += x;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  // at p = 2 closing has probability 1 / Z_2
  CHECK(sampler.step_law(2)[1] == doctest::Approx(1.0 / partition_Z(2, 0.05)));
}

TEST_CASE("sampled triangulations have the Euler face count") {
  Rng rng(17);
  FreeSampler sampler(0.06);
  for (int m = 2; m <= 7; ++m) {
    for (int k = 0; k < 50; ++k) {
      FreeSampleStats stats;
      const auto t = sampler.sample(m, rng, &stats);
      CHECK(t.check_integrity().ok());
      CHECK(stats.perimeter == m);
      CHECK(stats.face_count == m - 2 + 2 * stats.internal_vertex_count);
      CHECK(static_cast<int>(t.face_count()) == stats.face_count);
      CHECK(static_cast<int>(t.vertex_count()) == m + stats.internal_vertex_count);
    }
  }
}

TEST_CASE("q = 0 samples have no internal vertex") {
  Rng rng(3);
  FreeSampler sampler(0.0);
  for (int m = 2; m <= 8; ++m) {
    FreeSampleStats stats;
    sampler.sample(m, rng, &stats);
    CHECK(stats.internal_vertex_count == 0);
  }
}

TEST_CASE("sampler marginals match the Boltzmann weights") {
  const double q = 0.06;
  FreeSampler sampler(q);
  Rng rng(2024);
  for (int m : {2, 3, 4}) {
    std::vector<std::uint64_t> counts(4, 0);
    const int samples = 20000;
    for (int k = 0; k < samples; ++k) {
      FreeSampleStats stats;
      sampler.sample(m, rng, &stats);
      if (stats.internal_vertex_count <= 3) ++counts[static_cast<std::size_t>(stats.internal_vertex_count)];
    }
    std::vector<double> probs;
    const double z = partition_Z(m, q);
    for (int n = 0; n <= 3; ++n) probs.push_back(std::exp(log_phi_closed_form(n, m - 2)) * std::pow(q, n) / z);
    std::vector<std::uint64_t> observed = counts;
    std::uint64_t in_range = 0;
    for (auto c : counts) in_range += c;
    observed.push_back(samples - in_range);
    const auto test = chi_square_test(observed, probs);
    INFO("m = " << m << " chi2 = " << test.statistic << " p = " << test.p_value);
    CHECK(test.p_value > 0.001);
  }
}

TEST_CASE("P(no internal vertex) of a triangle is 1 / Z_3") {
  const double q = 0.01;
  FreeSampler sampler(q);
  Rng rng(5);
  const int samples = 40000;
  int empty = 0;
  for (int k = 0; k < samples; ++k) {
    FreeSampleStats stats;
    sampler.sample(3, rng, &stats);
    empty += stats.internal_vertex_count == 0 ? 1 : 0;
  }
  const double p = 1.0 / partition_Z(3, q);
  const double sd = std::sqrt(p * (1 - p) / samples);
  CHECK(std::abs(empty / static_cast<double>(samples) - p) < 4 * sd);
}

TEST_CASE("fill_hole reports the internal vertices it created") {
  Rng rng(8);
  FreeSampler sampler(0.06);
  auto m = HalfEdgeMap::half_plane_segment(9);
  const auto hole = m.attach_connect_triangle(m.root(), Side::Right, 4);
  const auto before = m.vertex_count();
  const int created = sampler.fill_hole(m, hole.start, hole.perimeter, rng);
  CHECK(m.vertex_count() == before + static_cast<std::size_t>(created));
  CHECK(m.check_integrity().ok());
}
