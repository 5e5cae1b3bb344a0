#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hyperwalk/harness.hpp"
#include "hyperwalk/stats.hpp"

using namespace hyperwalk;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.replicas = 3;
  c.n_max = 60;
  c.stride = 20;
  c.certify_peels = 2000;
  c.budget_vertices = 200'000;
  return c;
}

std::string csv_of(const ExperimentConfig& c, const RunResult& r) {
  std::ostringstream out;
  write_csv(out, c, r.experiment, r.rows);
  return out.str();
}

}  // namespace

TEST_CASE("config JSON round trip and hash") {
  ExperimentConfig a;
  ExperimentConfig b;
  b.merge_json(a.to_json());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  b.merge_json(nlohmann::json{{"alpha", 0.75}, {"mc_n", {2, 4}}});
  CHECK(b.alpha == 0.75);
  CHECK(b.mc_n == std::vector<int>{2, 4});
  CHECK(a.hash() != b.hash());
  CHECK_THROWS_AS(b.merge_json(nlohmann::json{{"alhpa", 0.7}}), std::invalid_argument);
}

TEST_CASE("CSV header, columns and round trip") {
  const auto c = small_config();
  std::vector<ResultRow> rows{{"demo", "b", 7, 1, 2.0, 0.1, 0.0, 1, 5}, {"demo", "a", 7, 0, 1.0, 1.0 / 3.0, 0.25, 0, 9}};
  std::ostringstream out;
  write_csv(out, c, "demo", rows);
  const std::string text = out.str();
  CHECK(text.rfind("# schema=hyperwalk-csv/1 experiment=demo config_hash=" + c.hash() + " seed=1\n", 0) == 0);
  std::istringstream in(text);
  std::string header;
  const auto back = read_csv(in, &header);
  REQUIRE(back.size() == 2);
  CHECK(back[0].quantity == "a");  // sorted
  CHECK(back[0].value == 1.0 / 3.0);  // %.17g is lossless
  CHECK(back[0].stderr_ == 0.25);
  CHECK(back[1].cost == 5);
  std::istringstream bad("experiment,quantity\n");
  CHECK_THROWS(read_csv(bad));
}

TEST_CASE("traps experiment is deterministic") {
  ExperimentConfig c;
  c.trap_orders = {2, 3};
  c.interval_orders = {2, 4};
  const auto a = run_traps(c);
  const auto b = run_traps(c);
  CHECK(csv_of(c, a) == csv_of(c, b));
  CHECK(a.summary["traps"].size() == 2);
  for (const auto& t : a.summary["traps"]) CHECK(t["lumpable"].get<bool>());
}

TEST_CASE("small speed run: deterministic, bounded distances") {
  const auto c = small_config();
  const auto a = run_speed(c);
  const auto b = run_speed(c);
  CHECK(csv_of(c, a) == csv_of(c, b));
  for (const auto& r : a.rows) {
    if (r.quantity == "dist_lower" || r.quantity == "dist_upper") {
      CHECK(r.value <= r.x);
      CHECK(r.value >= 0.0);
    }
    if (r.quantity == "dist_upper" && r.x == 0.0) CHECK(r.value == 0.0);
  }
  CHECK(a.summary.contains("lower_over_n_q01"));
  CHECK(a.summary["replicas_finished"].get<int>() + a.summary["replicas_paused"].get<int>() == 3);
}

TEST_CASE("seed changes the output") {
  auto c = small_config();
  const auto a = run_speed(c);
  c.seed = 2;
  const auto b = run_speed(c);
  CHECK(csv_of(c, a) != csv_of(c, b));
}

TEST_CASE("small return-prob run") {
  ExperimentConfig c;
  c.exact_n_max = 4;
  c.exact_maps = 6;
  c.mc_n = {1, 2, 4, 6};
  c.mc_walks = 3000;
  c.mc_min_hits = 10;
  const auto r = run_return_prob(c);
  const auto& sm = r.summary;
  CHECK(sm["exact_maps_used"].get<int>() == 6);
  for (const auto& p : sm["fit_points"]) CHECK(p["n"].get<int>() >= 2);
  CHECK(sm["overlap"].size() == 2);
  CHECK(sm.contains("kappa"));
}

TEST_CASE("small volume run") {
  ExperimentConfig c;
  c.replicas = 3;
  c.r_max = 3;
  const auto r = run_volume(c);
  const auto ml = r.summary["mean_log_ball"].get<std::vector<double>>();
  REQUIRE(ml.size() == 4);
  CHECK(ml[0] == 0.0);
  for (std::size_t k = 1; k < ml.size(); ++k) CHECK(ml[k] > ml[k - 1]);
}

TEST_CASE("survival tail fit on a geometric histogram") {
  std::vector<std::uint64_t> h;
  double mass = 1e6;
  h.push_back(0);
  for (int k = 1; k < 40; ++k) {
    h.push_back(static_cast<std::uint64_t>(mass));
    mass *= 0.6;
  }
  const auto fit = fit_survival_tail(h, 50);
  CHECK(fit.ok);
  CHECK(fit.mode == 1);
  CHECK(fit.slope == doctest::Approx(std::log(0.6)).epsilon(0.02));
  CHECK(fit.r2 > 0.999);
  CHECK_FALSE(fit_survival_tail({5, 1}, 50).ok);
}

TEST_CASE("volume stability definition") {
  std::vector<double> linear;
  for (int r = 0; r <= 8; ++r) linear.push_back(1.7 * r);
  CHECK(volume_stability(linear).stable);
  std::vector<double> bent = linear;
  for (int r = 6; r <= 8; ++r) bent[static_cast<std::size_t>(r)] = bent[5] + 0.2 * (r - 5);
  CHECK_FALSE(volume_stability(bent).stable);
  CHECK_FALSE(volume_stability({0, 1, 2}).stable);
}

TEST_CASE("line fit and quantiles") {
  const auto fit = fit_line({0, 1, 2, 3}, {1, 3, 5, 7}, 0.98);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
  CHECK(quantile({1, 2, 3, 4, 5}, 0.5) == 3.0);
  CHECK(quantile({1, 2}, 0.25) == doctest::Approx(1.25));
  CHECK(normal_upper_quantile(0.025) == doctest::Approx(1.959964).epsilon(1e-6));
}

TEST_CASE("verify suites") {
  CHECK_THROWS_AS(run_verify("nope", 1), std::invalid_argument);
  const auto r = run_verify("traps", 1);
  CHECK(r.passed());
  CHECK(r.checks.size() == 4);
  CHECK(r.to_json()["passed"].get<bool>());
}
