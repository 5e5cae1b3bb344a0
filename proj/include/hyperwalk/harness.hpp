#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwalk/peeling.hpp"

namespace hyperwalk {

inline constexpr const char* kCsvSchema = "hyperwalk-csv/1";

struct ExperimentConfig {
  double alpha = 0.8;
  std::uint64_t seed = 1;
  int replicas = 50;
  int n_max = 2000;
  int stride = 200;                 // checkpoint stride (speed)
  std::size_t budget_vertices = 2'000'000;
  std::uint64_t budget_peels = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t certify_peels = 20'000;  // per distance certificate

  // return-prob
  int exact_n_max = 10;
  int exact_maps = 40;
  std::vector<int> mc_n{2, 4, 6, 8, 10, 12, 16, 24, 32, 48, 64};
  std::uint64_t mc_walks = 200'000;
  int mc_min_hits = 30;  // MC points with fewer hits stay out of the exponent fit

  // volume / boundary-dist
  int r_max = 8;
  std::vector<int> boundary_j{5, 10, 20};
  int ball_boundary_r = 5;

  // step-tails
  std::uint64_t tail_steps = 100'000;
  int tail_min_count = 50;

  // traps
  std::vector<int> trap_orders{4, 6, 8};
  std::vector<int> interval_orders{5, 10, 20};

  [[nodiscard]] Budget budget() const { return Budget{budget_peels, budget_vertices}; }
  [[nodiscard]] nlohmann::json to_json() const;
  /// Keys present in `j` override the current values; unknown keys are an error.
  void merge_json(const nlohmann::json& j);
  /// FNV-1a of the canonical JSON dump, as 16 hex digits.
  [[nodiscard]] std::string hash() const;
};

struct ResultRow {
  std::string experiment;
  std::string quantity;
  std::uint64_t seed = 0;
  int replica = -1;  // -1 for aggregates
  double x = 0.0;
  double value = 0.0;
  double stderr_ = 0.0;
  int exact = -1;  // 1 exact, 0 bound or estimate, -1 not applicable
  std::uint64_t cost = 0;
};

struct RunResult {
  std::string experiment;
  std::vector<ResultRow> rows;
  nlohmann::json summary;
};

/// Sorts rows by (quantity, replica, x, value) so output is independent of
/// the order in which parallel replicas finished.
void sort_rows(std::vector<ResultRow>& rows);
/// Header comment, column row, then one line per row; doubles as %.17g.
void write_csv(std::ostream& out, const ExperimentConfig& config, const std::string& experiment,
               std::vector<ResultRow> rows);
/// Inverse of write_csv (used by tests and by downstream tools).
std::vector<ResultRow> read_csv(std::istream& in, std::string* header = nullptr);

RunResult run_speed(const ExperimentConfig& config);
RunResult run_return_prob(const ExperimentConfig& config);
RunResult run_volume(const ExperimentConfig& config);
RunResult run_boundary_distance(const ExperimentConfig& config);
RunResult run_step_tails(const ExperimentConfig& config);
RunResult run_traps(const ExperimentConfig& config);

struct TailFit {
  bool ok = false;
  int mode = 0;
  int k_max = 0;  // last k with at least min_count samples >= k
  double slope = 0.0;
  double r2 = 0.0;
  int points = 0;
};

/// Least-squares line through log P(E >= k) for mode < k <= k_max.
TailFit fit_survival_tail(const std::vector<std::uint64_t>& histogram, int min_count);

/// Volume growth is "stable" when the log-slopes over r in [3,5] and [6,8]
/// are both positive and differ by at most half the larger one.
struct VolumeStability {
  double early_slope = 0.0;
  double late_slope = 0.0;
  bool stable = false;
};
VolumeStability volume_stability(const std::vector<double>& mean_log_ball);

struct VerifyCheck {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
  std::uint64_t seed = 0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// suite in {boltzmann, steplaw, maps, expansion, traps, walk-oracles, all};
/// throws std::invalid_argument otherwise.
VerifyReport run_verify(const std::string& suite, std::uint64_t seed);
const std::vector<std::string>& verify_suites();

}  // namespace hyperwalk
