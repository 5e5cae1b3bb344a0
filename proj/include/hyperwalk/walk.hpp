#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hyperwalk/peeling.hpp"

namespace hyperwalk {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StepStatus { Moved, Paused };

/// Simple random walk on a lazily revealed half-plane, started at the root vertex.
/// The map and the walk draw from separate streams derived from `seed`.
class WalkState {
 public:
  WalkState(std::shared_ptr<const StepLaw> law, std::uint64_t seed, Budget budget = {}, int initial_width = 8);

  [[nodiscard]] LazyHalfPlane& lazy() { return lazy_; }
  [[nodiscard]] const LazyHalfPlane& lazy() const { return lazy_; }
  [[nodiscard]] const HalfEdgeMap& map() const { return lazy_.map(); }
  [[nodiscard]] VertexId position() const { return position_; }
  [[nodiscard]] VertexId start() const { return start_; }
  [[nodiscard]] std::uint64_t step_index() const { return step_; }
  /// Number of times t >= 0 with X_t on the boundary line.
  [[nodiscard]] std::uint64_t boundary_visits() const { return boundary_visits_; }
  [[nodiscard]] std::uint64_t last_boundary_visit() const { return last_boundary_visit_; }

  /// Moves to the head of a uniformly chosen half-edge leaving the current
  /// position, after revealing its neighbourhood. Paused if the budget ran out.
  StepStatus step();

  struct Checkpoint {
    std::uint64_t step;
    VertexId position;
  };
  void checkpoint() { checkpoints_.push_back({step_, position_}); }
  [[nodiscard]] const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }

 private:
  LazyHalfPlane lazy_;
  Rng walk_rng_;
  VertexId start_;
  VertexId position_;
  std::uint64_t step_ = 0;
  std::uint64_t boundary_visits_ = 0;
  std::uint64_t last_boundary_visit_ = 0;
  std::vector<Checkpoint> checkpoints_;
};

struct DistanceCertificate {
  int lower = 0;
  int upper = 0;
  bool exact = false;
  std::uint64_t revelation_cost = 0;  // peels spent on this certificate
};

/// Bounds on d(x, targets) in the full map from the revealed part alone:
/// upper is the revealed distance, lower = min(upper, d(x, F) + 1 + d(targets, F))
/// where F is the frontier (a path leaving the revealed part crosses F twice).
DistanceCertificate certify_distance(const HalfEdgeMap& map, VertexId x, const std::vector<VertexId>& targets);

/// d(X_n, boundary line): reveals hulls of growing radius around the walker
/// until the bounds meet or `budget_peels` peels have been spent.
DistanceCertificate distance_to_boundary(WalkState& state, std::uint64_t budget_peels);
/// d(X_n, root vertex) bounds from the current revealed map (no extra peeling).
DistanceCertificate distance_to_start(const WalkState& state);

struct ReturnCurve {
  std::vector<double> probability;  // P(X_t = root), t = 0..n_max
  std::uint64_t peels = 0;
  std::size_t region_vertices = 0;
  double max_mass_defect = 0.0;  // |mass + discarded - 1|, worst step
};

/// Exact quenched return probabilities on the map of `lazy`, for t <= n_max.
/// Reveals the hull of radius floor(n_max/2) + 1 around the root; throws
/// BudgetExceeded if that does not fit.
ReturnCurve exact_return_curve(LazyHalfPlane& lazy, int n_max, bool parallel = true);

double return_probability_exact(double alpha, int n, std::uint64_t seed, Budget budget = {});

struct McEstimate {
  int n = 0;
  double p = 0.0;
  double stderr_ = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t walks = 0;
};

/// Annealed estimates of P(X_n = root) over independent (map, walk) replicas.
/// Replica r uses replica_seed(seed, "return-mc", r). Walks that exhaust the
/// budget are dropped and counted in `dropped`.
std::vector<McEstimate> return_probability_mc(double alpha, const std::vector<int>& n_list, std::uint64_t walks,
                                              std::uint64_t seed, Budget budget = {}, std::uint64_t* dropped = nullptr);

}  // namespace hyperwalk
