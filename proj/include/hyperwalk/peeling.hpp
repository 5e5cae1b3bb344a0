#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "hyperwalk/boltzmann.hpp"
#include "hyperwalk/map.hpp"
#include "hyperwalk/rng.hpp"

namespace hyperwalk {

/// Half-plane peeling law: an alpha-step with probability alpha, (L,i) and
/// (R,i) each with probability p_i = beta^i Z_{i+1}(alpha beta), truncated at I_max.
struct StepLaw {
  double alpha = 0.0;
  double beta = 0.0;
  double q = 0.0;
  std::vector<double> p;  // p[i-1] = p_i, i = 1..I_max
  int i_max = 0;
  double tail_mass = 0.0;  // 2 * sum_{i > I_max} p_i
  double tolerance = 0.0;
  std::vector<double> cumulative;  // alpha + 2 (p_1 + ... + p_i), i = 0..I_max

  [[nodiscard]] double p_i(int i) const { return i >= 1 && i <= i_max ? p[static_cast<std::size_t>(i - 1)] : 0.0; }
  /// alpha + 2 sum_{i <= I_max} p_i - 1, evaluated with compensated summation.
  [[nodiscard]] double normalization_error() const;
};

/// Throws std::domain_error unless alpha lies in (2/3, 1). With `exploratory`
/// set, alpha in (0, 2/3] is accepted with a warning on stderr.
StepLaw make_step_law(double alpha, double tail_tol = 1e-12, bool exploratory = false);

/// Probability of the event that a finite marked configuration with V internal
/// vertices and F faces is a sub-map of H.
double event_probability(int internal_vertices, int faces, double alpha);

enum class PeelKind { Alpha, Connect };

struct StepDraw {
  PeelKind kind = PeelKind::Alpha;
  Side side = Side::Right;
  int i = 0;
};

/// Draws one step; draws landing in the truncated tail are redrawn and counted in `overflows`.
StepDraw sample_step(const StepLaw& law, Rng& rng, std::uint64_t* overflows = nullptr);

struct PeelEvent {
  PeelKind kind = PeelKind::Alpha;
  Side side = Side::Right;
  int i = 0;
  FreeSampleStats fill;
  int edges_added = 0;

  /// (R,1) or (L,1) with the 2-gon closed up.
  [[nodiscard]] bool empty_digon() const { return kind == PeelKind::Connect && i == 1 && fill.face_count == 0; }
};

struct Budget {
  std::uint64_t max_peels = std::numeric_limits<std::uint64_t>::max();
  std::size_t max_vertices = 2'000'000;
};

enum class RevealStatus { Complete, BudgetExhausted };

struct HullReport {
  int r = 0;
  std::uint64_t peels = 0;               // N_r
  int exact_radius = 0;                  // ball sizes are exact up to this radius
  std::vector<std::size_t> ball_sizes;   // |{v : d(v, centers) <= k}|, k = 0..r
  std::vector<std::size_t> hull_sizes;   // ball plus the revealed components cut off from the frontier
  std::vector<std::size_t> hull_edges;   // edges with both ends in the hull
  RevealStatus status = RevealStatus::Complete;
};

class LazyHalfPlane;

/// Chooses the next edge to peel, or nullopt when the policy is satisfied.
using PeelPolicy = std::function<std::optional<HalfEdgeId>(LazyHalfPlane&)>;

/// Peels the frontier edge leaving v until v is interior.
PeelPolicy walk_policy(VertexId v);
/// Peels the root edge once, if it is still on the frontier.
PeelPolicy fixed_root_policy();

/// A partially revealed half-planar triangulation. The unrevealed part is
/// never stored: each peel samples the next face from the step law.
class LazyHalfPlane {
 public:
  LazyHalfPlane(std::shared_ptr<const StepLaw> law, std::uint64_t seed, int initial_width = 8, Budget budget = {});

  [[nodiscard]] const HalfEdgeMap& map() const { return map_; }
  [[nodiscard]] HalfEdgeMap& map() { return map_; }
  [[nodiscard]] const StepLaw& law() const { return *law_; }
  [[nodiscard]] Rng& rng() { return rng_; }
  [[nodiscard]] std::uint64_t peel_count() const { return peel_count_; }
  [[nodiscard]] std::uint64_t overflow_count() const { return overflows_; }
  [[nodiscard]] std::uint64_t extensions() const { return extensions_; }
  [[nodiscard]] const Budget& budget() const { return budget_; }
  void set_budget(Budget b) { budget_ = b; }
  [[nodiscard]] bool budget_exhausted() const;

  /// Frontier vertices in left-to-right order.
  [[nodiscard]] std::vector<VertexId> frontier() const { return map_.boundary_path(); }

  /// Samples and applies one peeling step on frontier edge e.
  PeelEvent peel_edge(HalfEdgeId e);
  /// Applies a prescribed step (the fill is still sampled).
  PeelEvent apply_step(HalfEdgeId e, const StepDraw& draw);

  /// Peels along `policy` until it returns nullopt or the budget runs out.
  RevealStatus run(const PeelPolicy& policy);

  RevealStatus reveal_walk_neighborhood(VertexId v);
  HullReport reveal_hull(const std::vector<VertexId>& centers, int r);

  /// Makes v a non-end vertex of the window if it is a window end.
  void ensure_not_window_end(VertexId v);

  /// Keeps a copy of every event from now on.
  void record_events(bool on) { record_ = on; }
  [[nodiscard]] const std::vector<PeelEvent>& events() const { return events_; }

 private:
  void ensure_room(HalfEdgeId e, Side side, int i);

  std::shared_ptr<const StepLaw> law_;
  HalfEdgeMap map_;
  FreeSampler sampler_;
  Rng rng_;
  Budget budget_;
  std::uint64_t peel_count_ = 0;
  std::uint64_t overflows_ = 0;
  std::uint64_t extensions_ = 0;
  bool record_ = false;
  std::vector<PeelEvent> events_;
};

/// Hull and ball sizes around `centers` on the current revealed map (see HullReport).
void measure_hull(const HalfEdgeMap& map, const std::vector<VertexId>& centers, int r, HullReport& report);

}  // namespace hyperwalk
