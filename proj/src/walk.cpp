#include "hyperwalk/walk.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperwalk/kernels.hpp"

namespace hyperwalk {

namespace {

constexpr std::uint64_t kWalkStream = 0x6a09e667f3bcc909ULL;

std::vector<VertexId> window_line(const HalfEdgeMap& map) {
  std::vector<VertexId> line;
  for (auto k = map.window_left(); k <= map.window_right(); ++k) line.push_back(map.line_vertex(k));
  return line;
}

}  // namespace

WalkState::WalkState(std::shared_ptr<const StepLaw> law, std::uint64_t seed, Budget budget, int initial_width)
    : lazy_(std::move(law), mix64(seed), initial_width, budget), walk_rng_(mix64(seed ^ kWalkStream)) {
  start_ = lazy_.map().root_vertex();
  position_ = start_;
  boundary_visits_ = 1;
}

StepStatus WalkState::step() {
  if (lazy_.reveal_walk_neighborhood(position_) == RevealStatus::BudgetExhausted) return StepStatus::Paused;
  const HalfEdgeMap& map = lazy_.map();
  const int deg = map.degree(position_);
  const auto k = static_cast<int>(walk_rng_.below(static_cast<std::uint64_t>(deg)));
  position_ = map.head(map.outgoing(position_, k));
  ++step_;
  if (map.on_line(position_)) {
    ++boundary_visits_;
    last_boundary_visit_ = step_;
  }
  return StepStatus::Moved;
}

DistanceCertificate certify_distance(const HalfEdgeMap& map, VertexId x, const std::vector<VertexId>& targets) {
  const auto from_x = bfs_distances(map, {x});
  const auto from_t = bfs_distances(map, targets);
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  int upper = kInf;
  for (VertexId t : targets) {
    if (from_x[t.index()] >= 0) upper = std::min(upper, from_x[t.index()]);
  }
  int x_to_f = kInf;
  int t_to_f = kInf;
  for (std::size_t v = 0; v < map.vertex_count(); ++v) {
    if (!map.on_frontier(VertexId(static_cast<std::int32_t>(v)))) continue;
    if (from_x[v] >= 0) x_to_f = std::min(x_to_f, from_x[v]);
    if (from_t[v] >= 0) t_to_f = std::min(t_to_f, from_t[v]);
  }
  DistanceCertificate cert;
  cert.upper = upper;
  cert.lower = std::min(upper, x_to_f + 1 + t_to_f);
  cert.exact = cert.lower == cert.upper;
  return cert;
}

DistanceCertificate distance_to_boundary(WalkState& state, std::uint64_t budget_peels) {
  LazyHalfPlane& lazy = state.lazy();
  const VertexId x = state.position();
  if (lazy.map().on_line(x)) return DistanceCertificate{0, 0, true, 0};
  const std::uint64_t start = lazy.peel_count();
  const Budget saved = lazy.budget();
  DistanceCertificate cert;
  for (int r = 1;; ++r) {
    cert = certify_distance(lazy.map(), x, window_line(lazy.map()));
    const std::uint64_t spent = lazy.peel_count() - start;
    cert.revelation_cost = spent;
    if (cert.exact || spent >= budget_peels) break;
    Budget local = saved;
    local.max_peels = std::min(saved.max_peels, lazy.peel_count() + (budget_peels - spent));
    lazy.set_budget(local);
    const auto report = lazy.reveal_hull({x}, r);
    lazy.set_budget(saved);
    if (report.status == RevealStatus::BudgetExhausted && lazy.budget_exhausted()) {
      cert = certify_distance(lazy.map(), x, window_line(lazy.map()));
      cert.revelation_cost = lazy.peel_count() - start;
      break;
    }
  }
  return cert;
}

DistanceCertificate distance_to_start(const WalkState& state) {
  return certify_distance(state.map(), state.position(), {state.start()});
}

ReturnCurve exact_return_curve(LazyHalfPlane& lazy, int n_max, bool parallel) {
  if (n_max < 0) throw std::invalid_argument("exact_return_curve: negative n");
  ReturnCurve curve;
  const VertexId root = lazy.map().root_vertex();
  const int radius = n_max / 2;
  const std::uint64_t before = lazy.peel_count();
  const auto hull = lazy.reveal_hull({root}, radius + 1);
  curve.peels = lazy.peel_count() - before;
  if (hull.status == RevealStatus::BudgetExhausted) {
    throw BudgetExceeded("exact_return_curve: hull of radius " + std::to_string(radius + 1) + " exceeds the budget");
  }
  const HalfEdgeMap& map = lazy.map();
  // A walk that leaves the ball of radius n_max/2 cannot be back by time n_max,
  // so mass stepping outside is discarded.
  const auto dist = bfs_distances(map, {root}, radius);
  std::vector<int> local(map.vertex_count(), -1);
  std::vector<VertexId> region;
  for (std::size_t v = 0; v < dist.size(); ++v) {
    if (dist[v] < 0) continue;
    local[v] = static_cast<int>(region.size());
    region.emplace_back(static_cast<std::int32_t>(v));
  }
  curve.region_vertices = region.size();
  SparseChain chain;
  std::vector<double> leaving;  // probability of stepping outside the region
  for (VertexId u : region) {
    const double p = 1.0 / map.degree(u);
    std::vector<std::pair<int, double>> row;
    map.for_each_outgoing(u, [&](HalfEdgeId h) {
      const int l = local[map.head(h).index()];
      if (l < 0) return;
      auto it = std::find_if(row.begin(), row.end(), [l](const auto& entry) { return entry.first == l; });
      if (it == row.end()) {
        row.emplace_back(l, p);
      } else {
        it->second += p;
      }
    });
    int outside = 0;
    map.for_each_outgoing(u, [&](HalfEdgeId h) { outside += local[map.head(h).index()] < 0 ? 1 : 0; });
    leaving.push_back(outside * p);
    chain.add_row(row);
  }
  const SparseChain transposed = parallel ? chain.transpose() : SparseChain{};
  std::vector<double> mass(region.size(), 0.0);
  std::vector<double> next;
  const auto r0 = static_cast<std::size_t>(local[root.index()]);
  mass[r0] = 1.0;
  double discarded = 0.0;
  curve.probability.push_back(1.0);
  for (int t = 1; t <= n_max; ++t) {
    if (parallel) {
      propagate_parallel(transposed, mass, next);
    } else {
      propagate_serial(chain, mass, next);
    }
    double after_total = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) discarded += mass[k] * leaving[k];
    for (double m : next) after_total += m;
    mass.swap(next);
    curve.max_mass_defect = std::max(curve.max_mass_defect, std::abs(after_total + discarded - 1.0));
    curve.probability.push_back(mass[r0]);
  }
  return curve;
}

double return_probability_exact(double alpha, int n, std::uint64_t seed, Budget budget) {
  auto law = std::make_shared<const StepLaw>(make_step_law(alpha));
  LazyHalfPlane lazy(law, seed, 8, budget);
  return exact_return_curve(lazy, n).probability.back();
}

std::vector<McEstimate> return_probability_mc(double alpha, const std::vector<int>& n_list, std::uint64_t walks,
                                              std::uint64_t seed, Budget budget, std::uint64_t* dropped) {
  if (walks < 1) throw std::invalid_argument("return_probability_mc: walks must be at least 1");
  auto law = std::make_shared<const StepLaw>(make_step_law(alpha));
  int n_max = 0;
  for (int n : n_list) {
    if (n < 0) throw std::invalid_argument("return_probability_mc: negative n");
    n_max = std::max(n_max, n);
  }
  // hits[w * |n_list| + k]: walk w at the root at time n_list[k]; -1 if dropped.
  std::vector<signed char> hits(walks * n_list.size(), 0);
  std::vector<char> ok(walks, 1);
  const auto total = static_cast<std::int64_t>(walks);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t w = 0; w < total; ++w) {
    WalkState state(law, replica_seed(seed, "return-mc", static_cast<std::uint64_t>(w)), budget);
    std::vector<char> at_root(static_cast<std::size_t>(n_max) + 1, 0);
    at_root[0] = 1;
    for (int t = 1; t <= n_max; ++t) {
      if (state.step() == StepStatus::Paused) {
        ok[static_cast<std::size_t>(w)] = 0;
        break;
      }
      at_root[static_cast<std::size_t>(t)] = state.position() == state.start() ? 1 : 0;
    }
    for (std::size_t k = 0; k < n_list.size(); ++k) {
      hits[static_cast<std::size_t>(w) * n_list.size() + k] = at_root[static_cast<std::size_t>(n_list[k])];
    }
  }
  std::uint64_t used = 0;
  std::vector<McEstimate> out(n_list.size());
  for (std::size_t k = 0; k < n_list.size(); ++k) out[k].n = n_list[k];
  for (std::uint64_t w = 0; w < walks; ++w) {
    if (!ok[w]) continue;
    ++used;
    for (std::size_t k = 0; k < n_list.size(); ++k) out[k].hits += static_cast<std::uint64_t>(hits[w * n_list.size() + k]);
  }
  if (dropped != nullptr) *dropped = walks - used;
  for (auto& e : out) {
    e.walks = used;
    if (used == 0) continue;
    e.p = static_cast<double>(e.hits) / static_cast<double>(used);
    e.stderr_ = std::sqrt(e.p * (1.0 - e.p) / static_cast<double>(used));
  }
  return out;
}

}  // namespace hyperwalk
