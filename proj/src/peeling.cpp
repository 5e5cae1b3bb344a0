#include "hyperwalk/peeling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

namespace hyperwalk {

namespace {

constexpr int kHardIndexCap = 200000;

}  // namespace

double StepLaw::normalization_error() const {
  long double sum = alpha;
  for (double v : p) sum += 2.0L * v;
  return static_cast<double>(sum - 1.0L);
}

StepLaw make_step_law(double alpha, double tail_tol, bool exploratory) {
  if (!(tail_tol > 0.0)) throw std::domain_error("make_step_law: tail_tol must be positive");
  const bool hyperbolic = alpha > 2.0 / 3.0 && alpha < 1.0;
  if (!hyperbolic) {
    if (!exploratory || !(alpha > 0.0 && alpha < 1.0)) {
      throw std::domain_error("make_step_law: alpha = " + std::to_string(alpha) + " outside (2/3, 1)");
    }
    std::cerr << "warning: alpha <= 2/3, the step law has no exponential tail and truncation is unsound\n";
  }
  StepLaw law;
  law.alpha = alpha;
  law.beta = alpha * (1.0 - alpha) / 2.0;
  law.q = alpha * law.beta;
  law.tolerance = tail_tol;
  const double theta = solve_theta(std::min(law.q, kCriticalQ));
  const double log_beta = std::log(law.beta);

  // Generate terms until they are far below the tolerance, then cut at the
  // smallest index whose two-sided tail is within it.
  std::vector<double> terms;
  double tail_floor = tail_tol * 1e-6;
  for (int i = 1;; ++i) {
    if (i > kHardIndexCap) throw std::runtime_error("make_step_law: I_max exceeds the hard cap; tail_tol too small");
    const double term = std::exp(i * log_beta + log_partition_Z_theta(i + 1, theta));
    terms.push_back(term);
    if (i > 4 && term < tail_floor && term < terms[terms.size() - 2]) break;
  }
  std::vector<long double> tail(terms.size() + 1, 0.0L);
  for (std::size_t k = terms.size(); k-- > 0;) tail[k] = tail[k + 1] + 2.0L * terms[k];
  // tail[k] = 2 sum_{i > k} p_i (p_i stored at index i-1).
  std::size_t cut = 0;
  while (cut < terms.size() && tail[cut] > tail_tol) ++cut;
  if (cut == 0) cut = 1;
  law.i_max = static_cast<int>(cut);
  law.p.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(cut));
  law.tail_mass = static_cast<double>(tail[cut]);
  law.cumulative.resize(cut + 1);
  long double acc = alpha;
  law.cumulative[0] = alpha;
  for (std::size_t k = 0; k < cut; ++k) {
    acc += 2.0L * law.p[k];
    law.cumulative[k + 1] = static_cast<double>(acc);
  }
  return law;
}

double event_probability(int internal_vertices, int faces, double alpha) {
  const double beta = alpha * (1.0 - alpha) / 2.0;
  return std::pow(alpha, internal_vertices) * std::pow(beta, faces - internal_vertices);
}

StepDraw sample_step(const StepLaw& law, Rng& rng, std::uint64_t* overflows) {
  for (;;) {
    const double u = rng.uniform();
    if (u < law.alpha) return StepDraw{PeelKind::Alpha, Side::Right, 0};
    const auto it = std::upper_bound(law.cumulative.begin(), law.cumulative.end(), u);
    if (it == law.cumulative.end()) {
      if (overflows != nullptr) ++*overflows;
      continue;
    }
    const int i = static_cast<int>(it - law.cumulative.begin());
    const Side side = rng.coin() ? Side::Left : Side::Right;
    return StepDraw{PeelKind::Connect, side, i};
  }
}

PeelPolicy walk_policy(VertexId v) {
  return [v](LazyHalfPlane& lazy) -> std::optional<HalfEdgeId> {
    if (!lazy.map().on_frontier(v)) return std::nullopt;
    lazy.ensure_not_window_end(v);
    return lazy.map().frontier_edge_from(v);
  };
}

PeelPolicy fixed_root_policy() {
  return [done = false](LazyHalfPlane& lazy) mutable -> std::optional<HalfEdgeId> {
    if (done || !lazy.map().is_frontier(lazy.map().root())) return std::nullopt;
    done = true;
    return lazy.map().root();
  };
}

LazyHalfPlane::LazyHalfPlane(std::shared_ptr<const StepLaw> law, std::uint64_t seed, int initial_width, Budget budget)
    : law_(std::move(law)),
      map_(HalfEdgeMap::half_plane_segment(initial_width)),
      sampler_(law_->q),
      rng_(seed),
      budget_(budget) {}

bool LazyHalfPlane::budget_exhausted() const {
  return peel_count_ >= budget_.max_peels || map_.vertex_count() >= budget_.max_vertices;
}

void LazyHalfPlane::ensure_not_window_end(VertexId v) {
  if (!map_.on_line(v)) return;
  const auto width = static_cast<int>(map_.window_right() - map_.window_left());
  if (map_.line_index(v) == map_.window_right()) {
    map_.extend_right(width);
    ++extensions_;
  }
  if (map_.line_index(v) == map_.window_left()) {
    map_.extend_left(width);
    ++extensions_;
  }
}

void LazyHalfPlane::ensure_room(HalfEdgeId e, Side side, int i) {
  int available = 0;
  HalfEdgeId x = e;
  for (; available < i; ++available) {
    x = side == Side::Right ? map_.next(x) : map_.prev(x);
    if (!map_.is_frontier(x)) break;
  }
  if (available >= i) return;
  const auto width = static_cast<int>(map_.window_right() - map_.window_left());
  const int grow = std::max(i - available, width);
  if (side == Side::Right) {
    map_.extend_right(grow);
  } else {
    map_.extend_left(grow);
  }
  ++extensions_;
}

PeelEvent LazyHalfPlane::peel_edge(HalfEdgeId e) {
  if (!map_.is_frontier(e)) throw MapError("peel_edge: edge is not on the frontier");
  return apply_step(e, sample_step(*law_, rng_, &overflows_));
}

PeelEvent LazyHalfPlane::apply_step(HalfEdgeId e, const StepDraw& draw) {
  if (!map_.is_frontier(e)) throw MapError("peel_edge: edge is not on the frontier");
  PeelEvent event;
  event.kind = draw.kind;
  event.side = draw.side;
  event.i = draw.i;
  if (draw.kind == PeelKind::Alpha) {
    map_.attach_alpha_triangle(e);
    event.edges_added = 2;
  } else {
    ensure_room(e, draw.side, draw.i);
    const std::size_t edges_before = map_.edge_count();
    const std::size_t faces_before = map_.face_count();
    const PolygonHandle hole = map_.attach_connect_triangle(e, draw.side, draw.i);
    const int created = sampler_.fill_hole(map_, hole.start, hole.perimeter, rng_);
    event.fill = FreeSampleStats{created, static_cast<int>(map_.face_count() - faces_before) - 1, hole.perimeter};
    event.edges_added = static_cast<int>(map_.edge_count() - edges_before);
  }
  ++peel_count_;
  if (record_) events_.push_back(event);
  return event;
}

RevealStatus LazyHalfPlane::run(const PeelPolicy& policy) {
  for (;;) {
    const auto e = policy(*this);
    if (!e) return RevealStatus::Complete;
    if (budget_exhausted()) return RevealStatus::BudgetExhausted;
    peel_edge(*e);
  }
}

RevealStatus LazyHalfPlane::reveal_walk_neighborhood(VertexId v) { return run(walk_policy(v)); }

HullReport LazyHalfPlane::reveal_hull(const std::vector<VertexId>& centers, int r) {
  if (r < 0) throw std::invalid_argument("reveal_hull: negative radius");
  HullReport report;
  report.r = r;
  const std::uint64_t start = peel_count_;
  report.exact_radius = r;
  // Layer k: vertices at distance k become interior. Peeling only attaches to
  // frontier vertices, so no frontier vertex ever drops below the current layer.
  for (int k = 0; k < r && report.status == RevealStatus::Complete; ++k) {
    const auto dist = bfs_distances(map_, centers, k);
    std::vector<VertexId> layer;
    for (std::size_t v = 0; v < dist.size(); ++v) {
      const VertexId id(static_cast<std::int32_t>(v));
      if (dist[v] == k && map_.on_frontier(id)) layer.push_back(id);
    }
    for (VertexId v : layer) {
      if (run(walk_policy(v)) == RevealStatus::BudgetExhausted) {
        report.status = RevealStatus::BudgetExhausted;
        report.exact_radius = k;
        break;
      }
    }
  }
  report.peels = peel_count_ - start;
  measure_hull(map_, centers, r, report);
  return report;
}

void measure_hull(const HalfEdgeMap& map, const std::vector<VertexId>& centers, int r, HullReport& report) {
  const auto dist = bfs_distances(map, centers);
  const std::size_t n = map.vertex_count();
  report.ball_sizes.assign(static_cast<std::size_t>(r) + 1, 0);
  report.hull_sizes.assign(static_cast<std::size_t>(r) + 1, 0);
  report.hull_edges.assign(static_cast<std::size_t>(r) + 1, 0);
  for (int k = 0; k <= r; ++k) {
    std::size_t ball = 0;
    // Everything reachable from a frontier vertex outside the ball without
    // entering the ball belongs to the unbounded side.
    std::vector<char> outside(n, 0);
    std::vector<VertexId> stack;
    for (std::size_t v = 0; v < n; ++v) {
      const bool in_ball = dist[v] >= 0 && dist[v] <= k;
      if (in_ball) ++ball;
      const VertexId id(static_cast<std::int32_t>(v));
      if (!in_ball && map.on_frontier(id)) {
        outside[v] = 1;
        stack.push_back(id);
      }
    }
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      map.for_each_outgoing(u, [&](HalfEdgeId h) {
        const VertexId w = map.head(h);
        const int dw = dist[w.index()];
        if (outside[w.index()] || (dw >= 0 && dw <= k)) return;
        outside[w.index()] = 1;
        stack.push_back(w);
      });
    }
    std::size_t hull = 0;
    for (std::size_t v = 0; v < n; ++v) hull += outside[v] ? 0 : 1;
    std::size_t half_edges = 0;
    for (std::size_t h = 0; h < map.half_edge_slots(); ++h) {
      const auto& e = map.half_edge(HalfEdgeId(static_cast<std::int32_t>(h)));
      if (!e.alive) continue;
      if (!outside[e.origin.index()] && !outside[map.half_edge(e.twin).origin.index()]) ++half_edges;
    }
    const auto idx = static_cast<std::size_t>(k);
    report.ball_sizes[idx] = ball;
    report.hull_sizes[idx] = hull;
    report.hull_edges[idx] = half_edges / 2;
  }
}

}  // namespace hyperwalk
