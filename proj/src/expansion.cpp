#include "hyperwalk/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hyperwalk/kernels.hpp"

namespace hyperwalk {

namespace {

std::vector<int> non_sink_vertices(const WeightedGraph& g) {
  std::vector<int> out;
  for (int u = 0; u < g.size(); ++u) {
    if (!g.is_sink(u)) out.push_back(u);
  }
  return out;
}

double set_volume(const WeightedGraph& g, const std::vector<int>& set, Volume volume) {
  if (volume == Volume::Cardinality) return static_cast<double>(set.size());
  double total = 0.0;
  for (int u : set) total += g.vertex_weight(u);
  return total;
}

std::vector<int> mask_members(const std::vector<int>& vertices, std::uint64_t mask) {
  std::vector<int> out;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if ((mask >> k) & 1) out.push_back(vertices[k]);
  }
  return out;
}

// Connected components of the subgraph induced by `members`.
std::vector<std::vector<int>> components(const WeightedGraph& g, const std::vector<char>& members) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(members.size(), 0);
  for (int s = 0; s < g.size(); ++s) {
    if (!members[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
    std::vector<int> comp{s};
    seen[static_cast<std::size_t>(s)] = 1;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      for (const auto& [v, w] : g.neighbors(comp[head])) {
        const auto vi = static_cast<std::size_t>(v);
        if (!members[vi] || seen[vi]) continue;
        seen[vi] = 1;
        comp.push_back(v);
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool strictly_greater(double a, double b) { return a > b + 1e-9 * (1.0 + std::abs(a) + std::abs(b)); }

}  // namespace

double boundary_weight(const WeightedGraph& g, const std::vector<int>& set) {
  std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
  for (int u : set) in[static_cast<std::size_t>(u)] = 1;
  double cut = 0.0;
  for (int u : set) {
    for (const auto& [v, w] : g.neighbors(u)) {
      if (!in[static_cast<std::size_t>(v)]) cut += w;
    }
  }
  return cut;
}

double isolation(const WeightedGraph& g, const std::vector<int>& set, double i, Volume volume) {
  if (set.empty()) throw GraphError("isolation: empty set");
  return i * set_volume(g, set, volume) - boundary_weight(g, set);
}

bool is_core(const WeightedGraph& g, const std::vector<int>& set, double i, Volume volume) {
  if (set.empty()) return false;
  const auto table = subset_table_serial(g, set);
  const std::size_t full = table.volume.size() - 1;
  auto delta = [&](std::size_t mask) {
    const double vol = volume == Volume::Cardinality ? __builtin_popcountll(mask) : table.volume[mask];
    return mask == 0 ? 0.0 : i * vol - table.boundary[mask];
  };
  const double top = delta(full);
  for (std::size_t mask = 0; mask < full; ++mask) {
    if (!strictly_greater(top, delta(mask))) return false;
  }
  return true;
}

IsolationReport enumerate_cores(const WeightedGraph& g, double i, int size_cap, Volume volume) {
  const auto cands = non_sink_vertices(g);
  if (cands.size() > static_cast<std::size_t>(kMaxCoreCandidates)) {
    throw GraphError("enumerate_cores: more than " + std::to_string(kMaxCoreCandidates) + " candidate vertices");
  }
  IsolationReport report;
  report.i = i;
  report.partial = cands.size() > static_cast<std::size_t>(size_cap);
  const auto table = subset_table_parallel(g, cands);
  const std::size_t count = table.volume.size();
  std::vector<double> best(count, 0.0);  // max of Delta over all submasks, empty set included
  std::uint64_t union_mask = 0;
  for (std::size_t mask = 1; mask < count; ++mask) {
    const int size = __builtin_popcountll(mask);
    const double vol = volume == Volume::Cardinality ? size : table.volume[mask];
    const double delta = i * vol - table.boundary[mask];
    double proper = 0.0;
    for (std::size_t r = mask; r != 0; r &= r - 1) {
      proper = std::max(proper, best[mask & ~(r & (~r + 1))]);
    }
    best[mask] = std::max(delta, proper);
    if (size <= size_cap && strictly_greater(delta, proper)) {
      report.sets.push_back(CoreSet{mask_members(cands, mask), delta, true});
      union_mask |= mask;
    }
  }
  report.union_set = mask_members(cands, union_mask);
  std::vector<char> in_union(static_cast<std::size_t>(g.size()), 0);
  for (int u : report.union_set) in_union[static_cast<std::size_t>(u)] = 1;
  std::vector<char> in_ocean(in_union.size());
  for (std::size_t u = 0; u < in_union.size(); ++u) in_ocean[u] = in_union[u] ? 0 : 1;
  report.islands = components(g, in_union);
  report.oceans = components(g, in_ocean);
  return report;
}

OceanChain ocean_chain(const WeightedGraph& g, double i, int size_cap) {
  OceanChain out;
  out.report = enumerate_cores(g, i, size_cap);
  std::vector<int> ocean_index(static_cast<std::size_t>(g.size()), -1);
  std::vector<char> in_union(static_cast<std::size_t>(g.size()), 0);
  for (int u : out.report.union_set) in_union[static_cast<std::size_t>(u)] = 1;
  for (int u = 0; u < g.size(); ++u) {
    if (in_union[static_cast<std::size_t>(u)]) continue;
    ocean_index[static_cast<std::size_t>(u)] = static_cast<int>(out.ocean.size());
    out.ocean.push_back(u);
  }
  const auto n_ocean = static_cast<Eigen::Index>(out.ocean.size());
  out.weights = Eigen::MatrixXd::Zero(n_ocean, n_ocean);
  for (Eigen::Index a = 0; a < n_ocean; ++a) {
    const int u = out.ocean[static_cast<std::size_t>(a)];
    out.weights(a, a) += g.loop_weight(u);
    for (const auto& [v, w] : g.neighbors(u)) {
      const int b = ocean_index[static_cast<std::size_t>(v)];
      if (b >= 0) out.weights(a, b) += w;
    }
  }
  for (const auto& island : out.report.islands) {
    // Absorption probabilities from the island into the ocean: (I - P_BB) H = P_BO.
    const auto nb = static_cast<Eigen::Index>(island.size());
    std::vector<int> local(static_cast<std::size_t>(g.size()), -1);
    for (Eigen::Index k = 0; k < nb; ++k) local[static_cast<std::size_t>(island[static_cast<std::size_t>(k)])] = static_cast<int>(k);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(nb, nb);
    Eigen::MatrixXd exits = Eigen::MatrixXd::Zero(nb, n_ocean);
    for (Eigen::Index k = 0; k < nb; ++k) {
      const int b = island[static_cast<std::size_t>(k)];
      const double wb = g.vertex_weight(b);
      system(k, k) -= g.loop_weight(b) / wb;
      for (const auto& [v, w] : g.neighbors(b)) {
        const int l = local[static_cast<std::size_t>(v)];
        if (l >= 0) {
          system(k, l) -= w / wb;
        } else {
          exits(k, ocean_index[static_cast<std::size_t>(v)]) += w / wb;
        }
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    if (!lu.isInvertible()) throw GraphError("ocean_chain: singular absorption system (island without exit)");
    const Eigen::MatrixXd hit = lu.solve(exits);
    for (Eigen::Index a = 0; a < n_ocean; ++a) {
      const int u = out.ocean[static_cast<std::size_t>(a)];
      for (const auto& [v, w] : g.neighbors(u)) {
        const int l = local[static_cast<std::size_t>(v)];
        if (l >= 0) out.weights.row(a) += w * hit.row(l);
      }
    }
  }
  out.graph = WeightedGraph(static_cast<int>(n_ocean));
  for (Eigen::Index a = 0; a < n_ocean; ++a) {
    const int u = out.ocean[static_cast<std::size_t>(a)];
    if (g.is_sink(u)) out.graph.set_sink(static_cast<int>(a));
    if (g.root && *g.root == u) out.graph.root = static_cast<int>(a);
    for (Eigen::Index b = a; b < n_ocean; ++b) {
      const double w = b == a ? out.weights(a, a) : 0.5 * (out.weights(a, b) + out.weights(b, a));
      if (w > 0.0) out.graph.add_edge(static_cast<int>(a), static_cast<int>(b), w);
    }
  }
  return out;
}

CheegerResult cheeger_bruteforce(const WeightedGraph& g, Volume volume) {
  const auto cands = non_sink_vertices(g);
  if (cands.size() > static_cast<std::size_t>(kMaxCoreCandidates)) {
    throw GraphError("cheeger_bruteforce: more than " + std::to_string(kMaxCoreCandidates) + " candidate vertices");
  }
  const auto table = subset_table_parallel(g, cands);
  CheegerResult result;
  std::size_t arg = 0;
  for (std::size_t mask = 1; mask < table.volume.size(); ++mask) {
    const double vol = volume == Volume::Cardinality ? __builtin_popcountll(mask) : table.volume[mask];
    if (vol <= 0.0) continue;
    const double ratio = table.boundary[mask] / vol;
    if (ratio < result.value) {
      result.value = ratio;
      arg = mask;
    }
  }
  result.set = mask_members(cands, arg);
  return result;
}

SpectralReport spectral_bound_check(const WeightedGraph& g, double i, int n_max, double tol) {
  SpectralReport report;
  report.cheeger = i >= 0.0 ? i : cheeger_bruteforce(g).value;
  report.bound = 1.0 - report.cheeger * report.cheeger / 2.0;
  std::vector<int> live;
  for (int u : non_sink_vertices(g)) {
    if (g.vertex_weight(u) > 0.0) live.push_back(u);
  }
  const auto d = static_cast<Eigen::Index>(live.size());
  std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
  for (Eigen::Index k = 0; k < d; ++k) pos[static_cast<std::size_t>(live[static_cast<std::size_t>(k)])] = static_cast<int>(k);
  // Killed chain P_D is self-adjoint in l2(w); S = W^{1/2} P_D W^{-1/2} is symmetric with the same norm.
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd chain = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const int u = live[static_cast<std::size_t>(a)];
    const double wu = g.vertex_weight(u);
    sym(a, a) = g.loop_weight(u) / wu;
    chain(a, a) = g.loop_weight(u) / wu;
    for (const auto& [v, w] : g.neighbors(u)) {
      const int b = pos[static_cast<std::size_t>(v)];
      if (b < 0) continue;
      sym(a, b) = w / std::sqrt(wu * g.vertex_weight(v));
      chain(a, b) = w / wu;
    }
  }
  if (d > 0) {
    Eigen::VectorXd x(d);
    for (Eigen::Index a = 0; a < d; ++a) x(a) = std::sqrt(g.vertex_weight(live[static_cast<std::size_t>(a)]));
    x.normalize();
    double estimate = 0.0;
    const int max_iterations = 2'000'000;
    for (int it = 1; it <= max_iterations; ++it) {
      const Eigen::VectorXd z = sym * (sym * x);
      const double rayleigh = x.dot(z);  // tends to ||S||^2
      const double norm_z = z.norm();
      report.iterations = it;
      if (norm_z == 0.0) {
        estimate = 0.0;
        break;
      }
      x = z / norm_z;
      const double next = std::sqrt(std::max(rayleigh, 0.0));
      const bool done = it > 1 && std::abs(next - estimate) < tol * 1e-3 && std::abs(std::sqrt(norm_z) - next) < tol;
      estimate = next;
      if (done) break;
    }
    report.norm = estimate;
  }
  report.holds = report.norm <= report.bound + 1e-12;

  report.root = g.root && !g.is_sink(*g.root) ? *g.root : (live.empty() ? -1 : live.front());
  report.returns_hold = true;
  if (report.root >= 0 && pos[static_cast<std::size_t>(report.root)] >= 0) {
    Eigen::RowVectorXd mass = Eigen::RowVectorXd::Zero(d);
    const auto r = pos[static_cast<std::size_t>(report.root)];
    mass(r) = 1.0;
    double power = 1.0;
    for (int t = 0; t <= n_max; ++t) {
      report.return_probability.push_back(mass(r));
      report.return_bound.push_back(power);
      if (mass(r) > power + 1e-12) report.returns_hold = false;
      mass = mass * chain;
      power *= report.bound;
    }
  }
  return report;
}

std::vector<double> n_step_distribution(const WeightedGraph& g, int x, int n) {
  SparseChain chain;
  for (int u = 0; u < g.size(); ++u) {
    const double wu = g.vertex_weight(u);
    std::vector<std::pair<int, double>> row;
    if (wu > 0.0) {
      if (g.loop_weight(u) > 0.0) row.emplace_back(u, g.loop_weight(u) / wu);
      for (const auto& [v, w] : g.neighbors(u)) row.emplace_back(v, w / wu);
    } else {
      row.emplace_back(u, 1.0);
    }
    chain.add_row(row);
  }
  std::vector<double> dist(static_cast<std::size_t>(g.size()), 0.0);
  dist.at(static_cast<std::size_t>(x)) = 1.0;
  std::vector<double> next;
  for (int t = 0; t < n; ++t) {
    propagate_serial(chain, dist, next);
    dist.swap(next);
  }
  return dist;
}

CarneVaropoulosReport carne_varopoulos_check(const WeightedGraph& g, int x, int n) {
  if (n < 1) throw GraphError("carne_varopoulos_check: n must be at least 1");
  CarneVaropoulosReport report;
  report.x = x;
  report.n = n;
  const auto law = n_step_distribution(g, x, n);
  report.distance = g.distances(x);
  const double wx = g.vertex_weight(x);
  report.slack.assign(law.size(), 0.0);
  for (std::size_t y = 0; y < law.size(); ++y) {
    const int dxy = report.distance[y];
    if (dxy < 0 || law[y] == 0.0) continue;
    const double bound = 2.0 * std::sqrt(g.vertex_weight(static_cast<int>(y)) / wx) *
                         std::exp(-static_cast<double>(dxy) * dxy / (2.0 * n));
    report.slack[y] = bound > 0.0 ? law[y] / bound : std::numeric_limits<double>::infinity();
  }
  report.max_slack = *std::max_element(report.slack.begin(), report.slack.end());
  report.holds = report.max_slack <= 1.0 + 1e-12;
  return report;
}

HittingReport hitting_tail_check(const WeightedGraph& g, const std::vector<int>& target, int m) {
  if (target.empty()) throw GraphError("hitting_tail_check: empty target set");
  if (m < 1) throw GraphError("hitting_tail_check: m must be at least 1");
  HittingReport report;
  report.edges = g.edge_count();
  report.m = m;
  report.horizon = 4LL * m * report.edges * report.edges;
  report.bound = std::ldexp(1.0, -m);
  const auto n = static_cast<std::size_t>(g.size());
  std::vector<char> in_target(n, 0);
  for (int s : target) in_target.at(static_cast<std::size_t>(s)) = 1;
  // survival[x] = P_x(tau_S > t), advanced by one step of the chain.
  std::vector<double> survival(n), next(n);
  for (std::size_t x = 0; x < n; ++x) survival[x] = in_target[x] ? 0.0 : 1.0;
  for (std::int64_t t = 0; t < report.horizon; ++t) {
    for (std::size_t x = 0; x < n; ++x) {
      if (in_target[x]) {
        next[x] = 0.0;
        continue;
      }
      const int u = static_cast<int>(x);
      const double wu = g.vertex_weight(u);
      double acc = g.loop_weight(u) / wu * survival[x];
      for (const auto& [v, w] : g.neighbors(u)) acc += w / wu * survival[static_cast<std::size_t>(v)];
      next[x] = acc;
    }
    survival.swap(next);
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (report.worst_start < 0 || survival[x] > report.max_survival) {
      report.max_survival = survival[x];
      report.worst_start = static_cast<int>(x);
    }
  }
  report.holds = report.max_survival <= report.bound;
  return report;
}

PathDegreeReport path_degree_scan(const HalfEdgeMap& map, int length, std::uint64_t cap) {
  if (length < 0) throw std::invalid_argument("path_degree_scan: negative length");
  PathDegreeReport report;
  report.length = length;
  const VertexId root = map.root_vertex();
  std::vector<char> on_path(map.vertex_count(), 0);
  std::vector<VertexId> path{root};
  on_path[root.index()] = 1;
  long degree_sum = map.degree(root);
  double total = 0.0;
  auto neighbors = [&](VertexId v) {
    std::vector<VertexId> out;
    map.for_each_outgoing(v, [&](HalfEdgeId h) {
      const VertexId w = map.head(h);
      if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    });
    return out;
  };
  std::function<void()> extend = [&]() {
    if (report.capped) return;
    if (static_cast<int>(path.size()) == length + 1) {
      const double avg = static_cast<double>(degree_sum) / (length + 1);
      report.averages.push_back(avg);
      report.max_average = std::max(report.max_average, avg);
      report.max_degree_sum = std::max(report.max_degree_sum, static_cast<int>(degree_sum));
      total += avg;
      if (++report.paths >= cap) report.capped = true;
      return;
    }
    for (VertexId w : neighbors(path.back())) {
      if (on_path[w.index()] || map.on_line(w)) continue;
      if (map.on_frontier(w)) report.touched_frontier = true;
      on_path[w.index()] = 1;
      path.push_back(w);
      degree_sum += map.degree(w);
      extend();
      degree_sum -= map.degree(w);
      path.pop_back();
      on_path[w.index()] = 0;
      if (report.capped) return;
    }
  };
  extend();
  report.mean_average = report.paths > 0 ? total / static_cast<double>(report.paths) : 0.0;
  return report;
}

MapIslandReport revealed_islands(const HalfEdgeMap& map, int r, double i, int size_cap) {
  MapIslandReport out;
  const auto dist = bfs_distances(map, {map.root_vertex()}, r);
  std::vector<int> local(map.vertex_count(), -1);
  for (std::size_t v = 0; v < dist.size(); ++v) {
    const VertexId id(static_cast<std::int32_t>(v));
    if (dist[v] < 0 || map.on_frontier(id)) continue;
    local[v] = static_cast<int>(out.ball.size());
    out.ball.push_back(id);
  }
  const int sink = static_cast<int>(out.ball.size());
  WeightedGraph g(sink + 1);
  g.set_sink(sink);
  for (std::size_t k = 0; k < out.ball.size(); ++k) {
    map.for_each_outgoing(out.ball[k], [&](HalfEdgeId h) {
      const int l = local[map.head(h).index()];
      if (l < 0) {
        g.add_edge(static_cast<int>(k), sink);
      } else if (static_cast<int>(k) < l) {
        g.add_edge(static_cast<int>(k), l);
      }
    });
  }
  if (local[map.root_vertex().index()] >= 0) g.root = local[map.root_vertex().index()];
  out.report = enumerate_cores(g, i, size_cap);
  return out;
}

}  // namespace hyperwalk
