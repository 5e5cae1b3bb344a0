#include "hyperwalk/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace hyperwalk {

int WeightedGraph::add_vertex() {
  adj_.emplace_back();
  loop_.push_back(0.0);
  sink_.push_back(0);
  return size() - 1;
}

void WeightedGraph::add_edge(int u, int v, double w) {
  if (!(w > 0.0)) throw GraphError("edge weights must be positive");
  if (u == v) {
    loop_[idx(u)] += w;
    return;
  }
  auto bump = [w](std::vector<std::pair<int, double>>& list, int target) {
    for (auto& [x, weight] : list) {
      if (x == target) {
        weight += w;
        return;
      }
    }
    list.emplace_back(target, w);
  };
  bump(adj_[idx(u)], v);
  bump(adj_[idx(v)], u);
}

double WeightedGraph::edge_weight(int u, int v) const {
  if (u == v) return loop_weight(u);
  for (const auto& [x, w] : adj_[idx(u)]) {
    if (x == v) return w;
  }
  return 0.0;
}

double WeightedGraph::vertex_weight(int u) const {
  double total = loop_[idx(u)];
  for (const auto& [x, w] : adj_[idx(u)]) total += w;
  return total;
}

int WeightedGraph::edge_count() const {
  std::size_t ends = 0;
  for (const auto& list : adj_) ends += list.size();
  return static_cast<int>(ends / 2);
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (int u = 0; u < size(); ++u) total += vertex_weight(u);
  return total;
}

bool WeightedGraph::has_sinks() const { return std::any_of(sink_.begin(), sink_.end(), [](char c) { return c != 0; }); }

std::vector<int> WeightedGraph::distances(int x) const {
  std::vector<int> dist(adj_.size(), -1);
  std::vector<int> queue{x};
  dist[idx(x)] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (const auto& [v, w] : adj_[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] >= 0) continue;
      dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

bool WeightedGraph::connected() const {
  if (adj_.empty()) return true;
  const auto dist = distances(0);
  return std::all_of(dist.begin(), dist.end(), [](int d) { return d >= 0; });
}

WeightedGraph graph_from_map(const HalfEdgeMap& map, std::vector<VertexId>* vertex_of) {
  WeightedGraph g(static_cast<int>(map.vertex_count()));
  for (std::size_t h = 0; h < map.half_edge_slots(); ++h) {
    const HalfEdgeId id(static_cast<std::int32_t>(h));
    const auto& e = map.half_edge(id);
    if (!e.alive || e.twin.index() < h) continue;
    g.add_edge(e.origin.value, map.head(id).value, 1.0);
  }
  g.root = map.root_vertex().value;
  if (vertex_of != nullptr) {
    vertex_of->clear();
    for (std::size_t v = 0; v < map.vertex_count(); ++v) vertex_of->emplace_back(static_cast<std::int32_t>(v));
  }
  return g;
}

WeightedGraph read_edge_list(std::istream& in) {
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  std::vector<int> sinks;
  std::optional<int> root;
  int max_id = -1;
  int declared = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    auto fail = [&](const std::string& what) {
      throw GraphError("edge list line " + std::to_string(line_no) + ": " + what);
    };
    auto parse_id = [&](const std::string& text) {
      std::size_t used = 0;
      int id = -1;
      try {
        id = std::stoi(text, &used);
      } catch (const std::exception&) {
        fail("bad vertex id '" + text + "'");
      }
      if (used != text.size() || id < 0) fail("bad vertex id '" + text + "'");
      return id;
    };
    if (first == "vertices") {
      std::string arg;
      if (!(fields >> arg)) fail("missing vertex count");
      declared = std::max(declared, parse_id(arg));
      max_id = std::max(max_id, declared - 1);
      continue;
    }
    if (first == "sink" || first == "root") {
      std::string arg;
      if (!(fields >> arg)) fail("missing vertex id");
      const int id = parse_id(arg);
      max_id = std::max(max_id, id);
      if (first == "sink") {
        sinks.push_back(id);
      } else {
        root = id;
      }
      continue;
    }
    std::string second;
    if (!(fields >> second)) fail("expected 'u v [weight]'");
    Edge e{parse_id(first), parse_id(second), 1.0};
    max_id = std::max({max_id, e.u, e.v});
    std::string weight;
    if (fields >> weight) {
      try {
        e.w = std::stod(weight);
      } catch (const std::exception&) {
        fail("bad weight '" + weight + "'");
      }
      if (!(e.w > 0.0)) fail("weight must be positive");
    }
    std::string extra;
    if (fields >> extra) fail("trailing fields");
    edges.push_back(e);
  }
  WeightedGraph g(max_id + 1);
  for (const auto& e : edges) g.add_edge(e.u, e.v, e.w);
  for (int s : sinks) g.set_sink(s);
  g.root = root;
  return g;
}

void write_edge_list(const WeightedGraph& g, std::ostream& out) {
  out.precision(17);
  out << "vertices " << g.size() << '\n';
  if (g.root) out << "root " << *g.root << '\n';
  for (int u = 0; u < g.size(); ++u) {
    if (g.is_sink(u)) out << "sink " << u << '\n';
  }
  for (int u = 0; u < g.size(); ++u) {
    if (g.loop_weight(u) > 0.0) out << u << ' ' << u << ' ' << g.loop_weight(u) << '\n';
    for (const auto& [v, w] : g.neighbors(u)) {
      if (u < v) out << u << ' ' << v << ' ' << w << '\n';
    }
  }
}

WeightedGraph random_graph(Rng& rng, int vertices, int max_weight, bool sink) {
  if (vertices < 2 || max_weight < 1) throw GraphError("random_graph: need at least 2 vertices and weight >= 1");
  WeightedGraph g(vertices);
  auto weight = [&] { return 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(max_weight))); };
  for (int v = 1; v < vertices; ++v) g.add_edge(v, static_cast<int>(rng.below(static_cast<std::uint64_t>(v))), weight());
  const auto extra = rng.below(static_cast<std::uint64_t>(vertices) + 1);
  for (std::uint64_t k = 0; k < extra; ++k) {
    const auto a = static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices)));
    const auto b = static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices)));
    if (a != b) g.add_edge(a, b, weight());
  }
  g.root = 0;
  if (sink) g.set_sink(vertices - 1);
  return g;
}

}  // namespace hyperwalk
