#include "hyperwalk/trap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hyperwalk {

namespace {

int corner(int k, int j) { return 3 * k + ((j % 3) + 3) % 3; }

// Repeatedly applies `step` to a probability vector, renormalizing to keep the
// running log-scale; returns the final vector's `read` entry mass.
template <class Step, class Read>
ConfinementResult run_scaled(std::vector<double> mass, long t, Step&& step, Read&& read) {
  double log_scale = 0.0;
  std::vector<double> next(mass.size());
  for (long s = 0; s < t; ++s) {
    step(mass, next);
    mass.swap(next);
    double total = 0.0;
    for (double m : mass) total += m;
    if (total == 0.0) return ConfinementResult{0.0, -std::numeric_limits<double>::infinity(), false};
    if (total < 1e-200) {
      for (double& m : mass) m /= total;
      log_scale += std::log(total);
    }
  }
  const double value = read(mass);
  ConfinementResult result;
  result.log_probability = value > 0.0 ? std::log(value) + log_scale : -std::numeric_limits<double>::infinity();
  const double linear = std::exp(result.log_probability);
  result.probability = log_scale == 0.0 ? value : linear;
  result.underflow = value > 0.0 && result.probability == 0.0;
  return result;
}

}  // namespace

TrapGraph build_trap(int n) {
  if (n < 1) throw std::invalid_argument("build_trap: order must be at least 1");
  TrapGraph trap;
  trap.n = n;
  const int vertices = 3 * (n + 1);
  trap.graph = WeightedGraph(vertices);
  trap.level.resize(static_cast<std::size_t>(vertices));
  std::vector<double> x(static_cast<std::size_t>(vertices)), y(static_cast<std::size_t>(vertices));
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j < 3; ++j) {
      const auto v = static_cast<std::size_t>(corner(k, j));
      trap.level[v] = k;
      // each triangle sits inside the incircle of the previous one
      const double radius = std::pow(0.4, k);
      const double angle = 2.0 * std::numbers::pi * j / 3.0 + k * std::numbers::pi / 3.0;
      x[v] = radius * std::cos(angle);
      y[v] = radius * std::sin(angle);
    }
  }
  auto add_face = [&](int a, int b, int c) {
    const double area = (x[static_cast<std::size_t>(b)] - x[static_cast<std::size_t>(a)]) *
                            (y[static_cast<std::size_t>(c)] - y[static_cast<std::size_t>(a)]) -
                        (x[static_cast<std::size_t>(c)] - x[static_cast<std::size_t>(a)]) *
                            (y[static_cast<std::size_t>(b)] - y[static_cast<std::size_t>(a)]);
    trap.faces.push_back(area > 0.0 ? std::array<int, 3>{a, b, c} : std::array<int, 3>{a, c, b});
  };
  for (int k = 0; k <= n; ++k) {
    for (int j = 0; j < 3; ++j) trap.graph.add_edge(corner(k, j), corner(k, j + 1));
  }
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < 3; ++j) {
      trap.graph.add_edge(corner(k, j), corner(k + 1, j));
      trap.graph.add_edge(corner(k, j + 1), corner(k + 1, j));
      add_face(corner(k, j), corner(k, j + 1), corner(k + 1, j));
      add_face(corner(k + 1, j), corner(k, j + 1), corner(k + 1, j + 1));
    }
  }
  add_face(corner(n, 0), corner(n, 1), corner(n, 2));
  trap.entry = {corner(1, 0), corner(1, 1), corner(1, 2)};
  trap.outer = {corner(0, 0), corner(0, 1), corner(0, 2)};
  return trap;
}

HalfEdgeMap trap_map(const TrapGraph& trap) {
  return HalfEdgeMap::polygon_from_triangles(trap.graph.size(), trap.faces, trap.outer);
}

std::vector<std::array<int, 3>> trap_level_counts(const TrapGraph& trap) {
  std::vector<std::array<int, 3>> counts(static_cast<std::size_t>(trap.graph.size()), {0, 0, 0});
  for (int u = 0; u < trap.graph.size(); ++u) {
    for (const auto& [v, w] : trap.graph.neighbors(u)) {
      const int offset = trap.level[static_cast<std::size_t>(v)] - trap.level[static_cast<std::size_t>(u)];
      if (offset < -1 || offset > 1) throw std::logic_error("trap edge skips a level");
      counts[static_cast<std::size_t>(u)][static_cast<std::size_t>(offset + 1)] += static_cast<int>(w);
    }
  }
  return counts;
}

bool trap_lumpable(const TrapGraph& trap) {
  const auto counts = trap_level_counts(trap);
  for (int u = 0; u < trap.graph.size(); ++u) {
    const int k = trap.level[static_cast<std::size_t>(u)];
    if (k == 0 || k == trap.n) continue;
    const auto& c = counts[static_cast<std::size_t>(u)];
    if (c[0] != c[1] || c[1] != c[2]) return false;
  }
  return true;
}

ConfinementResult trap_confinement_dp(int n, long t) {
  if (t < 0) throw std::invalid_argument("trap_confinement_dp: negative time");
  const TrapGraph trap = build_trap(n);
  const auto size = static_cast<std::size_t>(trap.graph.size());
  std::vector<double> mass(size, 0.0);
  mass[static_cast<std::size_t>(trap.entry[0])] = 1.0;
  auto step = [&](const std::vector<double>& in, std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int u = 0; u < trap.graph.size(); ++u) {
      const double m = in[static_cast<std::size_t>(u)];
      if (m == 0.0) continue;
      const double wu = trap.graph.vertex_weight(u);
      for (const auto& [v, w] : trap.graph.neighbors(u)) {
        if (trap.level[static_cast<std::size_t>(v)] == 0) continue;  // killed
        out[static_cast<std::size_t>(v)] += m * w / wu;
      }
    }
  };
  auto read = [&](const std::vector<double>& m) {
    double total = 0.0;
    for (int v : trap.entry) total += m[static_cast<std::size_t>(v)];
    return total;
  };
  return run_scaled(std::move(mass), t, step, read);
}

ConfinementResult interval_confinement_dp(int n, long t) {
  if (n < 1) throw std::invalid_argument("interval_confinement_dp: n must be at least 1");
  if (t < 0) throw std::invalid_argument("interval_confinement_dp: negative time");
  std::vector<double> mass(static_cast<std::size_t>(n), 0.0);
  mass[0] = 1.0;
  auto step = [n](const std::vector<double>& in, std::vector<double>& out) {
    for (int k = 0; k < n; ++k) {
      double acc = in[static_cast<std::size_t>(k)];
      if (k > 0) acc += in[static_cast<std::size_t>(k - 1)];
      if (k + 1 < n) acc += in[static_cast<std::size_t>(k + 1)];
      out[static_cast<std::size_t>(k)] = acc / 3.0;
    }
  };
  auto read = [](const std::vector<double>& m) { return m[0]; };
  return run_scaled(std::move(mass), t, step, read);
}

BigRational interval_confinement_exact(int n, int t) {
  if (n < 1 || t < 0) throw std::invalid_argument("interval_confinement_exact: need n >= 1, t >= 0");
  std::vector<BigRational> mass(static_cast<std::size_t>(n), BigRational(0));
  mass[0] = 1;
  std::vector<BigRational> next(mass.size());
  const BigRational third(1, 3);
  for (int s = 0; s < t; ++s) {
    for (int k = 0; k < n; ++k) {
      BigRational acc = mass[static_cast<std::size_t>(k)];
      if (k > 0) acc += mass[static_cast<std::size_t>(k - 1)];
      if (k + 1 < n) acc += mass[static_cast<std::size_t>(k + 1)];
      next[static_cast<std::size_t>(k)] = acc * third;
    }
    mass.swap(next);
  }
  return mass[0];
}

}  // namespace hyperwalk
