#include "hyperwalk/kernels.hpp"

#include <omp.h>

#include <algorithm>

namespace hyperwalk {

void SparseChain::add_row(const std::vector<std::pair<int, double>>& row) {
  for (const auto& [t, p] : row) {
    targets.push_back(t);
    probs.push_back(p);
  }
  offsets.push_back(static_cast<std::int64_t>(targets.size()));
  ++n;
}

SparseChain SparseChain::transpose() const {
  SparseChain t;
  t.n = n;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  for (int target : targets) ++counts[static_cast<std::size_t>(target) + 1];
  for (std::size_t k = 1; k < counts.size(); ++k) counts[k] += counts[k - 1];
  t.offsets = counts;
  t.targets.resize(targets.size());
  t.probs.resize(probs.size());
  auto fill = counts;
  for (int u = 0; u < n; ++u) {
    for (auto k = offsets[static_cast<std::size_t>(u)]; k < offsets[static_cast<std::size_t>(u) + 1]; ++k) {
      const auto slot = static_cast<std::size_t>(fill[static_cast<std::size_t>(targets[static_cast<std::size_t>(k)])]++);
      t.targets[slot] = u;
      t.probs[slot] = probs[static_cast<std::size_t>(k)];
    }
  }
  return t;
}

void propagate_serial(const SparseChain& chain, const std::vector<double>& in, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(chain.n), 0.0);
  for (int u = 0; u < chain.n; ++u) {
    const double mass = in[static_cast<std::size_t>(u)];
    if (mass == 0.0) continue;
    for (auto k = chain.offsets[static_cast<std::size_t>(u)]; k < chain.offsets[static_cast<std::size_t>(u) + 1]; ++k) {
      out[static_cast<std::size_t>(chain.targets[static_cast<std::size_t>(k)])] += mass * chain.probs[static_cast<std::size_t>(k)];
    }
  }
}

void propagate_parallel(const SparseChain& transposed, const std::vector<double>& in, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(transposed.n), 0.0);
  const int n = transposed.n;
#pragma omp parallel for schedule(static)
  for (int v = 0; v < n; ++v) {
    double acc = 0.0;
    for (auto k = transposed.offsets[static_cast<std::size_t>(v)]; k < transposed.offsets[static_cast<std::size_t>(v) + 1]; ++k) {
      acc += in[static_cast<std::size_t>(transposed.targets[static_cast<std::size_t>(k)])] * transposed.probs[static_cast<std::size_t>(k)];
    }
    out[static_cast<std::size_t>(v)] = acc;
  }
}

namespace {

void check_size(const std::vector<int>& vertices) {
  if (vertices.size() > static_cast<std::size_t>(kMaxSubsetVertices)) {
    throw GraphError("subset enumeration limited to " + std::to_string(kMaxSubsetVertices) + " vertices");
  }
}

// Weight from vertices[k] to vertices[l], and from vertices[k] to everything else.
struct LocalWeights {
  std::vector<double> pair;   // k * m + l
  std::vector<double> total;  // non-loop weight of vertices[k]
};

LocalWeights local_weights(const WeightedGraph& g, const std::vector<int>& vertices) {
  const std::size_t m = vertices.size();
  LocalWeights lw{std::vector<double>(m * m, 0.0), std::vector<double>(m, 0.0)};
  std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t k = 0; k < m; ++k) pos[static_cast<std::size_t>(vertices[k])] = static_cast<int>(k);
  for (std::size_t k = 0; k < m; ++k) {
    for (const auto& [v, w] : g.neighbors(vertices[k])) {
      lw.total[k] += w;
      const int l = pos[static_cast<std::size_t>(v)];
      if (l >= 0) lw.pair[k * m + static_cast<std::size_t>(l)] = w;
    }
  }
  return lw;
}

}  // namespace

SubsetTable subset_table_serial(const WeightedGraph& g, const std::vector<int>& vertices) {
  check_size(vertices);
  const std::size_t m = vertices.size();
  const auto lw = local_weights(g, vertices);
  SubsetTable table{vertices, std::vector<double>(std::size_t{1} << m, 0.0), std::vector<double>(std::size_t{1} << m, 0.0)};
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    const auto k = static_cast<std::size_t>(__builtin_ctzll(mask));
    const std::uint64_t rest = mask & (mask - 1);
    double inner = 0.0;
    for (std::uint64_t r = rest; r != 0; r &= r - 1) {
      inner += lw.pair[k * m + static_cast<std::size_t>(__builtin_ctzll(r))];
    }
    table.volume[mask] = table.volume[rest] + g.vertex_weight(vertices[k]);
    table.boundary[mask] = table.boundary[rest] + lw.total[k] - 2.0 * inner;
  }
  return table;
}

SubsetTable subset_table_parallel(const WeightedGraph& g, const std::vector<int>& vertices) {
  check_size(vertices);
  const std::size_t m = vertices.size();
  const auto lw = local_weights(g, vertices);
  std::vector<double> weight(m);
  for (std::size_t k = 0; k < m; ++k) weight[k] = g.vertex_weight(vertices[k]);
  const auto count = static_cast<std::int64_t>(std::uint64_t{1} << m);
  SubsetTable table{vertices, std::vector<double>(static_cast<std::size_t>(count), 0.0),
                    std::vector<double>(static_cast<std::size_t>(count), 0.0)};
  // Blocks share the high bits; the first entry of a block is summed directly,
  // the rest reuse the serial recurrence, whose predecessor lies in the same block.
  const std::size_t low_bits = std::min<std::size_t>(m, 10);
  const std::int64_t block = std::int64_t{1} << low_bits;
  const std::int64_t blocks = count / block;
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const auto base = static_cast<std::uint64_t>(b) << low_bits;
    double vol = 0.0;
    double cut = 0.0;
    for (std::size_t k = low_bits; k < m; ++k) {
      if (!((base >> k) & 1)) continue;
      vol += weight[k];
      double inside = 0.0;
      for (std::size_t l = low_bits; l < m; ++l) {
        if ((base >> l) & 1) inside += lw.pair[k * m + l];
      }
      cut += lw.total[k] - inside;
    }
    table.volume[base] = vol;
    table.boundary[base] = cut;
    for (std::uint64_t mask = base + 1; mask < base + static_cast<std::uint64_t>(block); ++mask) {
      const auto k = static_cast<std::size_t>(__builtin_ctzll(mask));
      const std::uint64_t rest = mask & (mask - 1);
      double inner = 0.0;
      for (std::uint64_t r = rest; r != 0; r &= r - 1) {
        inner += lw.pair[k * m + static_cast<std::size_t>(__builtin_ctzll(r))];
      }
      table.volume[mask] = table.volume[rest] + weight[k];
      table.boundary[mask] = table.boundary[rest] + lw.total[k] - 2.0 * inner;
    }
  }
  return table;
}

int kernel_threads() { return omp_get_max_threads(); }

}  // namespace hyperwalk
