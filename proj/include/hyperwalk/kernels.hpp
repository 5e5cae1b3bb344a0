#pragma once

#include <cstdint>
#include <vector>

#include "hyperwalk/graph.hpp"

namespace hyperwalk {

/// Row-stochastic (or sub-stochastic) sparse matrix in CSR form; row u holds
/// the transitions out of u.
struct SparseChain {
  int n = 0;
  std::vector<std::int64_t> offsets{0};
  std::vector<int> targets;
  std::vector<double> probs;

  void add_row(const std::vector<std::pair<int, double>>& row);
  [[nodiscard]] SparseChain transpose() const;
};

/// out = in * P. Serial reference, scatters along rows.
void propagate_serial(const SparseChain& chain, const std::vector<double>& in, std::vector<double>& out);
/// out = in * P from the transposed chain, gathering per target in parallel.
void propagate_parallel(const SparseChain& transposed, const std::vector<double>& in, std::vector<double>& out);

/// Volume and boundary weight of every subset of `vertices` (bit k <-> vertices[k]),
/// with boundary edges counted against the whole graph.
struct SubsetTable {
  std::vector<int> vertices;
  std::vector<double> volume;
  std::vector<double> boundary;
};

/// Incremental recurrence over the lowest set bit.
SubsetTable subset_table_serial(const WeightedGraph& g, const std::vector<int>& vertices);
/// Independent direct evaluation of each subset, in parallel.
SubsetTable subset_table_parallel(const WeightedGraph& g, const std::vector<int>& vertices);

inline constexpr int kMaxSubsetVertices = 24;

/// Number of OpenMP threads used by the parallel kernels.
int kernel_threads();

}  // namespace hyperwalk
