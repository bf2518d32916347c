#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mstlab/rng.hpp"
#include "mstlab/union_find.hpp"

// The coupled Erdős–Rényi / Kruskal process on the complete graph K_n.
// Edge weights are i.i.d. Uniform(0,1]; the graph at threshold p keeps
// the edges of weight <= p, and the minimum spanning forest at p keeps
// exactly the MST edges of weight <= p. Weights are represented by
// 64-bit "ticks" (the uniform variate scaled to 2^64) so that ordering
// is exact and ties have probability ~2^-64.

namespace mstlab {

// Lexicographic index of the pairs 0 <= i < j < n: (0,1),(0,2),...
std::uint64_t pair_to_index(int i, int j, int n);
std::pair<int, int> edge_index_to_pair(std::uint64_t k, int n);
inline std::uint64_t complete_edge_count(int n) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2;
}

struct WeightedEntry {
  std::uint64_t edge_index;
  std::uint64_t tick;  // weight = p_max * tick_to_unit(tick)
};

// Edges of K_n with weight <= p_max, sorted by increasing weight.
struct WeightedEdgeList {
  int n = 0;
  double p_max = 0.0;
  std::uint64_t seed = 0;
  std::vector<WeightedEntry> entries;

  double weight_of(const WeightedEntry& e) const {
    return p_max * tick_to_unit(e.tick);
  }
};

struct ForestEdge {
  int u, v;
  double weight;
};

// A spanning forest of K_n (the Kruskal state at some threshold).
struct Forest {
  int n = 0;
  std::vector<ForestEdge> edges;

  double total_weight() const;
  UnionFind partition() const;  // component summary
  int component_count() const { return n - static_cast<int>(edges.size()); }
};

// Components listed in decreasing order of size; equal sizes ordered by
// increasing smallest vertex label. Stored in CSR form so that a
// million-vertex sequence does not allocate per component.
struct ComponentSequence {
  std::vector<int> verts;
  std::vector<std::size_t> vbegin;
  std::vector<ForestEdge> edges;
  std::vector<std::size_t> ebegin;

  int count() const { return static_cast<int>(vbegin.size()) - 1; }
  std::span<const int> vertices(int c) const {
    return {verts.data() + vbegin[c], vbegin[c + 1] - vbegin[c]};
  }
  std::span<const ForestEdge> component_edges(int c) const {
    return {edges.data() + ebegin[c], ebegin[c + 1] - ebegin[c]};
  }
  int size(int c) const { return static_cast<int>(vbegin[c + 1] - vbegin[c]); }
  // |E| - |V| + 1 of the component.
  long long surplus(int c) const {
    return static_cast<long long>(ebegin[c + 1] - ebegin[c]) - size(c) + 1;
  }
};

inline double window_threshold(int n, double lambda) {
  return 1.0 / n + lambda * std::pow(static_cast<double>(n), -4.0 / 3.0);
}

// Sample the window {e : W_e <= p_max} with p_max = 1/n + lambda_max n^{-4/3}.
// Geometric skip sampling over edge indices; never enumerates all of K_n.
WeightedEdgeList sample_window(int n, double lambda_max, std::uint64_t seed);

// Same edge-retention law, parameterized by the raw threshold p_max.
WeightedEdgeList sample_window_p(int n, double p_max, std::uint64_t seed);

// Kruskal state at threshold p <= p_max: the minimum spanning forest
// restricted to MST edges of weight <= p.
Forest kruskal_forest(const WeightedEdgeList& wel, double p);

// Exact MST of K_n under PRF-implicit weights, O(n^2) time, O(n) memory.
Forest prim_mst(int n, std::uint64_t seed);

// The implicit Prim weight of edge {i,j}; symmetric in (i,j).
inline std::uint64_t prim_weight_tick(std::uint64_t seed, int i, int j, int n) {
  if (i > j) std::swap(i, j);
  return prf64(seed, pair_to_index(i, j, n));
}

// Exact MST of K_n built from a window at the connectivity threshold;
// retries with a larger threshold until the window graph is connected.
// This is how full MSTs are produced beyond the O(n^2) Prim regime.
Forest mst_via_window(int n, std::uint64_t seed);

// Components of the minimum spanning forest at 1/n + lambda n^{-4/3}.
ComponentSequence msf_components(const WeightedEdgeList& wel, double lambda);

// Components of G(n, 1/n + lambda n^{-4/3}), cycle edges kept. Uses the
// same window sample as msf_components for the same (n, lambda, seed).
ComponentSequence gnp_components(int n, double lambda, std::uint64_t seed);

}  // namespace mstlab
