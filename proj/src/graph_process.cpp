#include "mstlab/graph_process.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mstlab {

std::uint64_t pair_to_index(int i, int j, int n) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw std::out_of_range("pair_to_index: need 0 <= i < j < n");
  if (i > j) std::swap(i, j);
  const auto ui = static_cast<std::uint64_t>(i);
  return ui * n - ui * (ui + 1) / 2 + (j - i - 1);
}

std::pair<int, int> edge_index_to_pair(std::uint64_t k, int n) {
  if (n < 2 || k >= complete_edge_count(n))
    throw std::out_of_range("edge_index_to_pair: index out of range");
  // Solve for the row: i is the largest value with i*n - i(i+1)/2 <= k.
  const double nn = static_cast<double>(n);
  double guess = std::floor((2.0 * nn - 1.0 -
                             std::sqrt((2.0 * nn - 1.0) * (2.0 * nn - 1.0) -
                                       8.0 * static_cast<double>(k))) /
                            2.0);
  auto i = static_cast<std::int64_t>(std::max(0.0, guess));
  auto row_base = [n](std::int64_t r) {
    return static_cast<std::uint64_t>(r) * n -
           static_cast<std::uint64_t>(r) * (r + 1) / 2;
  };
  while (i > 0 && row_base(i) > k) --i;
  while (i + 1 < n && row_base(i + 1) <= k) ++i;
  const int j = static_cast<int>(k - row_base(i) + i + 1);
  return {static_cast<int>(i), j};
}

double Forest::total_weight() const {
  double total = 0.0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

UnionFind Forest::partition() const {
  UnionFind uf(n);
  for (const auto& e : edges) uf.unite(e.u, e.v);
  return uf;
}

WeightedEdgeList sample_window_p(int n, double p_max, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_window: n must be >= 2");
  if (!(p_max > 0.0) || p_max > 1.0)
    throw std::invalid_argument("sample_window: p_max must lie in (0,1]");

  WeightedEdgeList wel;
  wel.n = n;
  wel.p_max = p_max;
  wel.seed = seed;

  const std::uint64_t m = complete_edge_count(n);
  Rng rng(split_seed(seed, 0x57454c44ULL));
  if (p_max >= 1.0) {
    wel.entries.reserve(m);
    for (std::uint64_t k = 0; k < m; ++k)
      wel.entries.push_back({k, rng.next_u64()});
  } else {
    // Skip sampling: gaps between retained indices are Geometric(p_max).
    const double log_q = std::log1p(-p_max);
    double cursor = -1.0;
    const auto limit = static_cast<double>(m);
    for (;;) {
      cursor += 1.0 + std::floor(std::log(rng.u01_open()) / log_q);
      if (cursor >= limit) break;
      wel.entries.push_back({static_cast<std::uint64_t>(cursor), rng.next_u64()});
    }
  }
  std::sort(wel.entries.begin(), wel.entries.end(),
            [](const WeightedEntry& a, const WeightedEntry& b) {
              return a.tick != b.tick ? a.tick < b.tick
                                      : a.edge_index < b.edge_index;
            });
  for (std::size_t i = 1; i < wel.entries.size(); ++i) {
    if (wel.entries[i].tick == wel.entries[i - 1].tick &&
        wel.entries[i].edge_index == wel.entries[i - 1].edge_index)
      throw std::runtime_error("sample_window: duplicate edge draw");
  }
  return wel;
}

WeightedEdgeList sample_window(int n, double lambda_max, std::uint64_t seed) {
  return sample_window_p(n, window_threshold(n, lambda_max), seed);
}

Forest kruskal_forest(const WeightedEdgeList& wel, double p) {
  if (!(p > 0.0) || p > wel.p_max * (1.0 + 1e-12))
    throw std::out_of_range("kruskal_forest: threshold outside sampled coupling");
  Forest f;
  f.n = wel.n;
  UnionFind uf(wel.n);
  for (const auto& e : wel.entries) {
    const double w = wel.weight_of(e);
    if (w > p) break;  // entries are sorted by weight
    auto [u, v] = edge_index_to_pair(e.edge_index, wel.n);
    if (uf.unite(u, v)) f.edges.push_back({u, v, w});
  }
  return f;
}

Forest prim_mst(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("prim_mst: n must be >= 2");
  constexpr std::uint64_t kNoTick = ~0ULL;
  std::vector<std::uint64_t> best(static_cast<std::size_t>(n), kNoTick);
  std::vector<int> best_from(static_cast<std::size_t>(n), 0);
  std::vector<char> in_tree(static_cast<std::size_t>(n), 0);

  Forest f;
  f.n = n;
  f.edges.reserve(static_cast<std::size_t>(n) - 1);

  int current = 0;
  in_tree[0] = 1;
  for (int round = 1; round < n; ++round) {
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      const std::uint64_t t = prim_weight_tick(seed, current, v, n);
      if (t < best[v] || (t == best[v] && current < best_from[v])) {
        best[v] = t;
        best_from[v] = current;
      }
    }
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (pick < 0 || best[v] < best[pick] ||
          (best[v] == best[pick] && v < pick))
        pick = v;
    }
    in_tree[pick] = 1;
    f.edges.push_back({best_from[pick], pick, tick_to_unit(best[pick])});
    current = pick;
  }
  return f;
}

Forest mst_via_window(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("mst_via_window: n must be >= 2");
  double c = 6.0;
  for (int attempt = 0;; ++attempt) {
    const double p = std::min(1.0, (std::log(static_cast<double>(n)) + c) / n);
    WeightedEdgeList wel =
        sample_window_p(n, p, split_seed(seed, 0xc0419ULL + attempt));
    Forest f = kruskal_forest(wel, p);
    if (f.component_count() == 1) return f;
    c += 2.0;  // window graph was disconnected; widen and redraw
  }
}

namespace {

struct CompKey {
  int root;
  int size;
  int min_label;
};

}  // namespace

static ComponentSequence assemble_components(
    int n, UnionFind& uf, const std::vector<ForestEdge>& included) {
  std::vector<int> order_of_root(static_cast<std::size_t>(n), -1);
  std::vector<CompKey> comps;
  comps.reserve(64);
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (order_of_root[r] < 0) {
      order_of_root[r] = static_cast<int>(comps.size());
      comps.push_back({r, uf.component_size(r), v});
    }
  }
  std::vector<int> perm(comps.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    if (comps[a].size != comps[b].size) return comps[a].size > comps[b].size;
    return comps[a].min_label < comps[b].min_label;
  });
  std::vector<int> rank(comps.size());
  for (std::size_t i = 0; i < perm.size(); ++i) rank[perm[i]] = static_cast<int>(i);

  ComponentSequence seq;
  const std::size_t c = comps.size();
  seq.vbegin.assign(c + 1, 0);
  seq.ebegin.assign(c + 1, 0);
  for (int v = 0; v < n; ++v)
    ++seq.vbegin[rank[order_of_root[uf.find(v)]] + 1];
  for (const auto& e : included)
    ++seq.ebegin[rank[order_of_root[uf.find(e.u)]] + 1];
  for (std::size_t i = 1; i <= c; ++i) {
    seq.vbegin[i] += seq.vbegin[i - 1];
    seq.ebegin[i] += seq.ebegin[i - 1];
  }
  seq.verts.resize(static_cast<std::size_t>(n));
  seq.edges.resize(included.size());
  std::vector<std::size_t> vcur(seq.vbegin.begin(), seq.vbegin.end() - 1);
  std::vector<std::size_t> ecur(seq.ebegin.begin(), seq.ebegin.end() - 1);
  for (int v = 0; v < n; ++v)
    seq.verts[vcur[rank[order_of_root[uf.find(v)]]]++] = v;
  for (const auto& e : included)
    seq.edges[ecur[rank[order_of_root[uf.find(e.u)]]]++] = e;
  return seq;
}

ComponentSequence msf_components(const WeightedEdgeList& wel, double lambda) {
  const double p = window_threshold(wel.n, lambda);
  Forest f = kruskal_forest(wel, p);
  UnionFind uf = f.partition();
  return assemble_components(wel.n, uf, f.edges);
}

ComponentSequence gnp_components(int n, double lambda, std::uint64_t seed) {
  WeightedEdgeList wel = sample_window(n, lambda, seed);
  const double p = window_threshold(n, lambda);
  UnionFind uf(n);
  std::vector<ForestEdge> included;
  included.reserve(wel.entries.size());
  for (const auto& e : wel.entries) {
    const double w = wel.weight_of(e);
    if (w > p) break;
    auto [u, v] = edge_index_to_pair(e.edge_index, n);
    uf.unite(u, v);
    included.push_back({u, v, w});
  }
  return assemble_components(n, uf, included);
}

}  // namespace mstlab
