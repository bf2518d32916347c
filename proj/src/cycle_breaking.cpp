#include "mstlab/cycle_breaking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "mstlab/union_find.hpp"

namespace mstlab {

Multigraph k_step(const Multigraph& g, Rng& rng) {
  if (!is_connected(g)) throw std::invalid_argument("k_step: disconnected input");
  if (surplus(g) == 0) return g;  // Dirac mass at the tree
  const std::vector<int> conn = conn_edges(g);
  const int victim = conn[rng.below(conn.size())];
  Multigraph out;
  out.n = g.n;
  out.next_id = g.next_id;
  out.edges.reserve(g.edges.size() - 1);
  for (const auto& e : g.edges)
    if (e.id != victim) out.edges.push_back(e);
  return out;
}

Multigraph k_infinity(const Multigraph& g, Rng& rng) {
  Multigraph cur = g;
  int s = surplus(cur);
  while (s > 0) {
    cur = k_step(cur, rng);
    --s;
  }
  return cur;
}

SpanningTreeLaw mst_law_exact(const Multigraph& g) {
  if (!is_connected(g)) throw std::invalid_argument("mst_law_exact: disconnected input");
  const int m = static_cast<int>(g.edges.size());
  if (m > 9) throw std::invalid_argument("mst_law_exact: more than 9 edges");

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  SpanningTreeLaw law;
  long long total = 0;
  do {
    UnionFind uf(g.n);
    std::vector<int> kept;
    for (int slot : perm) {
      const auto& e = g.edges[slot];
      if (e.u != e.v && uf.unite(e.u, e.v)) kept.push_back(e.id);
    }
    std::sort(kept.begin(), kept.end());
    law[kept] += 1.0;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto& [tree, p] : law) p /= static_cast<double>(total);
  return law;
}

namespace {

struct ExactLawSolver {
  const Multigraph* base;
  std::map<std::vector<int>, SpanningTreeLaw> memo;

  SpanningTreeLaw solve(const std::vector<int>& alive_sorted) {
    auto it = memo.find(alive_sorted);
    if (it != memo.end()) return it->second;

    Multigraph sub;
    sub.n = base->n;
    sub.next_id = base->next_id;
    for (const auto& e : base->edges)
      if (std::binary_search(alive_sorted.begin(), alive_sorted.end(), e.id))
        sub.edges.push_back(e);

    SpanningTreeLaw law;
    if (surplus(sub) == 0) {
      law[alive_sorted] = 1.0;
    } else {
      const std::vector<int> conn = conn_edges(sub);
      const double w = 1.0 / static_cast<double>(conn.size());
      for (int victim : conn) {
        std::vector<int> next;
        next.reserve(alive_sorted.size() - 1);
        for (int id : alive_sorted)
          if (id != victim) next.push_back(id);
        for (const auto& [tree, p] : solve(next)) law[tree] += w * p;
      }
    }
    memo.emplace(alive_sorted, law);
    return law;
  }
};

}  // namespace

SpanningTreeLaw k_infinity_law_exact(const Multigraph& g) {
  if (!is_connected(g))
    throw std::invalid_argument("k_infinity_law_exact: disconnected input");
  if (g.edges.size() > 10)
    throw std::invalid_argument("k_infinity_law_exact: more than 10 edges");
  std::vector<int> alive;
  alive.reserve(g.edges.size());
  for (const auto& e : g.edges) alive.push_back(e.id);
  std::sort(alive.begin(), alive.end());
  ExactLawSolver solver{&g, {}};
  return solver.solve(alive);
}

double law_tv_distance(const SpanningTreeLaw& a, const SpanningTreeLaw& b) {
  double tv = 0.0;
  for (const auto& [tree, p] : a) {
    auto it = b.find(tree);
    tv += std::abs(p - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [tree, p] : b)
    if (!a.count(tree)) tv += p;
  return tv / 2.0;
}

namespace {

// (edge id, position) of a length-measure-uniform point of conn(g)
std::pair<int, double> sample_conn_point(const EdgeLengthGraph& g, Rng& rng) {
  const std::vector<int> conn = conn_edges(g);
  std::unordered_map<int, double> len_by_id;
  len_by_id.reserve(g.edges.size());
  for (const auto& e : g.edges) len_by_id.emplace(e.id, e.len);

  double total = 0.0;
  for (int id : conn) total += len_by_id[id];
  double target = rng.uniform(total);
  std::size_t pick = 0;
  while (pick + 1 < conn.size() && target > len_by_id[conn[pick]]) {
    target -= len_by_id[conn[pick]];
    ++pick;
  }
  double t = target;
  const double len = len_by_id[conn[pick]];
  if (!(t > 0.0) || !(t < len)) t = len * 0.5;  // boundary guard
  return {conn[pick], t};
}

}  // namespace

EdgeLengthGraph continuum_k_step(const EdgeLengthGraph& g, Rng& rng) {
  if (!is_connected(g))
    throw std::invalid_argument("continuum_k_step: disconnected input");
  if (surplus(g) == 0) return g;
  auto [edge_id, t] = sample_conn_point(g, rng);
  return cut_at_point(g, edge_id, t);
}

std::pair<EdgeLengthGraph, CutTrace> cut(const EdgeLengthGraph& g, Rng& rng,
                                         bool record_graphs) {
  if (!is_connected(g)) throw std::invalid_argument("cut: disconnected input");
  EdgeLengthGraph cur = g;
  CutTrace trace;
  int s = surplus(cur);
  while (s > 0) {
    auto [edge_id, t] = sample_conn_point(cur, rng);
    cur = cut_at_point(cur, edge_id, t);
    --s;
    trace.steps.push_back({edge_id, t, s});
    if (record_graphs) trace.graphs.push_back(cur);
  }
  return {std::move(cur), std::move(trace)};
}

}  // namespace mstlab
