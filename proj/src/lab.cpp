#include "mstlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mstlab/continuum.hpp"
#include "mstlab/cycle_breaking.hpp"
#include "mstlab/metric.hpp"
#include "mstlab/rgraph.hpp"
#include "mstlab/stats.hpp"

namespace mstlab {

namespace {

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

template <typename F>
void parallel_replicas(int count, int threads, F&& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) break;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

struct Ctx {
  const ExperimentSpec* spec;
  RunManifest* manifest;
  int threads;

  double param(const std::string& key) const {
    auto it = spec->params.find(key);
    if (it == spec->params.end())
      throw std::invalid_argument("missing parameter: " + key);
    return it->second;
  }
  int iparam(const std::string& key) const {
    return static_cast<int>(std::llround(param(key)));
  }
  std::uint64_t replica_seed(int i) const { return manifest->replica_seeds[i]; }

  std::vector<CsvRow> rows;

  void row(int replica, const std::string& stat, double value) {
    rows.push_back({replica, stat, value});
  }
  void check(const std::string& name, bool passed, double observed,
             const std::string& detail) {
    manifest->checks.push_back({name, passed, observed, detail});
  }
  void summarize(const std::string& key, double value) {
    manifest->summary[key] = value;
  }
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// small shared helpers

std::vector<std::pair<int, int>> normalized_edge_set(const Forest& f) {
  std::vector<std::pair<int, int>> e;
  e.reserve(f.edges.size());
  for (const auto& fe : f.edges)
    e.push_back({std::min(fe.u, fe.v), std::max(fe.u, fe.v)});
  std::sort(e.begin(), e.end());
  return e;
}

// exact MST of K_n under PRF ticks by enumerating all labeled trees
std::vector<std::pair<int, int>> brute_force_mst(int n, std::uint64_t seed) {
  std::vector<std::vector<std::uint64_t>> tick(n, std::vector<std::uint64_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) tick[i][j] = tick[j][i] = prim_weight_tick(seed, i, j, n);

  std::vector<std::pair<int, int>> best_edges;
  unsigned __int128 best_total = ~static_cast<unsigned __int128>(0);
  std::vector<int> prufer(std::max(0, n - 2), 0);
  for (;;) {
    // decode the Prufer sequence
    std::vector<int> deg(n, 1);
    for (int a : prufer) ++deg[a];
    std::vector<std::pair<int, int>> edges;
    std::vector<int> degw = deg;
    for (int a : prufer) {
      int leaf = -1;
      for (int v = 0; v < n; ++v)
        if (degw[v] == 1) {
          leaf = v;
          break;
        }
      edges.push_back({std::min(leaf, a), std::max(leaf, a)});
      --degw[leaf];
      --degw[a];
    }
    int u = -1, v = -1;
    for (int w = 0; w < n; ++w)
      if (degw[w] == 1) (u < 0 ? u : v) = w;
    edges.push_back({std::min(u, v), std::max(u, v)});

    unsigned __int128 total = 0;
    for (auto [a, b] : edges) total += tick[a][b];
    if (total < best_total) {
      best_total = total;
      std::sort(edges.begin(), edges.end());
      best_edges = edges;
    }
    // next sequence
    int pos = static_cast<int>(prufer.size()) - 1;
    while (pos >= 0 && prufer[pos] == n - 1) prufer[pos--] = 0;
    if (pos < 0) break;
    ++prufer[pos];
  }
  return best_edges;
}

WeightedEdgeList full_list_from_prf(int n, std::uint64_t seed) {
  WeightedEdgeList wel;
  wel.n = n;
  wel.p_max = 1.0;
  wel.seed = seed;
  const std::uint64_t m = complete_edge_count(n);
  wel.entries.reserve(m);
  for (std::uint64_t k = 0; k < m; ++k) wel.entries.push_back({k, prf64(seed, k)});
  std::sort(wel.entries.begin(), wel.entries.end(),
            [](const WeightedEntry& a, const WeightedEntry& b) {
              return a.tick != b.tick ? a.tick < b.tick : a.edge_index < b.edge_index;
            });
  return wel;
}

Multigraph figure_eight() {
  // two triangles sharing one vertex: 5 vertices, 6 edges
  Multigraph g;
  g.n = 5;
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  g.add_edge(0, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 0);
  return g;
}

Multigraph complete_k4() {
  Multigraph g;
  g.n = 4;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) g.add_edge(i, j);
  return g;
}

double theta_series(double x) {
  double s = 0.0;
  for (int k = 1; k <= 64; ++k) {
    const double term = std::exp(-static_cast<double>(k) * k * x * x);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// 1. MST exactness against the spanning-tree enumeration oracle

void run_mst_exactness(Ctx& c) {
  const int draws = c.iparam("draws");
  std::atomic<int> prim_ok{0}, kruskal_ok{0};
  parallel_replicas(draws, c.threads, [&](int t) {
    const int n = 2 + t % 6;
    const std::uint64_t seed = c.replica_seed(t);
    const auto brute = brute_force_mst(n, seed);
    const auto prim = normalized_edge_set(prim_mst(n, seed));
    WeightedEdgeList wel = full_list_from_prf(n, seed);
    const auto kruskal = normalized_edge_set(kruskal_forest(wel, 1.0));
    if (prim == brute) ++prim_ok;
    if (kruskal == brute) ++kruskal_ok;
  });
  c.summarize("draws", draws);
  c.check("prim_equals_bruteforce", prim_ok == draws, prim_ok,
          fmt(prim_ok.load()) + "/" + fmt(draws) + " draws matched");
  c.check("kruskal_equals_bruteforce", kruskal_ok == draws, kruskal_ok,
          fmt(kruskal_ok.load()) + "/" + fmt(draws) + " draws matched");
}

// ---------------------------------------------------------------------------
// 2. coupling identity between the forest and graph processes

void run_coupling_identity(Ctx& c) {
  const int n = c.iparam("n");
  const int seeds = c.iparam("seeds");
  const int thresholds = c.iparam("thresholds");
  std::atomic<int> partition_ok{0}, filter_ok{0};
  const int total = seeds * thresholds;

  parallel_replicas(seeds, c.threads, [&](int s) {
    WeightedEdgeList wel = sample_window_p(n, 1.0, c.replica_seed(s));
    Forest mst = kruskal_forest(wel, 1.0);
    for (int j = 1; j <= thresholds; ++j) {
      // geometric grid from deep subcritical to p = 1
      const double lo = 0.25 / n;
      const double p = lo * std::pow(1.0 / lo, static_cast<double>(j) / thresholds);
      Forest fp = kruskal_forest(wel, p);

      UnionFind forest_uf = fp.partition();
      UnionFind graph_uf(n);
      for (const auto& e : wel.entries) {
        if (wel.weight_of(e) > p) break;
        auto [u, v] = edge_index_to_pair(e.edge_index, n);
        graph_uf.unite(u, v);
      }
      bool same_partition = forest_uf.component_count() == graph_uf.component_count();
      if (same_partition)
        for (int v = 1; v < n && same_partition; ++v)
          if (forest_uf.same(0, v) != graph_uf.same(0, v)) same_partition = false;
      // the vertex-set identity needs every pair checked, not just vs 0
      if (same_partition) {
        std::vector<int> root_map(n, -1);
        for (int v = 0; v < n && same_partition; ++v) {
          const int fr = forest_uf.find(v), gr = graph_uf.find(v);
          if (root_map[fr] < 0) root_map[fr] = gr;
          if (root_map[fr] != gr) same_partition = false;
        }
        std::vector<int> seen(n, -1);
        for (int v = 0; v < n && same_partition; ++v) {
          const int gr = graph_uf.find(v);
          const int fr = forest_uf.find(v);
          if (seen[gr] < 0) seen[gr] = fr;
          if (seen[gr] != fr) same_partition = false;
        }
      }
      if (same_partition) ++partition_ok;

      auto fp_edges = normalized_edge_set(fp);
      Forest filtered;
      filtered.n = n;
      for (const auto& e : mst.edges)
        if (e.weight <= p) filtered.edges.push_back(e);
      if (fp_edges == normalized_edge_set(filtered)) ++filter_ok;
    }
  });
  c.summarize("pairs_checked", total);
  c.check("partitions_identical", partition_ok == total, partition_ok,
          fmt(partition_ok.load()) + "/" + fmt(total));
  c.check("forest_is_filtered_mst", filter_ok == total, filter_ok,
          fmt(filter_ok.load()) + "/" + fmt(total));
}

// ---------------------------------------------------------------------------
// 3. zeta(3) limit of the mean total MST weight

void run_frieze_zeta3(Ctx& c) {
  const int n = c.iparam("n");
  const int replicas = c.iparam("replicas");
  std::vector<double> weights(replicas);
  parallel_replicas(replicas, c.threads, [&](int r) {
    weights[r] = prim_mst(n, c.replica_seed(r)).total_weight();
    });
  for (int r = 0; r < replicas; ++r) c.row(r, "total_weight", weights[r]);
  const double m = mean(weights);
  const double sd = std::sqrt(sample_variance(weights));
  const double se = sd / std::sqrt(static_cast<double>(replicas));
  c.summarize("mean_weight", m);
  c.summarize("sd", sd);
  c.summarize("se", se);
  c.summarize("zeta3", std::riemann_zeta(3.0));
  const double target = c.param("target");
  const double tol = c.param("tolerance");
  c.check("mean_weight_near_zeta3", std::abs(m - target) <= tol, m,
          "mean " + fmt(m) + " vs " + fmt(target) + " +- " + fmt(tol));
}

// ---------------------------------------------------------------------------
// 4. limit variance of the total MST weight

void run_janson_variance(Ctx& c) {
  const int n = c.iparam("n");
  const int replicas = c.iparam("replicas");
  std::vector<double> weights(replicas);
  parallel_replicas(replicas, c.threads, [&](int r) {
    weights[r] = prim_mst(n, c.replica_seed(r)).total_weight();
  });
  for (int r = 0; r < replicas; ++r) c.row(r, "total_weight", weights[r]);
  const double nvar = n * sample_variance(weights);
  const double target = 6.0 * std::riemann_zeta(4.0) - 4.0 * std::riemann_zeta(3.0);
  const double rel_tol = c.param("relative_tolerance");
  c.summarize("n_times_variance", nvar);
  c.summarize("target", target);
  c.check("scaled_variance", std::abs(nvar - target) <= rel_tol * target, nvar,
          fmt(nvar) + " vs " + fmt(target) + " +- " + fmt(100 * rel_tol) + "%");
}

// ---------------------------------------------------------------------------
// 5. largest forest component mass in the critical window

void run_luczak_mass(Ctx& c) {
  const int n = c.iparam("n");
  const double lambda = c.param("lambda");
  const int replicas = c.iparam("replicas");
  std::vector<double> ratios(replicas);
  parallel_replicas(replicas, c.threads, [&](int r) {
    WeightedEdgeList wel = sample_window(n, lambda, c.replica_seed(r));
    ComponentSequence comps = msf_components(wel, lambda);
    const double denom = 2.0 * lambda * std::pow(static_cast<double>(n), 2.0 / 3.0);
    ratios[r] = comps.size(0) / denom;
  });
  for (int r = 0; r < replicas; ++r) c.row(r, "mass_ratio", ratios[r]);
  const double m = mean(ratios);
  c.summarize("mean_ratio", m);
  c.summarize("sd", std::sqrt(sample_variance(ratios)));
  const double lo = c.param("low"), hi = c.param("high");
  c.check("mass_ratio_bracket", m >= lo && m <= hi, m,
          "mean " + fmt(m) + " vs [" + fmt(lo) + ", " + fmt(hi) + "]");
}

// ---------------------------------------------------------------------------
// 6. surplus of the largest component, continuum and discrete

void run_surplus_law(Ctx& c) {
  const double lambda = c.param("lambda");
  const double target = 2.0 * lambda * lambda * lambda / 3.0;

  const int rc = c.iparam("continuum_replicas");
  std::vector<double> cont(rc);
  parallel_replicas(rc, c.threads, [&](int r) {
    auto comps = sample_g_lambda(lambda, default_mesh(lambda), c.replica_seed(r), 1);
    cont[r] = comps.empty() ? 0.0 : comps[0].surplus;
  });
  for (int r = 0; r < rc; ++r) c.row(r, "continuum_surplus", cont[r]);
  const double mc = mean(cont);
  c.summarize("continuum_mean_surplus", mc);
  const double tol_c = c.param("continuum_relative_tolerance");
  c.check("continuum_surplus", std::abs(mc - target) <= tol_c * target, mc,
          fmt(mc) + " vs " + fmt(target) + " +- " + fmt(100 * tol_c) + "%");

  const int rd = c.iparam("discrete_replicas");
  const int n = c.iparam("n");
  std::vector<double> disc(rd);
  parallel_replicas(rd, c.threads, [&](int r) {
    ComponentSequence comps =
        gnp_components(n, lambda, split_seed(c.replica_seed(r), 0xd15c));
    disc[r] = static_cast<double>(comps.surplus(0));
  });
  for (int r = 0; r < rd; ++r) c.row(r, "discrete_surplus", disc[r]);
  const double md = mean(disc);
  c.summarize("discrete_mean_surplus", md);
  const double tol_d = c.param("discrete_relative_tolerance");
  c.check("discrete_surplus", std::abs(md - target) <= tol_d * target, md,
          fmt(md) + " vs " + fmt(target) + " +- " + fmt(100 * tol_d) + "%");
}

// ---------------------------------------------------------------------------
// 7. cycle breaking reproduces the MST law

void enumerate_connected_multigraphs(int max_edges,
                                     const std::function<void(const Multigraph&)>& visit) {
  for (int v = 1; v <= max_edges + 1; ++v) {
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < v; ++i)
      for (int j = i; j < v; ++j) slots.push_back({i, j});
    const int emin = std::max(0, v - 1);
    for (int e = emin; e <= max_edges; ++e) {
      std::vector<int> pick(e, 0);
      std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == e) {
          Multigraph g;
          g.n = v;
          for (int s : pick) g.add_edge(slots[s].first, slots[s].second);
          auto deg = g.degrees();
          for (int d : deg)
            if (d == 0) return;  // isolated vertex: not spanning
          if (!is_connected(g)) return;
          visit(g);
          return;
        }
        for (int s = from; s < static_cast<int>(slots.size()); ++s) {
          pick[pos] = s;
          rec(pos + 1, s);
        }
      };
      if (v == 1 && e == 0) {
        Multigraph g;
        g.n = 1;
        visit(g);
        continue;
      }
      rec(0, 0);
    }
  }
}

std::string multigraph_signature(const Multigraph& g) {
  auto deg = g.degrees();
  std::vector<int> loops(g.n, 0);
  for (const auto& e : g.edges)
    if (e.u == e.v) ++loops[e.u];
  std::vector<std::pair<int, int>> vsig(g.n);
  for (int v = 0; v < g.n; ++v) vsig[v] = {deg[v], loops[v]};
  std::sort(vsig.begin(), vsig.end());
  std::vector<std::tuple<int, int, int>> esig;
  for (const auto& e : g.edges) {
    int du = deg[e.u], dv = deg[e.v];
    esig.push_back({std::min(du, dv), std::max(du, dv), e.u == e.v ? 1 : 0});
  }
  std::sort(esig.begin(), esig.end());
  std::ostringstream os;
  os << g.n << ';' << g.edges.size() << ';';
  for (auto [d, l] : vsig) os << d << ',' << l << ' ';
  os << ';';
  for (auto [a, b, l] : esig) os << a << ',' << b << ',' << l << ' ';
  return os.str();
}

void run_cycle_break_tv(Ctx& c) {
  // (a) exact identity on every connected multigraph with <= max_edges edges
  const int max_edges = c.iparam("max_edges");
  std::map<std::string, std::vector<Multigraph>> classes;
  long long class_count = 0;
  double worst_tv = 0.0;
  enumerate_connected_multigraphs(max_edges, [&](const Multigraph& g) {
    auto& bucket = classes[multigraph_signature(g)];
    for (const auto& rep : bucket)
      if (is_isomorphic(rep, g)) return;
    bucket.push_back(g);
    ++class_count;
    const double tv = law_tv_distance(k_infinity_law_exact(g), mst_law_exact(g));
    worst_tv = std::max(worst_tv, tv);
  });
  c.summarize("isomorphism_classes", static_cast<double>(class_count));
  c.summarize("worst_exact_tv", worst_tv);
  c.check("exact_law_identity", worst_tv < 1e-9, worst_tv,
          fmt(class_count) + " classes, worst TV " + fmt(worst_tv));

  // (b) Monte Carlo TV on the figure-eight; one stream per sample so the
  // result does not depend on the thread count
  const int samples = c.iparam("samples");
  const Multigraph g8 = figure_eight();
  const SpanningTreeLaw exact = mst_law_exact(g8);
  std::vector<std::uint32_t> outcome(samples);
  parallel_replicas(samples, c.threads, [&](int s) {
    Rng rng(c.replica_seed(s));
    Multigraph tree = k_infinity(g8, rng);
    std::uint32_t key = 0;
    for (const auto& e : tree.edges) key |= 1u << e.id;
    outcome[s] = key;
  });
  std::map<std::uint32_t, long long> counts;
  for (std::uint32_t key : outcome) ++counts[key];
  SpanningTreeLaw empirical;
  for (const auto& [key, count] : counts) {
    std::vector<int> ids;
    for (int b = 0; b < 32; ++b)
      if (key & (1u << b)) ids.push_back(b);
    empirical[ids] = static_cast<double>(count) / samples;
  }
  const double tv = law_tv_distance(empirical, exact);
  c.summarize("figure_eight_tv", tv);
  const double tol = c.param("tv_tolerance");
  c.check("figure_eight_tv", tv <= tol, tv, "TV " + fmt(tv) + " <= " + fmt(tol));
}

// ---------------------------------------------------------------------------
// 8. continuum cutting projects to the discrete MST law

EdgeLengthGraph random_integer_rgraph(Rng& rng, int min_surplus, int length_budget) {
  for (;;) {
    Multigraph g = random_connected_multigraph(4, 6, rng);
    Core co = core(g);
    if (co.empty()) continue;
    // relabel the core as its own leafless multigraph
    std::vector<int> new_id(g.n, -1);
    int next = 0;
    for (int v : co.vertex_ids) new_id[v] = next++;
    std::set<int> keep(co.edge_ids.begin(), co.edge_ids.end());
    EdgeLengthGraph x;
    x.n = next;
    for (const auto& e : g.edges)
      if (keep.count(e.id)) x.add_edge(new_id[e.u], new_id[e.v], 1.0);
    if (surplus(x) < min_surplus) continue;
    if (x.edge_count() > length_budget) continue;
    // spread the leftover length budget as integer increments
    int spare = length_budget - x.edge_count();
    const int add = spare > 0 ? static_cast<int>(rng.below(spare + 1)) : 0;
    for (int i = 0; i < add; ++i)
      x.edges[rng.below(x.edges.size())].len += 1.0;
    bool has_branch = false;
    for (int d : x.degrees())
      if (d >= 3) has_branch = true;
    if (!has_branch) continue;
    return x;
  }
}

void run_cut_vs_mst(Ctx& c) {
  const int graphs = c.iparam("graphs");
  const int samples = c.iparam("samples");
  std::vector<double> tvs(graphs);
  std::vector<char> iso_ok(graphs, 0);
  parallel_replicas(graphs, c.threads, [&](int gi) {
    Rng rng(c.replica_seed(gi));
    const EdgeLengthGraph x = random_integer_rgraph(rng, 2, 9);
    const UnitSubdivision sub = unit_subdivision(x);
    const SpanningTreeLaw exact = mst_law_exact(sub.graph);
    std::vector<int> all_ids;
    for (const auto& e : sub.graph.edges) all_ids.push_back(e.id);
    std::sort(all_ids.begin(), all_ids.end());
    std::map<int, double> len_of;
    for (const auto& e : x.edges) len_of[e.id] = e.len;

    std::map<std::vector<int>, long long> counts;
    bool all_iso = true;
    for (int s = 0; s < samples; ++s) {
      auto [tree, trace] = cut(x, rng);
      std::set<int> removed;
      for (const auto& step : trace.steps) {
        int unit = static_cast<int>(std::floor(step.t));
        unit = std::clamp(unit, 0, static_cast<int>(len_of[step.edge_id]) - 1);
        removed.insert(sub.edge_of.at({step.edge_id, unit}));
      }
      std::vector<int> survivors;
      for (int id : all_ids)
        if (!removed.count(id)) survivors.push_back(id);
      ++counts[survivors];

      Multigraph g_state;
      g_state.n = sub.graph.n;
      for (const auto& e : sub.graph.edges)
        if (!removed.count(e.id)) g_state.edges.push_back(e);
      if (tree_code(g_state) != tree_code(graph_of(tree))) all_iso = false;
    }
    SpanningTreeLaw empirical;
    for (const auto& [tree, count] : counts)
      empirical[tree] = static_cast<double>(count) / samples;
    tvs[gi] = law_tv_distance(empirical, exact);
    iso_ok[gi] = all_iso ? 1 : 0;
  });
  double worst_tv = 0.0;
  int iso_count = 0;
  for (int gi = 0; gi < graphs; ++gi) {
    c.row(gi, "tv_distance", tvs[gi]);
    worst_tv = std::max(worst_tv, tvs[gi]);
    iso_count += iso_ok[gi];
  }
  c.summarize("worst_tv", worst_tv);
  const double tol = c.param("tv_tolerance");
  c.check("cut_tree_isomorphic", iso_count == graphs, iso_count,
          fmt(iso_count) + "/" + fmt(graphs) + " graphs had all runs isomorphic");
  c.check("cut_law_matches_mst", worst_tv <= tol, worst_tv,
          "worst TV " + fmt(worst_tv) + " <= " + fmt(tol));
}

// ---------------------------------------------------------------------------
// 9. excursion tree metric equals the coding pseudo-distance exactly

void run_excursion_tree_metric(Ctx& c) {
  const int cases = c.iparam("cases");
  const int max_grid = c.iparam("max_grid");
  std::atomic<long long> pair_count{0};
  std::atomic<int> ok_cases{0};
  parallel_replicas(cases, c.threads, [&](int t) {
    Rng rng(c.replica_seed(t));
    const int m = 3 + static_cast<int>(rng.below(max_grid - 2));
    // excursion by Vervaat rotation of a random-walk bridge
    std::vector<double> w(m + 1, 0.0);
    for (int i = 1; i <= m; ++i) w[i] = w[i - 1] + rng.normal();
    std::size_t rho = 0;
    std::vector<double> bridge(m + 1);
    for (int i = 0; i <= m; ++i) {
      bridge[i] = w[i] - (static_cast<double>(i) / m) * w[m];
      if (bridge[i] < bridge[rho]) rho = i;
    }
    Excursion exc;
    exc.h = 1.0;
    exc.values.resize(m + 1);
    for (int i = 0; i <= m; ++i)
      exc.values[i] = bridge[(rho + i) % m] - bridge[rho];
    exc.values[0] = exc.values[m] = 0.0;

    const ExcursionTree tree = tree_from_excursion(exc);
    bool exact = true;
    for (int i = 0; i <= m && exact; ++i) {
      double running = exc.values[i];
      for (int j = i; j <= m && exact; ++j) {
        running = std::min(running, exc.values[j]);
        const double dhat =
            2.0 * exc.values[i] + 2.0 * exc.values[j] - 4.0 * running;
        if (tree.distance(tree.tau[i], tree.tau[j]) != dhat) exact = false;
        ++pair_count;
      }
    }
    if (exact) ++ok_cases;
  });
  c.summarize("grid_pairs_checked", static_cast<double>(pair_count.load()));
  c.check("tree_metric_exact", ok_cases == cases, ok_cases,
          fmt(ok_cases.load()) + "/" + fmt(cases) + " excursions exact");
}

// ---------------------------------------------------------------------------
// 10. duration of the longest excursion concentrates near 2 lambda

void run_continuum_mass(Ctx& c) {
  const double lambda = c.param("lambda");
  const int replicas = c.iparam("replicas");
  std::vector<double> sigma1(replicas);
  parallel_replicas(replicas, c.threads, [&](int r) {
    const GridPath path = sample_w_lambda(lambda, default_horizon(lambda),
                                          default_mesh(lambda), c.replica_seed(r));
    const auto exc = extract_excursions(path);
    sigma1[r] = exc.empty() ? 0.0 : exc[0].sigma();
  });
  for (int r = 0; r < replicas; ++r) c.row(r, "sigma1", sigma1[r]);
  const double m = mean(sigma1);
  const double target = 2.0 * lambda;
  int inside = 0;
  for (double s : sigma1)
    if (s >= target - 8.0 && s <= target + 8.0) ++inside;
  const double frac = static_cast<double>(inside) / replicas;
  c.summarize("mean_sigma1", m);
  c.summarize("bracket_fraction", frac);
  const double rel = c.param("relative_tolerance");
  c.check("mean_duration", std::abs(m - target) <= rel * target, m,
          fmt(m) + " vs " + fmt(target) + " +- " + fmt(100 * rel) + "%");
  const double need = c.param("bracket_fraction");
  c.check("duration_bracket", frac >= need, frac,
          fmt(100 * frac) + "% in [2l-8, 2l+8], need >= " + fmt(100 * need) + "%");
}

// ---------------------------------------------------------------------------
// 11. tail of the tree height at unit mass against the theta series

void run_crt_height(Ctx& c) {
  const int samples = c.iparam("samples");
  const double h = c.param("mesh");
  std::vector<double> heights(samples);
  parallel_replicas(samples, c.threads, [&](int s) {
    heights[s] = sample_crt(1.0, h, c.replica_seed(s)).height();
  });
  int tail = 0;
  for (double x : heights)
    if (x >= 1.0) ++tail;
  const double phat = static_cast<double>(tail) / samples;
  const double target = theta_series(1.0);
  c.summarize("p_height_ge_1", phat);
  c.summarize("series_target", target);
  c.summarize("mean_height", mean(heights));
  const double tol = c.param("tolerance");
  c.check("height_tail_theta", std::abs(phat - target) <= tol, phat,
          "P(height >= 1) = " + fmt(phat) + " vs " + fmt(target) + " +- " + fmt(tol));
}

// ---------------------------------------------------------------------------
// 12. the two conditioned constructions agree on core edge lengths

void run_construction_consistency(Ctx& c) {
  const double sigma = c.param("sigma");
  const int k = c.iparam("k");
  const int replicas = c.iparam("replicas");
  const double h = c.param("mesh");
  const Multigraph K = complete_k4();

  std::vector<double> c1(replicas), c2(replicas);
  parallel_replicas(replicas, c.threads, [&](int r) {
    Rng rng(split_seed(c.replica_seed(r), 1));
    const EdgeLengthGraph core1 =
        construction1_core(sigma, k, K, c.replica_seed(r));
    c1[r] = core1.edges[rng.below(core1.edges.size())].len;

    const ContinuumComponent comp =
        construction2_component(sigma, k, K, h, split_seed(c.replica_seed(r), 2));
    const KernelDecomposition kd = kernel(comp.graph);
    if (kd.kernel_edge_lengths.size() != static_cast<std::size_t>(3 * k - 3))
      throw std::logic_error("construction 2 kernel has wrong edge count");
    c2[r] = kd.kernel_edge_lengths[rng.below(kd.kernel_edge_lengths.size())];
  });
  for (int r = 0; r < replicas; ++r) {
    c.row(r, "construction1_edge_length", c1[r]);
    c.row(r, "construction2_edge_length", c2[r]);
  }
  const KsResult ks = ks_two_sample(c1, c2);
  c.summarize("ks_statistic", ks.statistic);
  c.summarize("ks_p_value", ks.p_value);
  c.summarize("mean_c1", mean(c1));
  c.summarize("mean_c2", mean(c2));
  const double need = c.param("p_threshold");
  c.check("constructions_consistent", ks.p_value > need, ks.p_value,
          "KS p = " + fmt(ks.p_value) + " > " + fmt(need));
}

// ---------------------------------------------------------------------------
// 13. box-counting slopes: MST limit dimension 3 vs tree dimension 2

EdgeLengthGraph forest_as_metric_tree(const Forest& f, double edge_length) {
  EdgeLengthGraph g;
  g.n = f.n;
  for (const auto& e : f.edges) g.add_edge(e.u, e.v, edge_length);
  return g;
}

void run_dimension_contrast(Ctx& c) {
  const int n = c.iparam("n");

  const Forest mst = mst_via_window(n, split_seed(c.spec->seed, 1));
  const EdgeLengthGraph mst_tree =
      forest_as_metric_tree(mst, std::pow(static_cast<double>(n), -1.0 / 3.0));
  const double mst_slope = minkowski_slope(mst_tree, default_radii(mst_tree));
  c.summarize("mst_slope", mst_slope);

  const Forest ust = aldous_broder_ust(n, split_seed(c.spec->seed, 2));
  const EdgeLengthGraph ust_tree =
      forest_as_metric_tree(ust, std::pow(static_cast<double>(n), -0.5));
  const double ust_slope = minkowski_slope(ust_tree, default_radii(ust_tree));
  c.summarize("ust_slope", ust_slope);

  c.check("mst_slope_bracket",
          mst_slope >= c.param("mst_low") && mst_slope <= c.param("mst_high"),
          mst_slope,
          fmt(mst_slope) + " vs [" + fmt(c.param("mst_low")) + ", " +
              fmt(c.param("mst_high")) + "]");
  c.check("ust_slope_bracket",
          ust_slope >= c.param("ust_low") && ust_slope <= c.param("ust_high"),
          ust_slope,
          fmt(ust_slope) + " vs [" + fmt(c.param("ust_low")) + ", " +
              fmt(c.param("ust_high")) + "]");
}

// ---------------------------------------------------------------------------
// 14. covering numbers before and after one cut

EdgeLengthGraph cut_at_degree2_vertex(const EdgeLengthGraph& g, int v) {
  EdgeLengthGraph out = g;
  const int fresh = out.n++;
  bool moved = false;
  for (auto& e : out.edges) {
    if (moved) break;
    if (e.u == v) {
      e.u = fresh;
      moved = true;
    } else if (e.v == v) {
      e.v = fresh;
      moved = true;
    }
  }
  if (!g.mass.empty()) out.mass.push_back(0.0);
  return out;
}

void run_covering_sandwich(Ctx& c) {
  const int triples = c.iparam("triples");
  std::atomic<int> ok{0};
  parallel_replicas(triples, c.threads, [&](int t) {
    Rng rng(c.replica_seed(t));
    Multigraph base;
    do {
      base = random_connected_multigraph(4, 6, rng);
    } while (surplus(base) < 1);
    EdgeLengthGraph x;
    x.n = base.n;
    for (const auto& e : base.edges)
      x.add_edge(e.u, e.v, 0.5 + 1.5 * rng.u01_open());

    const double total = x.total_length();
    const double r = total * (0.08 + 0.17 * rng.u01_open());
    // subdivide first so that the cut point is an existing vertex and
    // both spaces share every other point
    const EdgeLengthGraph fine = subdivide_edges(x, r / 8.0);

    std::vector<int> candidates;
    {
      const std::vector<int> non_bridge = conn_edges(fine);
      std::set<int> nb(non_bridge.begin(), non_bridge.end());
      std::vector<int> deg = fine.degrees();
      std::vector<std::vector<int>> incident(fine.n);
      for (const auto& e : fine.edges) {
        incident[e.u].push_back(e.id);
        incident[e.v].push_back(e.id);
      }
      for (int v = 0; v < fine.n; ++v)
        if (deg[v] == 2 && nb.count(incident[v][0]) && nb.count(incident[v][1]))
          candidates.push_back(v);
    }
    if (candidates.empty()) {
      ++ok;  // no safe point at this mesh; vacuous triple
      return;
    }
    const int v = candidates[rng.below(candidates.size())];
    const EdgeLengthGraph fine_cut = cut_at_degree2_vertex(fine, v);

    const int n_before = covering_number_exact(fine, r);
    const int n_after = covering_number_exact(fine_cut, r);
    if (n_before <= n_after && n_after <= n_before + 2) ++ok;
  });
  c.summarize("triples_ok", ok.load());
  c.check("covering_sandwich", ok == triples, ok,
          fmt(ok.load()) + "/" + fmt(triples) + " triples satisfied the sandwich");
}

// ---------------------------------------------------------------------------
// 15. kernel structure invariants on random multigraphs

void run_kernel_structure(Ctx& c) {
  const int cases = c.iparam("cases");
  std::atomic<int> ok{0};
  parallel_replicas(cases, c.threads, [&](int t) {
    Rng rng(c.replica_seed(t));
    const Multigraph g = random_connected_multigraph(8, 12, rng);
    const EdgeLengthGraph x = unit_realization(g);
    const int s = surplus(g);
    const KernelDecomposition kd = kernel(x);
    bool good = kd.surplus == s;

    const Core co = core(g);
    if (s == 0) {
      good = good && co.empty() && std::isinf(kd.r);
    } else {
      // the core keeps the surplus
      good = good && static_cast<int>(co.edge_ids.size()) -
                             static_cast<int>(co.vertex_ids.size()) + 1 ==
                         s;
    }
    if (s >= 2) {
      auto deg = kd.kernel.degrees();
      for (int d : deg) good = good && d >= 3;
      good = good && kd.kernel.n <= 2 * s - 2;
      bool three_regular = true;
      for (int d : deg)
        if (d != 3) three_regular = false;
      good = good && ((kd.kernel.n == 2 * s - 2) == three_regular);
      good = good && surplus(kd.kernel) == s;
      double klen = 0.0;
      for (double l : kd.kernel_edge_lengths) klen += l;
      good = good && std::abs(klen - kd.core_length) < 1e-9;
    }
    if (good) ++ok;
  });
  c.summarize("cases_ok", ok.load());
  c.check("kernel_structure", ok == cases, ok,
          fmt(ok.load()) + "/" + fmt(cases) + " random multigraphs passed");
}

// ---------------------------------------------------------------------------
// 16. rescaled largest-component masses, discrete vs continuum

void run_discrete_vs_continuum(Ctx& c) {
  const int n = c.iparam("n");
  const double lambda = c.param("lambda");
  const int replicas = c.iparam("replicas");

  std::vector<double> disc(replicas), cont(replicas);
  parallel_replicas(replicas, c.threads, [&](int r) {
    ComponentSequence comps = gnp_components(n, lambda, c.replica_seed(r));
    disc[r] = comps.size(0) * std::pow(static_cast<double>(n), -2.0 / 3.0);
    const GridPath path =
        sample_w_lambda(lambda, default_horizon(lambda), default_mesh(lambda),
                        split_seed(c.replica_seed(r), 77));
    const auto exc = extract_excursions(path);
    cont[r] = exc.empty() ? 0.0 : exc[0].sigma();
  });
  for (int r = 0; r < replicas; ++r) {
    c.row(r, "discrete_mass", disc[r]);
    c.row(r, "continuum_mass", cont[r]);
  }
  const KsResult ks = ks_two_sample(disc, cont);
  c.summarize("ks_statistic", ks.statistic);
  c.summarize("ks_p_value", ks.p_value);
  c.summarize("mean_discrete", mean(disc));
  c.summarize("mean_continuum", mean(cont));
  const double need = c.param("p_threshold");
  c.check("mass_laws_close", ks.p_value > need, ks.p_value,
          "KS p = " + fmt(ks.p_value) + " > " + fmt(need));
}

// ---------------------------------------------------------------------------

struct Experiment {
  std::string description;
  std::map<std::string, double> defaults;
  std::function<void(Ctx&)> runner;
};

const std::map<std::string, Experiment>& registry() {
  static const std::map<std::string, Experiment> reg = [] {
    std::map<std::string, Experiment> r;
    r["mst_exactness"] = {
        "Prim and Kruskal match the spanning-tree enumeration oracle on K_n, n <= 7",
        {{"draws", 1000}},
        run_mst_exactness};
    r["coupling_identity"] = {
        "forest and graph components share vertex sets; the forest at p is the "
        "MST filtered at p",
        {{"n", 200}, {"seeds", 50}, {"thresholds", 20}},
        run_coupling_identity};
    r["frieze_zeta3"] = {
        "mean total MST weight of K_n approaches zeta(3)",
        {{"n", 2000}, {"replicas", 200}, {"target", 1.2021}, {"tolerance", 0.02}},
        run_frieze_zeta3};
    r["janson_variance"] = {
        "n Var(total MST weight) approaches 6 zeta(4) - 4 zeta(3)",
        {{"n", 1000}, {"replicas", 2000}, {"relative_tolerance", 0.15}},
        run_janson_variance};
    r["luczak_mass"] = {
        "largest forest component mass over 2 lambda n^{2/3} near 1",
        {{"n", 1000000}, {"lambda", 20}, {"replicas", 30}, {"low", 0.8}, {"high", 1.2}},
        run_luczak_mass};
    r["surplus_law"] = {
        "largest-component surplus near 2 lambda^3 / 3, continuum and discrete",
        {{"lambda", 3},
         {"continuum_replicas", 1000},
         {"discrete_replicas", 100},
         {"n", 1000000},
         {"continuum_relative_tolerance", 0.25},
         {"discrete_relative_tolerance", 0.35}},
        run_surplus_law};
    r["cycle_break_tv"] = {
        "edge cycle breaking has exactly the MST law (exact for <= 6 edges, "
        "Monte Carlo on the figure-eight)",
        {{"max_edges", 6}, {"samples", 100000}, {"tv_tolerance", 0.02}},
        run_cycle_break_tv};
    r["cut_vs_mst"] = {
        "cutting an integer-length graph projects to the MST law of its "
        "unit-subdivision multigraph",
        {{"graphs", 100}, {"samples", 100000}, {"tv_tolerance", 0.02}},
        run_cut_vs_mst};
    r["excursion_tree_metric"] = {
        "the excursion tree metric equals the coding pseudo-distance on all "
        "grid pairs exactly",
        {{"cases", 500}, {"max_grid", 200}},
        run_excursion_tree_metric};
    r["continuum_mass"] = {
        "longest excursion duration concentrates near 2 lambda",
        {{"lambda", 10},
         {"replicas", 1000},
         {"relative_tolerance", 0.15},
         {"bracket_fraction", 0.99}},
        run_continuum_mass};
    r["crt_height"] = {
        "tail P(height >= 1) of the unit-mass random tree against the "
        "alternating theta series",
        {{"samples", 10000}, {"mesh", 0.0005}, {"tolerance", 0.015}},
        run_crt_height};
    r["construction_consistency"] = {
        "core edge lengths from the direct construction match the glued-trees "
        "construction",
        {{"sigma", 1}, {"k", 3}, {"replicas", 500}, {"mesh", 0.00025}, {"p_threshold", 0.01}},
        run_construction_consistency};
    r["dimension_contrast"] = {
        "box-counting slope near 3 for the rescaled MST, near 2 for the "
        "uniform spanning tree",
        {{"n", 500000},
         {"mst_low", 2.5},
         {"mst_high", 3.5},
         {"ust_low", 1.6},
         {"ust_high", 2.4}},
        run_dimension_contrast};
    r["covering_sandwich"] = {
        "N(X,r) <= N(X_x,r) <= N(X,r)+2 for random cuts",
        {{"triples", 1000}},
        run_covering_sandwich};
    r["kernel_structure"] = {
        "kernel degree >= 3, |k| <= 2s-2 with equality iff 3-regular, surplus "
        "preserved",
        {{"cases", 10000}},
        run_kernel_structure};
    r["discrete_vs_continuum"] = {
        "largest-component rescaled masses, graph process vs excursion lengths",
        {{"n", 200000}, {"lambda", 1}, {"replicas", 500}, {"p_threshold", 0.01}},
        run_discrete_vs_continuum};
    return r;
  }();
  return reg;
}

int experiment_replica_slots(const ExperimentSpec& spec) {
  // enough per-replica seeds for the largest replica-indexed loop
  double top = 0.0;
  for (const auto& [key, value] : spec.params) {
    if (key == "replicas" || key == "draws" || key == "seeds" || key == "cases" ||
        key == "graphs" || key == "triples" || key == "samples" ||
        key == "continuum_replicas" || key == "discrete_replicas")
      top = std::max(top, value);
  }
  return std::max(1, static_cast<int>(std::llround(top)));
}

}  // namespace

bool RunManifest::all_passed() const {
  for (const auto& check : checks)
    if (!check.passed) return false;
  return true;
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["experiment"] = spec.name;
  j["seed"] = spec.seed;
  j["threads"] = spec.threads;
  j["out_dir"] = spec.out_dir;
  j["params"] = spec.params;
  j["started_at"] = started_at;
  j["finished_at"] = finished_at;
  j["replica_seeds"] = replica_seeds;
  j["summary"] = summary;
  j["checks"] = nlohmann::json::array();
  for (const auto& check : checks) {
    j["checks"].push_back({{"name", check.name},
                           {"passed", check.passed},
                           {"observed", check.observed},
                           {"detail", check.detail}});
  }
  j["all_passed"] = all_passed();
  return j.dump(2);
}

const std::vector<ExperimentInfo>& experiment_catalogue() {
  static const std::vector<ExperimentInfo> list = [] {
    std::vector<ExperimentInfo> out;
    for (const auto& [name, exp] : registry())
      out.push_back({name, exp.description, exp.defaults});
    return out;
  }();
  return list;
}

RunManifest run_experiment(const ExperimentSpec& spec) {
  auto it = registry().find(spec.name);
  if (it == registry().end())
    throw std::invalid_argument("unknown experiment: " + spec.name);
  const Experiment& exp = it->second;

  RunManifest manifest;
  manifest.spec = spec;
  for (const auto& [key, value] : exp.defaults)
    if (!manifest.spec.params.count(key)) manifest.spec.params[key] = value;
  for (const auto& [key, value] : spec.params)
    if (!exp.defaults.count(key))
      throw std::invalid_argument("unknown parameter for " + spec.name + ": " + key);
  if (manifest.spec.threads <= 0) manifest.spec.threads = default_threads();

  const int slots = experiment_replica_slots(manifest.spec);
  manifest.replica_seeds.resize(slots);
  for (int i = 0; i < slots; ++i)
    manifest.replica_seeds[i] = split_seed(manifest.spec.seed, i);

  Ctx ctx{&manifest.spec, &manifest, manifest.spec.threads};
  manifest.started_at = iso_now();
  exp.runner(ctx);
  manifest.finished_at = iso_now();

  if (!manifest.spec.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(manifest.spec.out_dir);
    {
      std::ofstream csv(fs::path(manifest.spec.out_dir) / "results.csv");
      csv << "replica,statistic,value\n";
      char buf[64];
      for (const auto& row : ctx.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", row.value);
        csv << row.replica << ',' << row.statistic << ',' << buf << '\n';
      }
    }
    {
      std::ofstream js(fs::path(manifest.spec.out_dir) / "manifest.json");
      js << manifest.to_json() << '\n';
    }
  }
  return manifest;
}

Forest aldous_broder_ust(int n, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("aldous_broder_ust: n must be >= 2");
  Rng rng(split_seed(seed, 0xab0d5ULL));
  Forest f;
  f.n = n;
  std::vector<char> visited(n, 0);
  int current = 0;
  visited[0] = 1;
  int remaining = n - 1;
  while (remaining > 0) {
    int next = static_cast<int>(rng.below(n - 1));
    if (next >= current) ++next;  // uniform neighbour on K_n
    if (!visited[next]) {
      visited[next] = 1;
      f.edges.push_back({current, next, 1.0});
      --remaining;
    }
    current = next;
  }
  return f;
}

std::map<std::string, double> parse_config(const std::string& text) {
  std::map<std::string, double> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      out[key] = std::stod(value);
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": non-numeric value for " + key);
    }
  }
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("LAB_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace mstlab
