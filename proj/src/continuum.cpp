#include "mstlab/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mstlab/cycle_breaking.hpp"

namespace mstlab {

double ExcursionTree::distance(int u, int v) const {
  const double lu = level[u], lv = level[v];
  // walk the strictly level-decreasing parent chains to the meeting point
  int a = u, b = v;
  while (a != b) {
    if (level[a] > level[b])
      a = parent[a];
    else if (level[b] > level[a])
      b = parent[b];
    else
      a = parent[a];
  }
  return 2.0 * lu + 2.0 * lv - 4.0 * level[a];
}

double ExcursionTree::height() const {
  double top = 0.0;
  for (double l : level) top = std::max(top, l);
  return 2.0 * (top - level[root]);
}

GridPath sample_w_lambda(double lambda, double T, double h, std::uint64_t seed) {
  if (!(T > 0.0) || !(h > 0.0))
    throw std::invalid_argument("sample_w_lambda: T and h must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(T / h));
  GridPath path;
  path.h = h;
  path.values.resize(steps + 1);
  Rng rng(split_seed(seed, 0xb7011aULL));
  const double sd = std::sqrt(h);
  double w = 0.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * h;
    path.values[i] = w + lambda * t - 0.5 * t * t;
    w += sd * rng.normal();
  }
  return path;
}

std::vector<Excursion> extract_excursions(const GridPath& path) {
  std::vector<Excursion> out;
  const auto& v = path.values;
  double running_min = v.empty() ? 0.0 : v[0];
  std::vector<double> cur;
  bool open = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    running_min = std::min(running_min, v[i]);
    const double b = v[i] - running_min;
    if (b > 0.0) {
      if (!open) {
        open = true;
        cur.clear();
        cur.push_back(0.0);
      }
      cur.push_back(b);
    } else if (open) {
      cur.push_back(0.0);
      out.push_back({path.h, cur});
      open = false;
    }
  }
  if (open) {  // clamp an unfinished trailing excursion
    cur.push_back(0.0);
    out.push_back({path.h, cur});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Excursion& a, const Excursion& b) {
                     return a.values.size() > b.values.size();
                   });
  return out;
}

ExcursionTree tree_from_excursion(const Excursion& e) {
  ExcursionTree t;
  const auto& v = e.values;
  const std::size_t m = v.size();
  t.tau.assign(m, 0);
  if (m == 0) {
    t.graph.n = 1;
    t.graph.mass = {0.0};
    t.level = {0.0};
    t.parent = {-1};
    return t;
  }

  auto new_vertex = [&](double lvl) {
    t.level.push_back(lvl);
    t.parent.push_back(-1);
    return t.graph.n++;
  };

  t.root = new_vertex(v[0]);
  std::vector<int> stack{t.root};  // strictly increasing levels
  std::vector<double> mass(1, 0.0);
  auto add_mass = [&](int vertex, double amount) {
    if (vertex >= static_cast<int>(mass.size())) mass.resize(vertex + 1, 0.0);
    mass[vertex] += amount;
  };
  add_mass(t.root, e.h);
  t.tau[0] = t.root;

  auto link = [&](int child, int par) {
    t.parent[child] = par;
    t.graph.add_edge(par, child, 2.0 * (t.level[child] - t.level[par]));
  };

  for (std::size_t i = 1; i < m; ++i) {
    const double lvl = v[i];
    int pending = -1;
    while (t.level[stack.back()] > lvl) {
      const int popped = stack.back();
      stack.pop_back();
      if (pending >= 0) link(pending, popped);
      pending = popped;
    }
    int vertex;
    if (t.level[stack.back()] == lvl) {
      vertex = stack.back();
    } else {
      vertex = new_vertex(lvl);
      stack.push_back(vertex);
    }
    if (pending >= 0) link(pending, vertex);
    t.tau[i] = vertex;
    if (i + 1 < m) add_mass(vertex, e.h);  // half-open mass convention
  }
  if (stack.size() != 1 || stack.back() != t.root)
    throw std::logic_error("tree_from_excursion: excursion did not close");

  mass.resize(t.graph.n, 0.0);
  t.graph.mass = std::move(mass);
  return t;
}

namespace {

// segment tree over the excursion for "first index >= x with value <= y"
class FirstPassageIndex {
 public:
  explicit FirstPassageIndex(const std::vector<double>& v) : n_(v.size()) {
    size_ = 1;
    while (size_ < n_) size_ <<= 1;
    tree_.assign(2 * size_, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n_; ++i) tree_[size_ + i] = v[i];
    for (std::size_t i = size_ - 1; i >= 1; --i)
      tree_[i] = std::min(tree_[2 * i], tree_[2 * i + 1]);
  }

  // smallest index >= x with value <= y, or -1
  int query(std::size_t x, double y) const {
    return descend(1, 0, size_, x, y);
  }

 private:
  int descend(std::size_t node, std::size_t lo, std::size_t hi, std::size_t x,
              double y) const {
    if (hi <= x || tree_[node] > y) return -1;
    if (node >= size_) return static_cast<int>(lo);
    const std::size_t mid = (lo + hi) / 2;
    int left = descend(2 * node, lo, mid, x, y);
    if (left >= 0) return left;
    return descend(2 * node + 1, mid, hi, x, y);
  }

  std::size_t n_, size_;
  std::vector<double> tree_;
};

}  // namespace

GluePlan poisson_glue_plan(const Excursion& e, std::uint64_t seed) {
  GluePlan plan;
  const auto& v = e.values;
  if (v.empty()) return plan;
  Rng rng(split_seed(seed, 0x91a5cbULL));
  FirstPassageIndex index(v);
  // independent Poisson counts per grid column sum to Poisson(h * area)
  for (std::size_t x = 0; x < v.size(); ++x) {
    if (v[x] <= 0.0) continue;
    const int count = rng.poisson(e.h * v[x]);
    for (int c = 0; c < count; ++c) {
      const double y = rng.uniform(v[x]);
      const int z = index.query(x, y);
      if (z < 0) throw std::logic_error("poisson_glue_plan: no passage found");
      plan.points.push_back({static_cast<int>(x), y, z});
    }
  }
  std::sort(plan.points.begin(), plan.points.end(),
            [](const GluePlan::Point& a, const GluePlan::Point& b) {
              return a.x_index != b.x_index ? a.x_index < b.x_index
                                            : a.y_level < b.y_level;
            });
  return plan;
}

std::vector<ContinuumComponent> sample_g_lambda(double lambda, double h,
                                                std::uint64_t seed,
                                                int max_components) {
  const GridPath path = sample_w_lambda(lambda, default_horizon(lambda), h, seed);
  const std::vector<Excursion> exc = extract_excursions(path);
  std::vector<ContinuumComponent> out;
  const int keep = std::min<int>(max_components, static_cast<int>(exc.size()));
  out.reserve(keep);
  for (int i = 0; i < keep; ++i) {
    const ExcursionTree tree = tree_from_excursion(exc[i]);
    const GluePlan plan = poisson_glue_plan(exc[i], split_seed(seed, 0x6c75 + i));
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(plan.points.size());
    for (const auto& p : plan.points)
      pairs.push_back({tree.tau[p.x_index], tree.tau[p.z_index]});
    ContinuumComponent comp;
    comp.graph = pairs.empty() ? tree.graph : glue(tree.graph, pairs);
    comp.surplus = surplus(comp.graph);
    comp.sigma = exc[i].sigma();
    out.push_back(std::move(comp));
  }
  return out;
}

std::vector<ContinuumComponent> sample_m_lambda(double lambda, double h,
                                                std::uint64_t seed,
                                                int max_components) {
  std::vector<ContinuumComponent> comps =
      sample_g_lambda(lambda, h, seed, max_components);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    Rng rng(split_seed(seed, 0xc071 + i));
    auto [tree, trace] = cut(comps[i].graph, rng);
    comps[i].graph = std::move(tree);
    comps[i].surplus = 0;
  }
  return comps;
}

namespace {

void require_3regular_kernel(const Multigraph& K, int k, const char* who) {
  if (k < 2) throw std::invalid_argument(std::string(who) + ": k must be >= 2");
  if (K.edge_count() != 3 * k - 3 || K.n != 2 * (k - 1))
    throw std::invalid_argument(std::string(who) + ": kernel size mismatch");
  for (int d : K.degrees())
    if (d != 3) throw std::invalid_argument(std::string(who) + ": kernel not 3-regular");
  if (!is_connected(K))
    throw std::invalid_argument(std::string(who) + ": kernel disconnected");
}

}  // namespace

EdgeLengthGraph construction1_core(double sigma, int k, const Multigraph& K,
                                   std::uint64_t seed) {
  require_3regular_kernel(K, k, "construction1_core");
  if (!(sigma > 0.0)) throw std::invalid_argument("construction1_core: sigma <= 0");
  Rng rng(split_seed(seed, 0xc1ULL));
  const double gamma_k = rng.gamma((3.0 * k - 2.0) / 2.0, 2.0);  // rate 1/2
  const std::vector<double> y = rng.dirichlet(1.0, 3 * k - 3);
  const double scale = std::sqrt(sigma * gamma_k);
  EdgeLengthGraph core;
  core.n = K.n;
  for (int j = 0; j < K.edge_count(); ++j)
    core.add_edge(K.edges[j].u, K.edges[j].v, y[j] * scale);
  return core;
}

ContinuumComponent construction2_component(double sigma, int k,
                                           const Multigraph& K, double h,
                                           std::uint64_t seed) {
  require_3regular_kernel(K, k, "construction2_component");
  if (!(sigma > 0.0) || !(h > 0.0))
    throw std::invalid_argument("construction2_component: bad parameters");
  Rng rng(split_seed(seed, 0xc2ULL));
  const int ne = 3 * k - 3;
  const std::vector<double> x = rng.dirichlet(0.5, ne);

  // disjoint union of the edge trees, tracking each tree's two marked
  // mass points (the extremities of the kernel edge it replaces)
  EdgeLengthGraph all;
  std::vector<std::pair<int, int>> extremity(ne);
  for (int j = 0; j < ne; ++j) {
    ExcursionTree tree = sample_crt(sigma * x[j], h, split_seed(seed, 0x7000 + j));
    const int offset = all.n;
    for (const auto& e : tree.graph.edges)
      all.add_edge(e.u + offset, e.v + offset, e.len);
    if (all.mass.size() < static_cast<std::size_t>(offset))
      all.mass.resize(offset, 0.0);
    all.mass.insert(all.mass.end(), tree.graph.mass.begin(), tree.graph.mass.end());
    all.n += tree.graph.n;

    // two independent points under the normalized mass measure
    const int grid = static_cast<int>(tree.tau.size()) - 1;
    int a = tree.tau[rng.below(std::max(1, grid))];
    int b = tree.tau[rng.below(std::max(1, grid))];
    for (int guard = 0; a == b && guard < 64; ++guard)
      b = tree.tau[rng.below(std::max(1, grid))];
    if (a == b)
      throw std::runtime_error("construction2_component: degenerate tree marks");
    extremity[j] = {a + offset, b + offset};
  }

  // one glue group per kernel vertex
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> anchor(K.n, -1);
  auto attach = [&](int kernel_vertex, int point) {
    if (anchor[kernel_vertex] < 0)
      anchor[kernel_vertex] = point;
    else
      pairs.push_back({anchor[kernel_vertex], point});
  };
  for (int j = 0; j < ne; ++j) {
    attach(K.edges[j].u, extremity[j].first);
    attach(K.edges[j].v, extremity[j].second);
  }

  ContinuumComponent comp;
  comp.graph = glue(all, pairs);
  comp.surplus = surplus(comp.graph);
  comp.sigma = sigma;
  return comp;
}

ExcursionTree sample_crt(double mass, double h, std::uint64_t seed) {
  if (!(mass > 0.0) || !(h > 0.0))
    throw std::invalid_argument("sample_crt: mass and h must be positive");
  const auto m = static_cast<std::size_t>(
      std::max<long long>(2, std::llround(1.0 / h)));
  Rng rng(split_seed(seed, 0xc27ULL));

  // Brownian bridge on m steps
  std::vector<double> w(m + 1, 0.0);
  const double sd = std::sqrt(1.0 / static_cast<double>(m));
  for (std::size_t i = 1; i <= m; ++i) w[i] = w[i - 1] + sd * rng.normal();
  std::vector<double> bridge(m + 1);
  for (std::size_t i = 0; i <= m; ++i)
    bridge[i] = w[i] - (static_cast<double>(i) / m) * w[m];

  // Vervaat transform: rotate the bridge around its minimum
  std::size_t rho = 0;
  for (std::size_t i = 1; i <= m; ++i)
    if (bridge[i] < bridge[rho]) rho = i;
  Excursion exc;
  exc.h = mass / static_cast<double>(m);  // grid mass, total = mass
  exc.values.resize(m + 1);
  const double scale = std::sqrt(mass);  // distance scaling
  for (std::size_t i = 0; i <= m; ++i)
    exc.values[i] = (bridge[(rho + i) % m] - bridge[rho]) * scale;
  exc.values[0] = exc.values[m] = 0.0;
  return tree_from_excursion(exc);
}

Multigraph random_3regular_kernel(int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("random_3regular_kernel: k must be >= 2");
  Rng rng(split_seed(seed, 0x3264ULL));
  const int v = 2 * (k - 1);
  for (;;) {
    std::vector<int> stubs;
    stubs.reserve(3 * v);
    for (int i = 0; i < v; ++i)
      for (int c = 0; c < 3; ++c) stubs.push_back(i);
    for (std::size_t i = stubs.size(); i > 1; --i)
      std::swap(stubs[i - 1], stubs[rng.below(i)]);
    Multigraph g;
    g.n = v;
    bool loop = false;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      if (stubs[i] == stubs[i + 1]) {
        loop = true;
        break;
      }
      g.add_edge(stubs[i], stubs[i + 1]);
    }
    if (!loop && is_connected(g)) return g;
  }
}

}  // namespace mstlab
