#include "mstlab/rgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "mstlab/union_find.hpp"

namespace mstlab {

namespace {

// adjacency as (neighbour, edge slot) lists; loops appear twice
template <typename G>
std::vector<std::vector<std::pair<int, int>>> adjacency(const G& g) {
  std::vector<std::vector<std::pair<int, int>>> adj(g.n);
  for (int i = 0; i < static_cast<int>(g.edges.size()); ++i) {
    const auto& e = g.edges[i];
    adj[e.u].push_back({e.v, i});
    adj[e.v].push_back({e.u, i});
  }
  return adj;
}

template <typename G>
bool connected_impl(const G& g) {
  if (g.n <= 1) return true;
  auto adj = adjacency(g);
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int found = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [w, idx] : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++found;
        stack.push_back(w);
      }
    }
  }
  return found == g.n;
}

void require_connected(bool ok, const char* who) {
  if (!ok) throw std::invalid_argument(std::string(who) + ": graph must be connected");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<int> Multigraph::degrees() const {
  std::vector<int> deg(n, 0);
  for (const auto& e : edges) {
    deg[e.u] += 1;
    deg[e.v] += 1;  // a loop hits both branches, counting twice
  }
  return deg;
}

Multigraph EdgeLengthGraph::shape() const {
  Multigraph g;
  g.n = n;
  g.next_id = next_id;
  g.edges.reserve(edges.size());
  for (const auto& e : edges) g.edges.push_back({e.id, e.u, e.v});
  return g;
}

std::vector<int> EdgeLengthGraph::degrees() const { return shape().degrees(); }

double EdgeLengthGraph::total_length() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.len;
  return s;
}

double EdgeLengthGraph::total_mass() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

bool is_connected(const Multigraph& g) { return connected_impl(g); }
bool is_connected(const EdgeLengthGraph& g) { return connected_impl(g); }

int surplus(const Multigraph& g) {
  require_connected(is_connected(g), "surplus");
  return static_cast<int>(g.edges.size()) - g.n + 1;
}

int surplus(const EdgeLengthGraph& g) { return surplus(g.shape()); }

Core core(const Multigraph& g) {
  require_connected(is_connected(g), "core");
  std::vector<int> deg = g.degrees();
  std::vector<char> dead_v(g.n, 0), dead_e(g.edges.size(), 0);
  auto adj = adjacency(g);
  std::queue<int> q;
  for (int v = 0; v < g.n; ++v)
    if (deg[v] <= 1) q.push(v);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (dead_v[v] || deg[v] > 1) continue;
    dead_v[v] = 1;
    for (auto [w, idx] : adj[v]) {
      if (dead_e[idx]) continue;
      dead_e[idx] = 1;
      deg[v] -= 1;
      deg[w] -= 1;
      if (!dead_v[w] && deg[w] <= 1) q.push(w);
    }
  }
  Core c;
  for (int v = 0; v < g.n; ++v)
    if (!dead_v[v]) c.vertex_ids.push_back(v);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (!dead_e[i]) c.edge_ids.push_back(g.edges[i].id);
  if (c.edge_ids.empty()) c.vertex_ids.clear();  // tree: empty-core signal
  return c;
}

namespace {

// non-bridge edge slots via iterative Tarjan; safe for loops and
// parallel edges because the entry is skipped by edge slot, not vertex
std::vector<char> non_bridge_mask(const Multigraph& g) {
  auto adj = adjacency(g);
  const int m = static_cast<int>(g.edges.size());
  std::vector<char> non_bridge(m, 0);
  std::vector<int> disc(g.n, -1), low(g.n, 0);
  int timer = 0;

  struct Frame {
    int v;
    int entry_edge;
    std::size_t it;
  };
  for (int root = 0; root < g.n; ++root) {
    if (disc[root] >= 0) continue;
    std::vector<Frame> st{{root, -1, 0}};
    disc[root] = low[root] = timer++;
    while (!st.empty()) {
      Frame& f = st.back();
      if (f.it < adj[f.v].size()) {
        auto [w, idx] = adj[f.v][f.it++];
        if (idx == f.entry_edge) continue;
        if (g.edges[idx].u == g.edges[idx].v) {
          non_bridge[idx] = 1;  // loops never disconnect
          continue;
        }
        if (disc[w] < 0) {
          disc[w] = low[w] = timer++;
          st.push_back({w, idx, 0});
        } else {
          low[f.v] = std::min(low[f.v], disc[w]);
          non_bridge[idx] = 1;  // back edge lies on a cycle
        }
      } else {
        const int v = f.v;
        const int entry = f.entry_edge;
        st.pop_back();
        if (!st.empty()) {
          int parent = st.back().v;
          low[parent] = std::min(low[parent], low[v]);
          if (low[v] <= disc[parent]) non_bridge[entry] = 1;
        }
      }
    }
  }
  return non_bridge;
}

}  // namespace

std::vector<int> conn_edges(const Multigraph& g) {
  require_connected(is_connected(g), "conn_edges");
  auto mask = non_bridge_mask(g);
  std::vector<int> ids;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (mask[i]) ids.push_back(g.edges[i].id);
  return ids;
}

std::vector<int> conn_edges(const EdgeLengthGraph& g) {
  return conn_edges(g.shape());
}

double conn_length(const EdgeLengthGraph& g) {
  require_connected(is_connected(g), "conn_length");
  auto mask = non_bridge_mask(g.shape());
  double s = 0.0;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (mask[i]) s += g.edges[i].len;
  return s;
}

KernelDecomposition kernel(const EdgeLengthGraph& g) {
  require_connected(is_connected(g), "kernel");
  KernelDecomposition kd;
  kd.surplus = surplus(g);

  const Multigraph shape = g.shape();
  const Core co = core(shape);

  std::vector<char> in_core_v(g.n, 0);
  std::vector<char> in_core_e(g.edges.size(), 0);
  std::vector<int> slot_of_id;
  {
    int max_id = -1;
    for (const auto& e : g.edges) max_id = std::max(max_id, e.id);
    slot_of_id.assign(max_id + 2, -1);
    for (std::size_t i = 0; i < g.edges.size(); ++i) slot_of_id[g.edges[i].id] = static_cast<int>(i);
  }
  for (int v : co.vertex_ids) in_core_v[v] = 1;
  for (int id : co.edge_ids) in_core_e[slot_of_id[id]] = 1;

  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (in_core_e[i]) kd.core_length += g.edges[i].len;

  // hanging trees, grouped by their core attachment vertex
  if (!co.edge_ids.empty()) {
    auto adj = adjacency(g);
    std::vector<char> edge_taken(g.edges.size(), 0);
    for (int b : co.vertex_ids) {
      std::vector<int> tree_edges;
      std::vector<int> stack;
      for (auto [w, idx] : adj[b]) {
        if (in_core_e[idx] || edge_taken[idx]) continue;
        edge_taken[idx] = 1;
        tree_edges.push_back(g.edges[idx].id);
        if (!in_core_v[w]) stack.push_back(w);
      }
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, idx] : adj[v]) {
          if (edge_taken[idx] || in_core_e[idx]) continue;
          edge_taken[idx] = 1;
          tree_edges.push_back(g.edges[idx].id);
          if (!in_core_v[w]) stack.push_back(w);
        }
      }
      if (!tree_edges.empty()) kd.pendants.push_back({b, std::move(tree_edges)});
    }
  }

  if (kd.surplus == 0) return kd;  // r stays infinite

  if (kd.surplus == 1) {
    // the core is a cycle: empty kernel, e(X) = {the cycle}
    kd.kernel_edge_lengths = {kd.core_length};
    kd.kernel_edge_paths.push_back(co.edge_ids);
    kd.r = kd.core_length;
    return kd;
  }

  // Branchpoints of the core become kernel vertices; maximal degree-2
  // chains between them become kernel edges.
  std::vector<int> core_deg(g.n, 0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (!in_core_e[i]) continue;
    core_deg[g.edges[i].u] += 1;
    core_deg[g.edges[i].v] += 1;
  }
  std::vector<int> kv_of(g.n, -1);
  for (int v : co.vertex_ids) {
    if (core_deg[v] >= 3) {
      kv_of[v] = kd.kernel.n++;
      kd.kernel_vertex_of.push_back(v);
    }
  }

  std::vector<std::vector<std::pair<int, int>>> core_adj(g.n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (!in_core_e[i]) continue;
    const auto& e = g.edges[i];
    core_adj[e.u].push_back({e.v, static_cast<int>(i)});
    core_adj[e.v].push_back({e.u, static_cast<int>(i)});
  }

  std::vector<char> walked(g.edges.size(), 0);
  kd.r = std::numeric_limits<double>::infinity();
  for (int b = 0; b < g.n; ++b) {
    if (kv_of[b] < 0) continue;
    for (auto [w0, idx0] : core_adj[b]) {
      if (walked[idx0]) continue;
      walked[idx0] = 1;
      double len = g.edges[idx0].len;
      std::vector<int> path{g.edges[idx0].id};
      int prev = b, cur = w0;
      while (kv_of[cur] < 0) {
        // interior chain vertex has exactly two core edges
        int next = -1, next_idx = -1;
        for (auto [w, idx] : core_adj[cur]) {
          if (walked[idx]) continue;
          next = w;
          next_idx = idx;
          break;
        }
        if (next_idx < 0)
          throw std::logic_error("kernel: chain walk failed");
        walked[next_idx] = 1;
        len += g.edges[next_idx].len;
        path.push_back(g.edges[next_idx].id);
        prev = cur;
        cur = next;
      }
      kd.kernel.add_edge(kv_of[b], kv_of[cur], len);
      kd.kernel_edge_lengths.push_back(len);
      kd.kernel_edge_paths.push_back(std::move(path));
      kd.r = std::min(kd.r, len);
    }
  }
  if (surplus(kd.kernel) != kd.surplus)
    throw std::logic_error("kernel: surplus not preserved");
  return kd;
}

EdgeLengthGraph cut_at_point(const EdgeLengthGraph& g, int edge_id, double t) {
  require_connected(is_connected(g), "cut_at_point");
  int slot = -1;
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i].id == edge_id) slot = static_cast<int>(i);
  if (slot < 0) throw std::invalid_argument("cut_at_point: no such edge");
  const LEdge e = g.edges[slot];
  if (!(t > 0.0) || !(t < e.len))
    throw std::domain_error("cut_at_point: t must be interior to the edge");
  if (!non_bridge_mask(g.shape())[slot])
    throw std::domain_error("cut_at_point: edge is a bridge (not safely pointed)");

  EdgeLengthGraph out;
  out.n = g.n + 2;
  out.next_id = g.next_id;
  out.edges.reserve(g.edges.size() + 1);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (static_cast<int>(i) != slot) out.edges.push_back(g.edges[i]);
  const int x1 = g.n, x2 = g.n + 1;
  out.add_edge(e.u, x1, t);
  out.add_edge(x2, e.v, e.len - t);
  if (!g.mass.empty()) {
    out.mass = g.mass;
    out.mass.push_back(0.0);
    out.mass.push_back(0.0);
  }
  return out;
}

EdgeLengthGraph glue(const EdgeLengthGraph& g,
                     const std::vector<std::pair<int, int>>& pairs) {
  UnionFind uf(g.n);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b)
      throw std::invalid_argument("glue: pairs must name distinct existing vertices");
    uf.unite(a, b);
  }
  std::vector<int> new_id(g.n, -1);
  int next = 0;
  for (int v = 0; v < g.n; ++v) {
    int r = uf.find(v);
    if (new_id[r] < 0) new_id[r] = next++;
    new_id[v] = new_id[r];
  }
  EdgeLengthGraph out;
  out.n = next;
  out.next_id = g.next_id;
  out.edges.reserve(g.edges.size());
  for (const auto& e : g.edges)
    out.edges.push_back({e.id, new_id[e.u], new_id[e.v], e.len});
  if (!g.mass.empty()) {
    out.mass.assign(next, 0.0);
    for (int v = 0; v < g.n; ++v) out.mass[new_id[v]] += g.mass[v];
  }
  return out;
}

Multigraph graph_of(const EdgeLengthGraph& g) {
  require_connected(is_connected(g), "graph_of");
  const double tol = 1e-9;
  auto deg = g.degrees();
  std::vector<int> branch;
  for (int v = 0; v < g.n; ++v)
    if (deg[v] >= 3) branch.push_back(v);
  if (branch.empty())
    throw std::domain_error("graph_of: graph has no branch points");

  // Suppress degree-2 vertices into arcs between terminals (branch
  // points and leaves), then lay down the unit subdivision.
  auto adj = adjacency(g);
  std::vector<char> is_terminal(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (deg[v] != 2) is_terminal[v] = 1;

  Multigraph out;
  std::vector<int> out_id(g.n, -1);
  auto out_vertex = [&](int v) {
    if (out_id[v] < 0) out_id[v] = out.n++;
    return out_id[v];
  };
  for (int v : branch) out_vertex(v);  // branch points always survive

  std::vector<char> used(g.edges.size(), 0);
  // walk every arc starting from its branch-point side, so pendant
  // arcs are laid out from the attachment toward the leaf
  for (int s = 0; s < g.n; ++s) {
    if (deg[s] < 3) continue;
    for (auto [w0, idx0] : adj[s]) {
      if (used[idx0]) continue;
      used[idx0] = 1;
      double len = g.edges[idx0].len;
      int cur = w0;
      while (!is_terminal[cur]) {
        int next_idx = -1, next = -1;
        for (auto [w, idx] : adj[cur]) {
          if (used[idx]) continue;
          next = w;
          next_idx = idx;
          break;
        }
        if (next_idx < 0) throw std::logic_error("graph_of: arc walk failed");
        used[next_idx] = 1;
        len += g.edges[next_idx].len;
        cur = next;
      }
      const bool to_leaf = deg[cur] == 1;
      const double rounded = std::round(len);
      int units;
      if (to_leaf) {
        // structurally integer pendants are exact doubles; anything else
        // keeps floor(len) whole units and drops the final stub
        units = std::abs(len - rounded) <= 1e-12 ? static_cast<int>(rounded)
                                                 : static_cast<int>(std::floor(len));
      } else {
        if (std::abs(len - rounded) > tol)
          throw std::domain_error("graph_of: non-integer arc between branch points");
        units = static_cast<int>(rounded);
        if (units < 1)
          throw std::domain_error("graph_of: arc of non-positive integer length");
      }
      if (units == 0) continue;  // pendant stub shorter than one unit

      int a = out_vertex(s);
      for (int k = 1; k < units; ++k) {
        int mid = out.n++;
        out.add_edge(a, mid);
        a = mid;
      }
      if (to_leaf && std::abs(len - rounded) > tol) {
        // final unit vertex is a fresh leaf; the stub beyond it is gone
        int tail = out.n++;
        out.add_edge(a, tail);
      } else {
        out.add_edge(a, out_vertex(cur));
      }
    }
  }
  return out;
}

EdgeLengthGraph unit_realization(const Multigraph& g) {
  EdgeLengthGraph out;
  out.n = g.n;
  out.next_id = g.next_id;
  out.edges.reserve(g.edges.size());
  for (const auto& e : g.edges) out.edges.push_back({e.id, e.u, e.v, 1.0});
  return out;
}

bool in_class_ar(const EdgeLengthGraph& g, double r) {
  if (!(r > 0.0) || r >= 1.0)
    throw std::invalid_argument("in_class_ar: r must lie in (0,1)");
  KernelDecomposition kd = kernel(g);
  if (kd.surplus > 1.0 / r) return false;
  if (kd.surplus == 0) return true;
  double min_len = std::numeric_limits<double>::infinity();
  for (double l : kd.kernel_edge_lengths) min_len = std::min(min_len, l);
  return min_len >= r && kd.core_length <= 1.0 / r;
}

namespace {

struct IsoContext {
  int n;
  std::vector<std::vector<int>> ca, cb;  // adjacency counts; [v][v] = loops
  std::vector<std::pair<int, int>> sig_a, sig_b;  // (degree, loops)
  std::vector<int> order;                // a-side assignment order
  std::vector<int> map_a, used_b;
};

bool iso_backtrack(IsoContext& c, std::size_t pos) {
  if (pos == c.order.size()) return true;
  const int u = c.order[pos];
  for (int w = 0; w < c.n; ++w) {
    if (c.used_b[w] || c.sig_a[u] != c.sig_b[w]) continue;
    bool ok = c.ca[u][u] == c.cb[w][w];
    for (std::size_t k = 0; ok && k < pos; ++k) {
      const int x = c.order[k];
      if (c.ca[u][x] != c.cb[w][c.map_a[x]]) ok = false;
    }
    if (!ok) continue;
    c.map_a[u] = w;
    c.used_b[w] = 1;
    if (iso_backtrack(c, pos + 1)) return true;
    c.used_b[w] = 0;
  }
  return false;
}

}  // namespace

bool is_isomorphic(const Multigraph& a, const Multigraph& b) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  const int n = a.n;
  IsoContext c;
  c.n = n;
  c.ca.assign(n, std::vector<int>(n, 0));
  c.cb.assign(n, std::vector<int>(n, 0));
  for (const auto& e : a.edges) {
    if (e.u == e.v) ++c.ca[e.u][e.u];
    else { ++c.ca[e.u][e.v]; ++c.ca[e.v][e.u]; }
  }
  for (const auto& e : b.edges) {
    if (e.u == e.v) ++c.cb[e.u][e.u];
    else { ++c.cb[e.u][e.v]; ++c.cb[e.v][e.u]; }
  }
  auto da = a.degrees(), db = b.degrees();
  c.sig_a.resize(n);
  c.sig_b.resize(n);
  for (int v = 0; v < n; ++v) {
    c.sig_a[v] = {da[v], c.ca[v][v]};
    c.sig_b[v] = {db[v], c.cb[v][v]};
  }
  auto sa = c.sig_a, sb = c.sig_b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;

  c.order.resize(n);
  for (int v = 0; v < n; ++v) c.order[v] = v;
  std::sort(c.order.begin(), c.order.end(), [&](int x, int y) {
    return c.sig_a[x] > c.sig_a[y];  // high degree first narrows early
  });
  c.map_a.assign(n, -1);
  c.used_b.assign(n, 0);
  return iso_backtrack(c, 0);
}

namespace {

std::string ahu_code(int v, int parent,
                     const std::vector<std::vector<int>>& adj) {
  std::vector<std::string> child;
  for (int w : adj[v])
    if (w != parent) child.push_back(ahu_code(w, v, adj));
  std::sort(child.begin(), child.end());
  std::string out = "(";
  for (const auto& s : child) out += s;
  out += ")";
  return out;
}

}  // namespace

std::string tree_code(const Multigraph& tree) {
  if (static_cast<int>(tree.edges.size()) != tree.n - 1 || !is_connected(tree))
    throw std::invalid_argument("tree_code: input is not a tree");
  if (tree.n == 1) return "()";
  std::vector<std::vector<int>> adj(tree.n);
  for (const auto& e : tree.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  // peel to the centre
  std::vector<int> deg(tree.n);
  for (int v = 0; v < tree.n; ++v) deg[v] = static_cast<int>(adj[v].size());
  std::vector<int> layer;
  std::vector<char> removed(tree.n, 0);
  for (int v = 0; v < tree.n; ++v)
    if (deg[v] == 1) layer.push_back(v);
  int remaining = tree.n;
  while (remaining > 2) {
    std::vector<int> next;
    for (int v : layer) {
      removed[v] = 1;
      --remaining;
      for (int w : adj[v])
        if (!removed[w] && --deg[w] == 1) next.push_back(w);
    }
    layer = std::move(next);
  }
  std::vector<int> centres;
  for (int v = 0; v < tree.n; ++v)
    if (!removed[v]) centres.push_back(v);
  if (centres.size() == 1) return ahu_code(centres[0], -1, adj);
  std::string c1 = ahu_code(centres[0], centres[1], adj);
  std::string c2 = ahu_code(centres[1], centres[0], adj);
  if (c2 < c1) std::swap(c1, c2);
  return "[" + c1 + c2 + "]";
}

std::string to_text(const EdgeLengthGraph& g) {
  std::ostringstream os;
  os << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges)
    os << e.id << ' ' << e.u << ' ' << e.v << ' ' << format_double(e.len) << '\n';
  if (!g.mass.empty())
    for (int v = 0; v < g.n; ++v)
      os << "mass " << v << ' ' << format_double(g.mass[v]) << '\n';
  return os.str();
}

EdgeLengthGraph elg_from_text(const std::string& text) {
  std::istringstream is(text);
  EdgeLengthGraph g;
  std::size_t m = 0;
  if (!(is >> g.n >> m)) throw std::invalid_argument("elg_from_text: bad header");
  g.edges.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    LEdge e;
    if (!(is >> e.id >> e.u >> e.v >> e.len))
      throw std::invalid_argument("elg_from_text: bad edge line");
    g.next_id = std::max(g.next_id, e.id + 1);
    g.edges.push_back(e);
  }
  std::string tag;
  while (is >> tag) {
    if (tag != "mass") throw std::invalid_argument("elg_from_text: bad trailer");
    int v;
    double x;
    if (!(is >> v >> x)) throw std::invalid_argument("elg_from_text: bad mass line");
    if (g.mass.empty()) g.mass.assign(g.n, 0.0);
    g.mass.at(v) = x;
  }
  return g;
}

std::string to_text(const Multigraph& g) {
  std::ostringstream os;
  os << g.n << ' ' << g.edges.size() << '\n';
  for (const auto& e : g.edges) os << e.id << ' ' << e.u << ' ' << e.v << '\n';
  return os.str();
}

Multigraph multigraph_from_text(const std::string& text) {
  std::istringstream is(text);
  Multigraph g;
  std::size_t m = 0;
  if (!(is >> g.n >> m)) throw std::invalid_argument("multigraph_from_text: bad header");
  for (std::size_t i = 0; i < m; ++i) {
    MEdge e;
    if (!(is >> e.id >> e.u >> e.v))
      throw std::invalid_argument("multigraph_from_text: bad edge line");
    g.next_id = std::max(g.next_id, e.id + 1);
    g.edges.push_back(e);
  }
  return g;
}

UnitSubdivision unit_subdivision(const EdgeLengthGraph& g) {
  require_connected(is_connected(g), "unit_subdivision");
  const double tol = 1e-9;
  for (int d : g.degrees())
    if (d < 2) throw std::domain_error("unit_subdivision: graph must be leafless");
  UnitSubdivision out;
  out.graph.n = g.n;
  for (const auto& e : g.edges) {
    const double rounded = std::round(e.len);
    if (std::abs(e.len - rounded) > tol || rounded < 1.0)
      throw std::domain_error("unit_subdivision: non-integer edge length");
    const int units = static_cast<int>(rounded);
    int a = e.u;
    for (int k = 0; k < units; ++k) {
      const int b = (k + 1 == units) ? e.v : out.graph.n++;
      out.edge_of[{e.id, k}] = out.graph.add_edge(a, b);
      a = b;
    }
  }
  return out;
}

Multigraph random_connected_multigraph(int max_vertices, int max_edges, Rng& rng) {
  if (max_vertices < 1 || max_edges < 0)
    throw std::invalid_argument("random_connected_multigraph: bad bounds");
  for (;;) {
    Multigraph g;
    g.n = 1 + static_cast<int>(rng.below(max_vertices));
    const int emin = g.n - 1;
    if (emin > max_edges) continue;
    const int e = emin + static_cast<int>(rng.below(max_edges - emin + 1));
    for (int i = 0; i < e; ++i)
      g.add_edge(static_cast<int>(rng.below(g.n)), static_cast<int>(rng.below(g.n)));
    if (is_connected(g)) return g;
  }
}

}  // namespace mstlab
