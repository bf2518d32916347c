#include "mstlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace mstlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<std::pair<int, double>>> weighted_adjacency(
    const EdgeLengthGraph& g) {
  std::vector<std::vector<std::pair<int, double>>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.u].push_back({e.v, e.len});
    adj[e.v].push_back({e.u, e.len});
  }
  return adj;
}

void dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
              int source, std::vector<double>& dist) {
  dist.assign(adj.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (auto [w, len] : adj[v]) {
      const double nd = d + len;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.push({nd, w});
      }
    }
  }
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

double FiniteMetricMeasureSpace::diameter() const {
  double top = 0.0;
  for (double x : d) top = std::max(top, x);
  return top;
}

double FiniteMetricMeasureSpace::total_mass() const {
  double s = 0.0;
  for (double m : mass) s += m;
  return s;
}

double FiniteMetricMeasureSpace::triangle_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, at(i, j) - (at(i, k) + at(k, j)));
  return worst;
}

FiniteMetricMeasureSpace realize(const EdgeLengthGraph& g, int vertex_cap) {
  if (!is_connected(g)) throw std::invalid_argument("realize: disconnected graph");
  if (g.n > vertex_cap)
    throw std::invalid_argument("realize: vertex count exceeds the APSP cap");
  FiniteMetricMeasureSpace s;
  s.n = g.n;
  s.d.assign(static_cast<std::size_t>(g.n) * g.n, 0.0);
  s.mass = g.mass.empty() ? std::vector<double>(g.n, 0.0) : g.mass;
  auto adj = weighted_adjacency(g);
  std::vector<double> dist;
  for (int v = 0; v < g.n; ++v) {
    dijkstra(adj, v, dist);
    for (int w = 0; w < g.n; ++w) s.at(v, w) = dist[w];
  }
  return s;
}

FiniteMetricMeasureSpace rescale(const FiniteMetricMeasureSpace& s,
                                 double alpha_dist, double alpha_mass) {
  if (!(alpha_dist > 0.0) || !(alpha_mass > 0.0))
    throw std::invalid_argument("rescale: factors must be positive");
  FiniteMetricMeasureSpace out = s;
  for (double& x : out.d) x *= alpha_dist;
  for (double& m : out.mass) m *= alpha_mass;
  return out;
}

DiameterResult diameter(const EdgeLengthGraph& g, bool exact) {
  if (!is_connected(g)) throw std::invalid_argument("diameter: disconnected graph");
  auto adj = weighted_adjacency(g);
  std::vector<double> dist;
  dijkstra(adj, 0, dist);
  int far = 0;
  for (int v = 0; v < g.n; ++v)
    if (dist[v] > dist[far]) far = v;
  dijkstra(adj, far, dist);
  double sweep = 0.0;
  for (int v = 0; v < g.n; ++v) sweep = std::max(sweep, dist[v]);

  const bool is_tree = static_cast<int>(g.edges.size()) == g.n - 1;
  if (is_tree) return {sweep, true};  // double sweep is exact on trees
  if (!exact) return {sweep, false};  // lower bound, flagged
  if (g.n > 20000)
    throw std::invalid_argument("diameter: graph too large for exact all-pairs");
  double best = 0.0;
  for (int v = 0; v < g.n; ++v) {
    dijkstra(adj, v, dist);
    for (int w = 0; w < g.n; ++w) best = std::max(best, dist[w]);
  }
  return {best, true};
}

namespace {

// Optimal ball cover of a tree: demands at the vertices, centers
// anywhere on the metric tree. Deepest demands are met by centers
// pushed as high as possible; a classic exchange argument shows this
// greedy is optimal.
int tree_cover(const EdgeLengthGraph& g, double r) {
  const int n = g.n;
  if (n == 1) return 1;
  auto adj = weighted_adjacency(g);

  std::vector<int> parent(n, -2), order;
  std::vector<double> up_len(n, 0.0);
  order.reserve(n);
  {
    std::vector<int> stack{0};
    parent[0] = -1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(v);
      for (auto [w, len] : adj[v]) {
        if (parent[w] != -2) continue;
        parent[w] = v;
        up_len[w] = len;
        stack.push_back(w);
      }
    }
  }

  std::vector<double> need(n, 0.0), have(n, -kInf);
  int count = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (have[v] >= need[v]) need[v] = -kInf;  // own subtree already served
    if (v == 0) break;
    const int p = parent[v];
    const double w = up_len[v];
    double nc = need[v], hc = have[v] - w;
    if (nc > -kInf) {
      if (nc + w > r) {
        ++count;  // center on the edge, r - nc above v
        hc = std::max(hc, 2.0 * r - nc - w);
        nc = -kInf;
      } else {
        nc += w;
      }
    }
    need[p] = std::max(need[p], nc);
    have[p] = std::max(have[p], hc);
  }
  if (need[0] > -kInf) ++count;  // final center at the root
  return count;
}

int farthest_point_net(const EdgeLengthGraph& g, double r) {
  const double r_eff = r * (1.0 + 1e-9);
  auto adj = weighted_adjacency(g);
  std::vector<double> mindist(g.n, kInf);
  using Item = std::pair<double, int>;
  int centers = 0;
  int next = 0;
  for (;;) {
    ++centers;
    // incremental multi-source relaxation from the new center
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    mindist[next] = 0.0;
    heap.push({0.0, next});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > mindist[v]) continue;
      for (auto [w, len] : adj[v]) {
        const double nd = d + len;
        if (nd < mindist[w]) {
          mindist[w] = nd;
          heap.push({nd, w});
        }
      }
    }
    next = 0;
    for (int v = 0; v < g.n; ++v)
      if (mindist[v] > mindist[next]) next = v;
    if (mindist[next] <= r_eff) return centers;
  }
}

// small dynamic bitset
struct Bits {
  std::vector<std::uint64_t> w;
  explicit Bits(std::size_t n) : w((n + 63) / 64, 0) {}
  void set(std::size_t i) { w[i >> 6] |= 1ULL << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1ULL; }
};

struct CoverProblem {
  int points = 0;
  std::vector<Bits> ball;       // candidate center -> covered points
  std::vector<int> ball_size;
  std::vector<std::vector<int>> covered_by;  // point -> centers covering it
  int best = 0;
  long long nodes = 0;

  int uncovered_count(const std::vector<std::uint64_t>& cov) const {
    int cnt = 0;
    for (std::size_t k = 0; k < cov.size(); ++k)
      cnt += 64 - __builtin_popcountll(cov[k]);
    // trailing bits beyond `points` were preset to 1
    return cnt;
  }

  void search(std::vector<std::uint64_t>& cov, int used) {
    if (++nodes > 40'000'000)
      throw std::runtime_error("covering_number_exact: search budget exceeded");
    int first_uncovered = -1;
    for (std::size_t k = 0; k < cov.size() && first_uncovered < 0; ++k) {
      if (~cov[k]) {
        const int bit = __builtin_ctzll(~cov[k]);
        first_uncovered = static_cast<int>(k * 64 + bit);
      }
    }
    if (first_uncovered < 0) {
      best = std::min(best, used);
      return;
    }
    // lower bound: remaining demand / largest ball
    int max_ball = 1;
    for (int b : ball_size) max_ball = std::max(max_ball, b);
    const int remaining = uncovered_count(cov);
    if (used + (remaining + max_ball - 1) / max_ball >= best) return;

    // branch on the point with the fewest covering centers
    int pivot = first_uncovered;
    std::size_t fewest = covered_by[pivot].size();
    for (std::size_t k = 0; k < cov.size(); ++k) {
      std::uint64_t open = ~cov[k];
      while (open) {
        const int p = static_cast<int>(k * 64 + __builtin_ctzll(open));
        open &= open - 1;
        if (p >= points) break;
        if (covered_by[p].size() < fewest) {
          fewest = covered_by[p].size();
          pivot = p;
        }
      }
    }
    std::vector<int> branches = covered_by[pivot];
    std::sort(branches.begin(), branches.end(),
              [&](int x, int y) { return ball_size[x] > ball_size[y]; });
    for (int c : branches) {
      std::vector<std::uint64_t> next = cov;
      for (std::size_t k = 0; k < next.size(); ++k) next[k] |= ball[c].w[k];
      search(next, used + 1);
    }
  }
};

}  // namespace

int covering_number_greedy(const EdgeLengthGraph& g, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("covering_number_greedy: r <= 0");
  if (!is_connected(g))
    throw std::invalid_argument("covering_number_greedy: disconnected graph");
  if (static_cast<int>(g.edges.size()) == g.n - 1)
    return tree_cover(g, r * (1.0 + 1e-9));
  return farthest_point_net(g, r);
}

int covering_number_net(const EdgeLengthGraph& g, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("covering_number_net: r <= 0");
  if (!is_connected(g))
    throw std::invalid_argument("covering_number_net: disconnected graph");
  return farthest_point_net(g, r);
}

EdgeLengthGraph subdivide_edges(const EdgeLengthGraph& g, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("subdivide_edges: delta <= 0");
  EdgeLengthGraph out;
  out.n = g.n;
  for (const auto& e : g.edges) {
    const int pieces = std::max(1, static_cast<int>(std::ceil(e.len / delta)));
    const double step = e.len / pieces;
    int a = e.u;
    for (int k = 0; k < pieces; ++k) {
      const int b = (k + 1 == pieces) ? e.v : out.n++;
      out.add_edge(a, b, step);
      a = b;
    }
  }
  return out;
}

int covering_number_exact(const EdgeLengthGraph& g, double r,
                          int subdivisions_per_radius) {
  if (!(r > 0.0)) throw std::invalid_argument("covering_number_exact: r <= 0");
  if (!is_connected(g))
    throw std::invalid_argument("covering_number_exact: disconnected graph");
  const double r_eff = r * (1.0 + 1e-9);
  const EdgeLengthGraph fine = subdivide_edges(g, r / subdivisions_per_radius);
  const int P = fine.n;
  if (P > 4096)
    throw std::invalid_argument("covering_number_exact: instance too large");

  auto adj = weighted_adjacency(fine);
  CoverProblem prob;
  prob.points = P;
  prob.ball.reserve(P);
  prob.ball_size.resize(P);
  prob.covered_by.assign(P, {});
  std::vector<double> dist;
  for (int c = 0; c < P; ++c) {
    dijkstra(adj, c, dist);
    Bits b(P);
    int size = 0;
    for (int p = 0; p < P; ++p) {
      if (dist[p] <= r_eff) {
        b.set(p);
        prob.covered_by[p].push_back(c);
        ++size;
      }
    }
    prob.ball.push_back(std::move(b));
    prob.ball_size[c] = size;
  }

  // greedy incumbent
  {
    std::vector<std::uint64_t> cov((P + 63) / 64, 0);
    for (int i = P; i < static_cast<int>(cov.size()) * 64; ++i)
      cov[i >> 6] |= 1ULL << (i & 63);
    int used = 0;
    for (;;) {
      bool done = true;
      for (auto wd : cov)
        if (~wd) done = false;
      if (done) break;
      int bestc = -1, bestgain = -1;
      for (int c = 0; c < P; ++c) {
        int gain = 0;
        for (std::size_t k = 0; k < cov.size(); ++k)
          gain += __builtin_popcountll(prob.ball[c].w[k] & ~cov[k]);
        if (gain > bestgain) {
          bestgain = gain;
          bestc = c;
        }
      }
      for (std::size_t k = 0; k < cov.size(); ++k) cov[k] |= prob.ball[bestc].w[k];
      ++used;
    }
    prob.best = used;
  }

  std::vector<std::uint64_t> cov((P + 63) / 64, 0);
  for (int i = P; i < static_cast<int>(cov.size()) * 64; ++i)
    cov[i >> 6] |= 1ULL << (i & 63);
  prob.search(cov, 0);
  return prob.best;
}

double minkowski_slope(const EdgeLengthGraph& g, const std::vector<double>& radii) {
  if (radii.size() < 4)
    throw std::invalid_argument("minkowski_slope: need at least 4 radii");
  double lo = kInf, hi = 0.0;
  for (double r : radii) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (std::log10(hi / lo) < 1.5 - 1e-9)
    throw std::invalid_argument("minkowski_slope: radii must span 1.5 decades");

  std::vector<double> xs, ys;
  for (double r : radii) {
    const int count = covering_number_greedy(g, r);
    if (count < 10 || count > g.n / 10) continue;  // saturation guard
    xs.push_back(std::log(1.0 / r));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (xs.size() < 2)
    throw std::invalid_argument("minkowski_slope: too few usable radii");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

std::vector<double> default_radii(const EdgeLengthGraph& g, int count) {
  const double diam = diameter(g, false).value;
  std::vector<double> radii;
  double r = diam / 2.0;
  for (int i = 0; i < count; ++i) {
    radii.push_back(r);
    r /= std::sqrt(2.0);
  }
  return radii;
}

double distortion(const Correspondence& c, const FiniteMetricMeasureSpace& a,
                  const FiniteMetricMeasureSpace& b) {
  double dis = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i; j < c.size(); ++j) {
      const auto [x, xp] = c[i];
      const auto [y, yp] = c[j];
      dis = std::max(dis, std::abs(a.at(x, y) - b.at(xp, yp)));
    }
  return dis;
}

namespace {

struct GhSearch {
  const FiniteMetricMeasureSpace *a, *b;
  Correspondence pairs;
  Correspondence best_pairs;
  double best;

  double added_dis(int x, int xp) const {
    double dis = 0.0;
    for (const auto& [y, yp] : pairs)
      dis = std::max(dis, std::abs(a->at(x, y) - b->at(xp, yp)));
    return dis;
  }

  void assign_a(int i, double dis) {
    if (dis >= best) return;
    if (i == a->n) {
      assign_b(0, dis);
      return;
    }
    for (int w = 0; w < b->n; ++w) {
      const double d2 = std::max(dis, added_dis(i, w));
      if (d2 >= best) continue;
      pairs.push_back({i, w});
      assign_a(i + 1, d2);
      pairs.pop_back();
    }
  }

  void assign_b(int j, double dis) {
    if (dis >= best) return;
    if (j == b->n) {
      best = dis;
      best_pairs = pairs;
      return;
    }
    for (int x = 0; x < a->n; ++x) {
      const double d2 = std::max(dis, added_dis(x, j));
      if (d2 >= best) continue;
      pairs.push_back({x, j});
      assign_b(j + 1, d2);
      pairs.pop_back();
    }
  }
};

}  // namespace

GhResult gh_exact(const FiniteMetricMeasureSpace& a,
                  const FiniteMetricMeasureSpace& b) {
  if (a.n + b.n > 12)
    throw std::invalid_argument("gh_exact: combined size exceeds 12 points");
  if (a.n == 0 || b.n == 0)
    throw std::invalid_argument("gh_exact: empty space");

  // full product correspondence as the initial incumbent
  Correspondence full;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < b.n; ++j) full.push_back({i, j});
  GhSearch search{&a, &b, {}, full, distortion(full, a, b) + 1e-15};
  search.assign_a(0, 0.0);
  return {search.best / 2.0, search.best_pairs};
}

double ghp_upper_bound(const FiniteMetricMeasureSpace& a,
                       const FiniteMetricMeasureSpace& b,
                       const Correspondence& c, const std::vector<double>& pi) {
  if (pi.size() != static_cast<std::size_t>(a.n) * b.n)
    throw std::invalid_argument("ghp_upper_bound: coupling has wrong shape");
  for (double w : pi)
    if (w < 0.0) throw std::invalid_argument("ghp_upper_bound: negative coupling");
  {
    std::vector<char> hit_a(a.n, 0), hit_b(b.n, 0);
    for (const auto& [x, y] : c) {
      hit_a.at(x) = 1;
      hit_b.at(y) = 1;
    }
    for (char h : hit_a)
      if (!h) throw std::invalid_argument("ghp_upper_bound: correspondence misses a point");
    for (char h : hit_b)
      if (!h) throw std::invalid_argument("ghp_upper_bound: correspondence misses a point");
  }

  const double dis = distortion(c, a, b);

  // discrepancy D(pi) = |mass_a - row sums| + |mass_b - column sums|
  double discrepancy = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < b.n; ++j) row += pi[static_cast<std::size_t>(i) * b.n + j];
    discrepancy += std::abs(a.mass[i] - row);
  }
  for (int j = 0; j < b.n; ++j) {
    double col = 0.0;
    for (int i = 0; i < a.n; ++i) col += pi[static_cast<std::size_t>(i) * b.n + j];
    discrepancy += std::abs(b.mass[j] - col);
  }

  std::vector<char> in_c(static_cast<std::size_t>(a.n) * b.n, 0);
  for (const auto& [x, y] : c) in_c[static_cast<std::size_t>(x) * b.n + y] = 1;
  double off = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k)
    if (!in_c[k]) off += pi[k];

  return std::max({dis / 2.0, discrepancy, off});
}

std::string to_csv(const FiniteMetricMeasureSpace& s) {
  std::ostringstream os;
  os << s.n << '\n';
  for (int i = 0; i < s.n; ++i) {
    for (int j = 0; j < s.n; ++j) {
      if (j) os << ',';
      os << format_double(s.at(i, j));
    }
    os << '\n';
  }
  for (int i = 0; i < s.n; ++i) {
    if (i) os << ',';
    os << format_double(s.mass[i]);
  }
  os << '\n';
  return os.str();
}

FiniteMetricMeasureSpace space_from_csv(const std::string& text) {
  std::istringstream is(text);
  FiniteMetricMeasureSpace s;
  std::string line;
  if (!std::getline(is, line))
    throw std::invalid_argument("space_from_csv: empty input");
  s.n = std::stoi(line);
  auto parse_row = [](const std::string& row, int expect) {
    std::vector<double> out;
    std::istringstream rs(row);
    std::string cell;
    while (std::getline(rs, cell, ',')) out.push_back(std::stod(cell));
    if (static_cast<int>(out.size()) != expect)
      throw std::invalid_argument("space_from_csv: bad row width");
    return out;
  };
  s.d.reserve(static_cast<std::size_t>(s.n) * s.n);
  for (int i = 0; i < s.n; ++i) {
    if (!std::getline(is, line))
      throw std::invalid_argument("space_from_csv: missing matrix row");
    for (double x : parse_row(line, s.n)) s.d.push_back(x);
  }
  if (!std::getline(is, line))
    throw std::invalid_argument("space_from_csv: missing mass row");
  s.mass = parse_row(line, s.n);
  return s;
}

}  // namespace mstlab
