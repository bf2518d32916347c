#pragma once

#include <cstdint>
#include <vector>

#include "mstlab/rgraph.hpp"
#include "mstlab/rng.hpp"

// Samplers for the continuum objects: Brownian motion with parabolic
// drift, its excursions above the running minimum, the trees those
// excursions encode, and the Poisson vertex identifications that turn
// the trees into the limit components. All paths live on a uniform
// time grid of mesh h.

namespace mstlab {

struct GridPath {
  double h = 0.0;
  std::vector<double> values;  // at times 0, h, 2h, ...
};

struct Excursion {
  double h = 0.0;
  std::vector<double> values;  // values[0] = values[back] = 0, interior > 0
  double sigma() const { return (static_cast<double>(values.size()) - 1.0) * h; }
};

// Vertex identifications dictated by Poisson points under the
// excursion: x is the grid index of the point, y its level, z the first
// grid index >= x where the excursion is back down to y.
struct GluePlan {
  struct Point {
    int x_index;
    double y_level;
    int z_index;
  };
  std::vector<Point> points;
};

// Tree encoded by an excursion through the pseudo-distance
//   d(x,x') = 2 e(x) + 2 e(x') - 4 min_{x..x'} e.
// Grid indices at zero pseudo-distance share a vertex; every vertex
// keeps its level, and parents have strictly smaller levels, so tree
// distances evaluate exactly as 2 lvl(u) + 2 lvl(v) - 4 lvl(lca).
struct ExcursionTree {
  EdgeLengthGraph graph;       // edge lengths are 2 * level differences
  std::vector<int> tau;        // grid index -> vertex
  std::vector<double> level;   // vertex -> excursion level
  std::vector<int> parent;     // vertex -> parent (-1 at the root)
  int root = 0;

  double distance(int u, int v) const;  // exact tree metric
  double height() const;                // max distance from the root
};

struct ContinuumComponent {
  EdgeLengthGraph graph;  // glued tree, grid mass h per vertex
  int surplus = 0;
  double sigma = 0.0;
};

inline double default_mesh(double lambda) {
  return 2e-4 * std::max(1.0, lambda);
}
inline double default_horizon(double lambda) {
  return std::max(10.0, 4.0 * lambda + 32.0);
}

// W(t) + lambda t - t^2/2 on the grid, Normal(0,h) increments.
GridPath sample_w_lambda(double lambda, double T, double h, std::uint64_t seed);

// Excursions of the path above its running minimum, endpoints clamped
// to zero, sorted by decreasing duration.
std::vector<Excursion> extract_excursions(const GridPath& path);

ExcursionTree tree_from_excursion(const Excursion& e);

// Poisson(h * sum values) points under the excursion; each point has a
// column x with probability proportional to values[x], level y uniform
// below values[x], and z the first passage back below y.
GluePlan poisson_glue_plan(const Excursion& e, std::uint64_t seed);

// Assemble the scaling-limit components at parameter lambda: excursion
// trees with Poisson gluing, in decreasing order of duration.
std::vector<ContinuumComponent> sample_g_lambda(double lambda, double h,
                                                std::uint64_t seed,
                                                int max_components);

// Cut every component back to a tree (cycle breaking run independently
// per component).
std::vector<ContinuumComponent> sample_m_lambda(double lambda, double h,
                                                std::uint64_t seed,
                                                int max_components);

// Core of a component conditioned on (mass sigma, surplus k, kernel K):
// K's edges receive lengths Dirichlet(1,...,1) * sqrt(sigma * Gamma)
// with Gamma ~ Gamma((3k-2)/2, rate 1/2).
EdgeLengthGraph construction1_core(double sigma, int k, const Multigraph& K,
                                   std::uint64_t seed);

// Full component conditioned the same way: one tree of mass sigma*X_i
// per kernel edge, X ~ Dirichlet(1/2,...,1/2), glued along K at two
// independent mass-measure points per tree.
ContinuumComponent construction2_component(double sigma, int k,
                                           const Multigraph& K, double h,
                                           std::uint64_t seed);

// Tree of total mass `mass` encoded by a normalized Brownian excursion
// (Vervaat transform of a bridge on a grid of ~1/h steps), distances
// scaled by sqrt(mass).
ExcursionTree sample_crt(double mass, double h, std::uint64_t seed);

// Connected loopless 3-regular multigraph with 3k-3 edges, by
// configuration-model pairing with rejection.
Multigraph random_3regular_kernel(int k, std::uint64_t seed);

}  // namespace mstlab
