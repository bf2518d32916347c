#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mstlab/rgraph.hpp"

// Finite metric-measure computations: shortest-path realizations of
// edge-length graphs, covering numbers and box-counting slopes, exact
// Gromov-Hausdorff distance at tiny sizes, and certified upper bounds
// for the Gromov-Hausdorff-Prokhorov distance.

namespace mstlab {

struct FiniteMetricMeasureSpace {
  int n = 0;
  std::vector<double> d;     // n*n, symmetric, zero diagonal
  std::vector<double> mass;  // size n

  double& at(int i, int j) { return d[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return d[static_cast<std::size_t>(i) * n + j]; }
  double diameter() const;
  double total_mass() const;
  // max violation of the triangle inequality (0 for a true metric)
  double triangle_defect() const;
};

// All-pairs shortest paths over the vertices (Dijkstra per source).
FiniteMetricMeasureSpace realize(const EdgeLengthGraph& g, int vertex_cap = 4096);

FiniteMetricMeasureSpace rescale(const FiniteMetricMeasureSpace& s,
                                 double alpha_dist, double alpha_mass);

struct DiameterResult {
  double value = 0.0;
  bool exact = true;
};

// Exact: double sweep on trees, all-pairs otherwise. Heuristic: double
// sweep used as a lower bound on cyclic graphs, flagged inexact.
DiameterResult diameter(const EdgeLengthGraph& g, bool exact = true);

// Greedy covering count with balls of radius r. Trees get the optimal
// deepest-demand-first cover (centers anywhere on the tree, demands at
// the vertices); cyclic graphs get a farthest-point net, which is
// sandwiched between N(X, r) and N(X, r/2).
int covering_number_greedy(const EdgeLengthGraph& g, double r);

// Farthest-point net regardless of shape (the matched strategy used
// when two graphs must be compared under the same algorithm).
int covering_number_net(const EdgeLengthGraph& g, double r);

// Exact minimal covering of the subdivided metric realization by
// branch and bound; small instances only.
int covering_number_exact(const EdgeLengthGraph& g, double r,
                          int subdivisions_per_radius = 8);

// Split every edge into pieces of length at most delta.
EdgeLengthGraph subdivide_edges(const EdgeLengthGraph& g, double delta);

// Least-squares slope of log N(r) against log(1/r), keeping only radii
// with 10 <= N <= |V|/10 to avoid saturation at either end.
double minkowski_slope(const EdgeLengthGraph& g, const std::vector<double>& radii);

// Geometric radius grid (ratio sqrt(2)) descending from diam/2.
std::vector<double> default_radii(const EdgeLengthGraph& g, int count = 14);

using Correspondence = std::vector<std::pair<int, int>>;

// sup |d(x,y) - d'(x',y')| over pairs of correspondence entries.
double distortion(const Correspondence& c, const FiniteMetricMeasureSpace& a,
                  const FiniteMetricMeasureSpace& b);

struct GhResult {
  double distance = 0.0;
  Correspondence witness;  // achieves 2 * distance as its distortion
};

// Exact Gromov-Hausdorff distance (half the minimal distortion over
// correspondences), branch and bound; requires |a| + |b| <= 12.
GhResult gh_exact(const FiniteMetricMeasureSpace& a,
                  const FiniteMetricMeasureSpace& b);

// Evaluates max( dis(C)/2, D(pi; mass_a, mass_b), pi(C^c) ); any such
// value upper-bounds the Gromov-Hausdorff-Prokhorov distance. pi is a
// dense |a| x |b| coupling candidate.
double ghp_upper_bound(const FiniteMetricMeasureSpace& a,
                       const FiniteMetricMeasureSpace& b,
                       const Correspondence& c, const std::vector<double>& pi);

// CSV interchange: n, then the distance matrix rows, then the masses.
std::string to_csv(const FiniteMetricMeasureSpace& s);
FiniteMetricMeasureSpace space_from_csv(const std::string& text);

}  // namespace mstlab
