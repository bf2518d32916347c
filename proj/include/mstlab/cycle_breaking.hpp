#pragma once

#include <map>
#include <vector>

#include "mstlab/rgraph.hpp"
#include "mstlab/rng.hpp"

// Cycle breaking: repeatedly remove a uniform non-disconnecting edge
// (discrete kernel K) or cut at a length-random point of the
// non-disconnecting part (continuum kernel). The fixed point is a
// spanning tree, and the law of K^infinity equals the law of the
// minimum spanning tree under exchangeable distinct edge weights.

namespace mstlab {

// One step of K: removes a uniform non-disconnecting edge, or returns
// the graph unchanged when it is already a tree.
Multigraph k_step(const Multigraph& g, Rng& rng);

// K applied until the surplus is zero.
Multigraph k_infinity(const Multigraph& g, Rng& rng);

// A distribution over spanning trees, keyed by the sorted ids of the
// surviving edges.
using SpanningTreeLaw = std::map<std::vector<int>, double>;

// Exact MST law by enumerating all |E|! weight orderings (|E| <= 9).
SpanningTreeLaw mst_law_exact(const Multigraph& g);

// Exact law of K^infinity by memoized recursion over surviving edge
// sets (|E| <= 10).
SpanningTreeLaw k_infinity_law_exact(const Multigraph& g);

// Total variation distance between two spanning-tree laws.
double law_tv_distance(const SpanningTreeLaw& a, const SpanningTreeLaw& b);

// One step of the continuum kernel: pick a non-bridge edge with
// probability proportional to its length, cut at a uniform interior
// point. Identity on trees.
EdgeLengthGraph continuum_k_step(const EdgeLengthGraph& g, Rng& rng);

// Record of a full cutting run; cut edge ids always refer to edges of
// the input graph (pendant pieces created by earlier cuts are bridges
// and can never be cut again).
struct CutTrace {
  struct Step {
    int edge_id;
    double t;
    int surplus_after;
  };
  std::vector<Step> steps;
  std::vector<EdgeLengthGraph> graphs;  // filled when recording is requested
};

// The continuum kernel applied until surplus zero, with its trace.
std::pair<EdgeLengthGraph, CutTrace> cut(const EdgeLengthGraph& g, Rng& rng,
                                         bool record_graphs = false);

}  // namespace mstlab
