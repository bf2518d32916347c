#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "mstlab/rng.hpp"

// Finite multigraphs with edge lengths, used as the computational
// stand-in for compact metric graphs: every leafless metric graph is
// the metric gluing of a finite multigraph with edge lengths, so the
// structure theory (core, kernel, surplus, cutting, gluing) is run on
// the combinatorial object. Edge ids are stable across operations that
// keep an edge; operations that create edges assign fresh ids.

namespace mstlab {

struct MEdge {
  int id;
  int u, v;  // u == v encodes a loop
};

struct Multigraph {
  int n = 0;
  std::vector<MEdge> edges;
  int next_id = 0;

  int add_edge(int u, int v) {
    edges.push_back({next_id, u, v});
    return next_id++;
  }
  // Loops contribute 2 to the degree.
  std::vector<int> degrees() const;
  int edge_count() const { return static_cast<int>(edges.size()); }
};

struct LEdge {
  int id;
  int u, v;
  double len;
};

struct EdgeLengthGraph {
  int n = 0;
  std::vector<LEdge> edges;
  std::vector<double> mass;  // optional; empty or size n
  int next_id = 0;

  int add_edge(int u, int v, double len) {
    edges.push_back({next_id, u, v, len});
    return next_id++;
  }
  Multigraph shape() const;
  std::vector<int> degrees() const;
  double total_length() const;
  double total_mass() const;
  int edge_count() const { return static_cast<int>(edges.size()); }
};

bool is_connected(const Multigraph& g);
bool is_connected(const EdgeLengthGraph& g);

// |E| - |V| + 1 of a connected multigraph.
int surplus(const Multigraph& g);
int surplus(const EdgeLengthGraph& g);

// Maximal subgraph of minimum degree two, as (vertex ids, edge ids) of
// the input. Empty for a tree (the "empty core" signal, not an error).
struct Core {
  std::vector<int> vertex_ids;
  std::vector<int> edge_ids;
  bool empty() const { return edge_ids.empty(); }
};
Core core(const Multigraph& g);

// Kernel: core with degree-2 vertices suppressed. Conventions: for a
// unicyclic graph the kernel multigraph is empty and the edge-length
// list holds the unique cycle length with r = that length; for a tree
// everything is empty and r = infinity.
struct KernelDecomposition {
  EdgeLengthGraph kernel;                         // empty when surplus <= 1
  std::vector<int> kernel_vertex_of;              // kernel vertex -> input vertex
  std::vector<std::vector<int>> kernel_edge_paths;  // kernel edge -> input edge ids
  std::vector<double> kernel_edge_lengths;        // per kernel edge (or {cycle len})
  std::vector<std::pair<int, std::vector<int>>> pendants;  // (core vertex, tree edge ids)
  int surplus = 0;
  double core_length = 0.0;
  double r = std::numeric_limits<double>::infinity();  // min core edge length
};
KernelDecomposition kernel(const EdgeLengthGraph& g);

// Edge ids whose removal keeps the graph connected (the non-bridges).
std::vector<int> conn_edges(const Multigraph& g);
std::vector<int> conn_edges(const EdgeLengthGraph& g);

// Total length of the non-bridge edges; positive iff surplus >= 1.
double conn_length(const EdgeLengthGraph& g);

// Cut at the interior point of a non-bridge edge, at distance t from
// the edge's u endpoint: the edge is replaced by two pendant segments
// ending at fresh zero-mass leaves. Surplus drops by exactly one.
EdgeLengthGraph cut_at_point(const EdgeLengthGraph& g, int edge_id, double t);

// Identify each vertex pair; masses add, degrees add, surplus rises by
// one per pair of previously connected, not yet identified vertices.
EdgeLengthGraph glue(const EdgeLengthGraph& g,
                     const std::vector<std::pair<int, int>>& pairs);

// The multigraph corresponding to a graph with integer branch-to-branch
// path lengths: unit subdivision, with trailing sub-unit pendant stubs
// dropped. Requires at least one vertex of degree >= 3.
Multigraph graph_of(const EdgeLengthGraph& g);

// Unit-length metric realization of a multigraph.
EdgeLengthGraph unit_realization(const Multigraph& g);

// Membership in A_r: surplus <= 1/r, min core edge length >= r, total
// core length <= 1/r (cycle length in [r, 1/r] for unicyclic inputs).
bool in_class_ar(const EdgeLengthGraph& g, double r);

// Backtracking multigraph isomorphism with degree refinement; intended
// for small graphs (kernels, unit subdivisions at desk scale).
bool is_isomorphic(const Multigraph& a, const Multigraph& b);

// Canonical code of a free tree (AHU on the centroid of the tree's
// center); equal codes <=> isomorphic trees.
std::string tree_code(const Multigraph& tree);

// Line-oriented text serialization with exact double round trip.
std::string to_text(const EdgeLengthGraph& g);
EdgeLengthGraph elg_from_text(const std::string& text);
std::string to_text(const Multigraph& g);
Multigraph multigraph_from_text(const std::string& text);

// Unit subdivision of a leafless integer-length graph, with provenance:
// edge_of maps (input edge id, unit index along it) to the id of the
// corresponding unit edge. Input vertices keep their ids.
struct UnitSubdivision {
  Multigraph graph;
  std::map<std::pair<int, int>, int> edge_of;
};
UnitSubdivision unit_subdivision(const EdgeLengthGraph& g);

// Random connected multigraph (loops and parallel edges allowed),
// uniform endpoints, resampled until connected.
Multigraph random_connected_multigraph(int max_vertices, int max_edges, Rng& rng);

}  // namespace mstlab
