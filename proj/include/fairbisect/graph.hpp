#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "fairbisect/vertex_set.hpp"

namespace fairbisect {

/// Per-color counts of a vertex subset; entry i-1 counts color i.
using ColorProfile = std::vector<int>;

ColorProfile profile_add(const ColorProfile& a, const ColorProfile& b);
ColorProfile profile_sub(const ColorProfile& a, const ColorProfile& b);
/// Componentwise a <= b.
bool profile_leq(const ColorProfile& a, const ColorProfile& b);
std::string profile_to_string(const ColorProfile& p);

/// Undirected simple graph with one color in 1..c per vertex.
struct ColoredGraph {
  int n = 0;
  int c = 0;
  std::vector<std::pair<int, int>> edges;  // normalized u < v, sorted, unique
  std::vector<int> color;                  // size n, values in 1..c
  std::vector<std::vector<int>> adj;

  /// Validates simplicity and color range; normalizes and sorts edges.
  static ColoredGraph create(int n, int c, std::vector<std::pair<int, int>> edges,
                             std::vector<int> color);

  bool has_edge(int u, int v) const;
  VertexSet all_vertices() const { return VertexSet::full(n); }
  /// Connected components as vertex sets, ordered by smallest member.
  std::vector<VertexSet> components() const;
  /// Components of the induced subgraph on `within`.
  std::vector<VertexSet> components_within(const VertexSet& within) const;
  VertexSet neighborhood(const VertexSet& s) const;  // N_G(s), excludes s
};

/// One Fair Bisection problem: graph, cut-order bound k, and per-color
/// targets r for the A side.
struct FairInstance {
  ColoredGraph graph;
  int k = 0;
  ColorProfile rTarget;
  ColorProfile cTotal;  // derived per-color totals

  static FairInstance create(ColoredGraph g, int k, ColorProfile rTarget);
};

/// Bipartition (A, B) of a ground vertex set.
struct EdgeCut {
  VertexSet groundSet;
  VertexSet sideA;

  static EdgeCut create(VertexSet ground, VertexSet a);
  VertexSet sideB() const { return groundSet - sideA; }
};

/// Number of graph edges with one endpoint in each side of the cut.
int cut_order(const ColoredGraph& g, const EdgeCut& cut);

ColorProfile color_profile(const ColoredGraph& g, const VertexSet& subset);

/// True iff the cut spans V(G), A carries exactly the target profile and the
/// order is at most k.
bool is_exact_fair(const FairInstance& inst, const EdgeCut& cut);

/// True iff |A|_i <= r_i(1+eps) and |B|_i <= (c_i - r_i)(1+eps) for every
/// color i, and the order is at most k.
bool is_eps_fair(const FairInstance& inst, const EdgeCut& cut, double eps);

/// Line-oriented instance text format:
///   p fairbis <n> <m> <c> <k>
///   v <id> <color>        (one line per vertex, ids 0-based)
///   e <u> <v>
///   r <r_1> ... <r_c>
/// '#' starts a comment.  Throws ParseError on malformed input.
FairInstance parse_instance(std::istream& in);
FairInstance parse_instance_text(const std::string& text);
std::string format_instance(const FairInstance& inst);

}  // namespace fairbisect
