#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fairbisect/graph.hpp"

namespace fairbisect {

/// Rooted tree decomposition: parent links over node ids 0..size-1 plus one
/// bag per node.
struct TreeDecomposition {
  int root = 0;
  std::vector<int> parent;  // -1 at the root
  std::vector<VertexSet> bag;

  int size() const { return static_cast<int>(bag.size()); }
  std::vector<std::vector<int>> children() const;
  /// Node depths in edges; root has depth 0.
  std::vector<int> depths() const;
  int depth() const;
  /// Nodes in BFS order from the root.
  std::vector<int> bfs_order() const;
};

/// sigma(t) = bag(t) ∩ bag(parent(t)); empty at the root.
VertexSet adhesion(const TreeDecomposition& td, int node);
/// gamma(t) = union of bags over the subtree rooted at t.
VertexSet cone(const TreeDecomposition& td, int node);
/// alpha(t) = gamma(t) \ sigma(t).
VertexSet alpha(const TreeDecomposition& td, int node);

/// Edge list of an induced subgraph with the edges inside `sigma` removed.
struct Subgraph {
  VertexSet vertices;
  std::vector<std::pair<int, int>> edges;
};

/// G_t = G[gamma(t)] - E(G[sigma(t)]).
Subgraph subgraph_Gt(const ColoredGraph& g, const TreeDecomposition& td, int node);
Subgraph induced_minus_sigma(const ColoredGraph& g, const VertexSet& vertices,
                             const VertexSet& sigma);

struct DecompositionReport {
  bool valid = false;  // holds iff violations is empty
  int maxAdhesion = 0;
  int depth = 0;
  bool compact = false;
  std::vector<std::string> violations;  // axiom (T1-T3) and structure findings
  std::vector<std::string> notes;       // compactness findings, informational
};

/// Checks the tree-decomposition axioms (T1)-(T3) plus structural sanity and
/// reports adhesion size, depth and compactness.  Never throws; findings land
/// in the report.  A disconnected graph's root node is exempt from the
/// compactness connectivity requirement (per-component subtrees hang under an
/// empty root).
DecompositionReport validate(const ColoredGraph& g, const TreeDecomposition& td);

struct UnbreakabilityOptions {
  /// Bipartition enumeration is used up to this many vertices; beyond it the
  /// checker enumerates edge subsets of size <= s and the cuts they induce.
  int bipartitionLimit = 20;
  long long enumerationBudget = 200'000'000;
};

struct UnbreakabilityResult {
  bool unbreakable = false;
  std::optional<EdgeCut> witness;  // breaking cut when unbreakable is false
};

/// Decides whether bagSet is (q, s)-unbreakable in g: every edge cut of order
/// at most s leaves at most q vertices of bagSet on one side.  Returns a
/// breaking-cut witness otherwise.  Throws BudgetError beyond the configured
/// enumeration budget.
UnbreakabilityResult is_unbreakable(const ColoredGraph& g, const VertexSet& bagSet, int q, int s,
                                    const UnbreakabilityOptions& opts = {});

/// Rebuilds td into a compact decomposition: every non-root part alpha(t) is
/// non-empty and connected with N_G(alpha(t)) = sigma(t).  Output bags are
/// subsets of input bags; depth and adhesion sizes do not increase.
TreeDecomposition compactify(const ColoredGraph& g, const TreeDecomposition& td);

/// Interchange document: {"nodes": [{"id", "parent", "bag"}...]}.
std::string decomposition_to_json(const TreeDecomposition& td);
TreeDecomposition decomposition_from_json(const std::string& text, int graphN);

}  // namespace fairbisect
