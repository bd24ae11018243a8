#pragma once

#include <functional>
#include <optional>

#include "fairbisect/graph.hpp"

namespace fairbisect {

/// Caps for the exhaustive solvers.
struct OracleBudget {
  int maxVertices = 20;       // 2^n bipartition enumeration cap
  int maxComponents = 42;     // meet-in-the-middle cap for the k = 0 path
};

/// Exhaustive ground-truth solver.  Enumerates bipartitions in ascending
/// bitmask order and returns the first cut with A-profile exactly rTarget and
/// order <= k, or nullopt.  For k = 0 on graphs beyond the bipartition budget
/// it falls back to a component-level meet-in-the-middle search (order-0 cuts
/// are exactly the unions of connected components).
std::optional<EdgeCut> exact_fair_bisection(const FairInstance& inst,
                                            const OracleBudget& budget = {});

/// Decides existence of an order-0 exact-fair cut via component profiles.
std::optional<EdgeCut> exact_zero_cut_fair(const FairInstance& inst,
                                           const OracleBudget& budget = {});

/// Enumerates every cut (A, B) of the subgraph G[region] - E(G[sigma]) in
/// ascending A-bitmask order, invoking visit(cut, order).  Return false from
/// visit to stop.  Reference semantics for DP-table certification tests.
void exact_region_cuts(const ColoredGraph& g, const VertexSet& region, const VertexSet& sigma,
                       const std::function<bool(const EdgeCut&, int)>& visit,
                       const OracleBudget& budget = {});

/// Convenience wrapper collecting the cuts accepted by the predicate.
std::vector<EdgeCut> collect_region_cuts(const ColoredGraph& g, const VertexSet& region,
                                         const VertexSet& sigma,
                                         const std::function<bool(const EdgeCut&, int)>& keep,
                                         const OracleBudget& budget = {});

}  // namespace fairbisect
