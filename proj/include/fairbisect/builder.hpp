#pragma once

#include <optional>

#include "fairbisect/decomposition.hpp"
#include "fairbisect/graph.hpp"

namespace fairbisect {

struct BuilderConfig {
  int k = 0;                      // cut-order parameter
  int q = 1;                      // unbreakability threshold, defaults to k+1
  long long enumerationBudget = 200'000'000;

  static BuilderConfig with_k(int k) { return BuilderConfig{k, k + 1}; }
};

/// Searches for an edge cut of g of order <= k leaving more than q vertices
/// of bagSet on both sides; nullopt when bagSet is (q, k)-unbreakable.
std::optional<EdgeCut> find_breaking_cut(const ColoredGraph& g, const VertexSet& bagSet, int q,
                                         int k, const UnbreakabilityOptions& opts = {});

/// Desk-scale construction of a compact rooted tree decomposition with
/// adhesions of size at most k and (q, k)-unbreakable bags, certified by
/// is_unbreakable before returning.  Recursively splits along breaking cuts;
/// throws BuilderError when no admissible split exists and the single-bag
/// fallback fails certification.
TreeDecomposition build_unbreakable_decomposition(const ColoredGraph& g,
                                                  const BuilderConfig& config);

}  // namespace fairbisect
