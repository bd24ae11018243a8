#pragma once

#include "fairbisect/decomposition.hpp"
#include "fairbisect/tree_partition.hpp"

namespace fairbisect {

/// Tree decomposition obtained by unioning the bags of each block of a tree
/// partition of the input decomposition tree.
struct LiftedDecomposition {
  TreePartition partition;
  TreeDecomposition decomposition;  // tree = block tree, bag = beta_1
};

LiftedDecomposition lift_partition_to_decomposition(const ColoredGraph& g,
                                                    const TreeDecomposition& inputTd,
                                                    const TreePartition& tp);

/// Per-block augmentation: gamma picks the one input node of a block through
/// which a child block attaches; Y_t collects the adhesions of the block's
/// nodes plus the adhesions of the <= 4 cross edges to the parent block.
struct StarAugmentation {
  std::vector<int> gammaMap;      // block -> input decomposition node
  std::vector<VertexSet> ySets;   // block -> Y_t
};

StarAugmentation compute_Y_and_gamma(const TreeDecomposition& inputTd, const TreePartition& tp,
                                     int k);

/// The star-shaped decomposition over V(T) ∪ V(blockTree): block nodes carry
/// Y_t, input nodes carry Y_{tau(x)} ∪ beta(x).
TreeDecomposition build_star_decomposition(const ColoredGraph& g, const TreeDecomposition& inputTd,
                                           const TreePartition& tp, const StarAugmentation& aug);

/// Full pipeline: nice tree partition of the input tree, lift, augmentation,
/// star decomposition, compactification.  Postconditions (compact output,
/// adhesions <= 8k, depth <= 2*ceil(log2 n)) are checked; a violation aborts
/// with the failing stage named.
TreeDecomposition reduce_depth(const ColoredGraph& g, const TreeDecomposition& inputTd, int k,
                               int q);

}  // namespace fairbisect
