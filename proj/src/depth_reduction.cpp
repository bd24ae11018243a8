#include "fairbisect/depth_reduction.hpp"

#include <algorithm>
#include <string>

#include "fairbisect/errors.hpp"

namespace fairbisect {

LiftedDecomposition lift_partition_to_decomposition(const ColoredGraph& g,
                                                    const TreeDecomposition& inputTd,
                                                    const TreePartition& tp) {
  if (static_cast<int>(tp.assign.size()) != inputTd.size())
    throw std::domain_error("tree partition is not over the input decomposition tree");

  LiftedDecomposition out;
  out.partition = tp;
  out.decomposition.root = tp.blockTree.root;
  out.decomposition.parent = tp.blockTree.parent;
  out.decomposition.bag.assign(tp.blockCount(), VertexSet(g.n));
  for (int x = 0; x < inputTd.size(); ++x)
    out.decomposition.bag[tp.assign[x]] |= inputTd.bag[x];

  DecompositionReport rep = validate(g, out.decomposition);
  if (!rep.valid)
    throw PipelineError("lifted pair (blockTree, beta_1) is not a tree decomposition: " +
                        rep.violations[0]);
  return out;
}

StarAugmentation compute_Y_and_gamma(const TreeDecomposition& inputTd, const TreePartition& tp,
                                     int k) {
  const int n = inputTd.bag.empty() ? 0 : inputTd.bag[0].capacity();
  for (int x = 0; x < inputTd.size(); ++x) {
    if (adhesion(inputTd, x).count() > k)
      throw std::domain_error("input adhesion exceeds k; Y-set bound needs adhesions <= k");
  }

  auto blocks = tp.blocks();
  const int numBlocks = tp.blockCount();
  StarAugmentation aug;
  aug.gammaMap.assign(numBlocks, -1);
  aug.ySets.assign(numBlocks, VertexSet(n));

  // Y_t: adhesions of the block's own nodes plus adhesions of the tree edges
  // crossing from the parent block into this block.
  for (int t = 0; t < numBlocks; ++t) {
    VertexSet y(n);
    for (int x : blocks[t]) y |= adhesion(inputTd, x);
    if (t != tp.blockTree.root) {
      int crossEdges = 0;
      for (int x : blocks[t]) {
        if (x == inputTd.root) continue;
        if (tp.assign[inputTd.parent[x]] == tp.blockTree.parent[t]) ++crossEdges;
      }
      for (int x : blocks[tp.blockTree.parent[t]]) {
        if (x == inputTd.root) continue;
        if (tp.assign[inputTd.parent[x]] == t) {
          y |= adhesion(inputTd, x);
          ++crossEdges;
        }
      }
      if (crossEdges > 4)
        throw PipelineError("block " + std::to_string(t) + " has " +
                            std::to_string(crossEdges) + " cross edges; expected <= 4");
    }
    if (y.count() > 8 * k)
      throw PipelineError("block " + std::to_string(t) + " has |Y| = " +
                          std::to_string(y.count()) + " > 8k");
    aug.ySets[t] = std::move(y);
  }

  // beta_1 per block, for the gamma choice.
  std::vector<VertexSet> beta1(numBlocks, VertexSet(n));
  for (int x = 0; x < inputTd.size(); ++x) beta1[tp.assign[x]] |= inputTd.bag[x];

  aug.gammaMap[tp.blockTree.root] = inputTd.root;
  auto blockChildren = tp.blockTree.children();
  for (int t = 0; t < numBlocks; ++t) {
    for (int tc : blockChildren[t]) {
      int chosen = -1;
      for (int x : blocks[t]) {
        if ((beta1[tc] & inputTd.bag[x]).is_subset_of(aug.ySets[t])) continue;
        if (chosen >= 0)
          throw PipelineError("two nodes of block " + std::to_string(t) +
                              " meet child block " + std::to_string(tc) +
                              " outside Y; expected at most one");
        chosen = x;
      }
      aug.gammaMap[tc] = (chosen >= 0) ? chosen : blocks[t].front();
    }
  }
  return aug;
}

TreeDecomposition build_star_decomposition(const ColoredGraph& g, const TreeDecomposition& inputTd,
                                           const TreePartition& tp, const StarAugmentation& aug) {
  const int numBlocks = tp.blockCount();
  const int numInput = inputTd.size();
  // Block t -> node t; input node x -> node numBlocks + x.
  TreeDecomposition star;
  star.parent.assign(numBlocks + numInput, -1);
  star.bag.assign(numBlocks + numInput, VertexSet(g.n));
  star.root = tp.blockTree.root;

  for (int t = 0; t < numBlocks; ++t) {
    star.bag[t] = aug.ySets[t];
    if (t != tp.blockTree.root) {
      int gammaNode = aug.gammaMap[t];
      if (tp.assign[gammaNode] != tp.blockTree.parent[t])
        throw PipelineError("gamma of a child block lies outside the parent block");
      star.parent[t] = numBlocks + gammaNode;
    }
  }
  for (int x = 0; x < numInput; ++x) {
    star.bag[numBlocks + x] = aug.ySets[tp.assign[x]] | inputTd.bag[x];
    star.parent[numBlocks + x] = tp.assign[x];
  }

  DecompositionReport rep = validate(g, star);
  if (!rep.valid)
    throw PipelineError("star decomposition is not a tree decomposition: " + rep.violations[0]);
  return star;
}

TreeDecomposition reduce_depth(const ColoredGraph& g, const TreeDecomposition& inputTd, int k,
                               int q) {
  (void)q;  // unbreakability of the input is the caller's contract
  DecompositionReport inRep = validate(g, inputTd);
  if (!inRep.valid)
    throw std::domain_error("reduce_depth: input decomposition invalid: " + inRep.violations[0]);
  if (inRep.maxAdhesion > k)
    throw std::domain_error("reduce_depth: input adhesion " + std::to_string(inRep.maxAdhesion) +
                            " exceeds k = " + std::to_string(k));

  RootedTree shape;
  shape.root = inputTd.root;
  shape.parent = inputTd.parent;
  TreePartition tp = find_balanced_tp(shape, {inputTd.root});

  LiftedDecomposition lifted = lift_partition_to_decomposition(g, inputTd, tp);
  if (lifted.decomposition.depth() > ceil_log2(std::max(1, inputTd.size())))
    throw PipelineError("lifted decomposition exceeds the log-depth bound");

  StarAugmentation aug = compute_Y_and_gamma(inputTd, tp, k);
  TreeDecomposition star = build_star_decomposition(g, inputTd, tp, aug);

  DecompositionReport starRep = validate(g, star);
  if (starRep.maxAdhesion > 8 * k)
    throw PipelineError("star decomposition adhesion " + std::to_string(starRep.maxAdhesion) +
                        " exceeds 8k");

  TreeDecomposition out = compactify(g, star);
  DecompositionReport rep = validate(g, out);
  if (!rep.valid || !rep.compact)
    throw PipelineError("compactified output failed validation");
  if (rep.maxAdhesion > 8 * k)
    throw PipelineError("output adhesion " + std::to_string(rep.maxAdhesion) + " exceeds 8k");
  if (g.n >= 1 && rep.depth > 2 * ceil_log2(g.n))
    throw PipelineError("output depth " + std::to_string(rep.depth) + " exceeds 2*ceil(log2 n) = " +
                        std::to_string(2 * ceil_log2(g.n)));
  return out;
}

}  // namespace fairbisect
