#pragma once

#include <string>
#include <vector>

#include "fairbisect/vertex_set.hpp"

namespace fairbisect {

/// Rooted tree over node ids 0..n-1.
struct RootedTree {
  int root = 0;
  std::vector<int> parent;  // -1 at the root

  int size() const { return static_cast<int>(parent.size()); }
  std::vector<std::vector<int>> children() const;
  std::vector<std::vector<int>> adjacency() const;  // undirected view
  int depth() const;
};

/// Seeded random recursive tree rooted at 0.
RootedTree random_rooted_tree(int n, uint64_t seed);

/// ceil(log2 n) for n >= 1.
int ceil_log2(int n);

/// Tree partition of a tree T: a rooted block tree plus the block assignment
/// tau mapping each T-vertex to a block.
struct TreePartition {
  RootedTree blockTree;
  std::vector<int> assign;  // T-vertex -> block id

  int blockCount() const { return blockTree.size(); }
  std::vector<std::vector<int>> blocks() const;  // block id -> sorted T-vertices
};

/// A vertex b such that every component of tree minus b has at most
/// ceil(|V|/2) vertices; smallest id among the valid choices.
int balanced_bisector(const RootedTree& tree);

/// Recursive construction of a nice tree partition whose root block contains
/// the marked set M (1 <= |M| <= 2).  Blocks gain a balanced bisector and,
/// when the marks and bisector do not lie on a path, the junction vertex of
/// the three connecting paths.
TreePartition find_balanced_tp(const RootedTree& tree, const std::vector<int>& marked);

struct NicePartitionReport {
  bool validPartition = false;   // assignment total + edge condition
  bool depthOk = false;          // depth(blockTree) <= ceil(log2 |V(T)|)
  bool blockSizesOk = false;     // 1 <= |block| <= 4
  bool connectivityOk = false;   // every block subtree induces a subtree of T
  std::vector<int> sizeOneBlocks;  // reported, not failed
  std::vector<std::string> violations;

  bool all_ok() const { return validPartition && depthOk && blockSizesOk && connectivityOk; }
};

NicePartitionReport validate_nice_partition(const RootedTree& tree, const TreePartition& tp);

}  // namespace fairbisect
