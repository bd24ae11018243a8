#include "fairbisect/tree_partition.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "fairbisect/errors.hpp"
#include "fairbisect/rng.hpp"

namespace fairbisect {

std::vector<std::vector<int>> RootedTree::children() const {
  std::vector<std::vector<int>> ch(size());
  for (int v = 0; v < size(); ++v)
    if (v != root) ch[parent[v]].push_back(v);
  return ch;
}

std::vector<std::vector<int>> RootedTree::adjacency() const {
  std::vector<std::vector<int>> adj(size());
  for (int v = 0; v < size(); ++v) {
    if (v == root) continue;
    adj[v].push_back(parent[v]);
    adj[parent[v]].push_back(v);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

int RootedTree::depth() const {
  auto ch = children();
  std::vector<int> d(size(), 0);
  int mx = 0;
  std::queue<int> q;
  q.push(root);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    mx = std::max(mx, d[v]);
    for (int w : ch[v]) {
      d[w] = d[v] + 1;
      q.push(w);
    }
  }
  return mx;
}

RootedTree random_rooted_tree(int n, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree needs n >= 1");
  Rng rng(seed);
  RootedTree t;
  t.root = 0;
  t.parent.assign(n, -1);
  for (int v = 1; v < n; ++v) t.parent[v] = rng.below_int(v);
  return t;
}

int ceil_log2(int n) {
  if (n < 1) throw std::invalid_argument("ceil_log2 needs n >= 1");
  int bits = 0;
  int v = n - 1;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

std::vector<std::vector<int>> TreePartition::blocks() const {
  std::vector<std::vector<int>> out(blockCount());
  for (size_t v = 0; v < assign.size(); ++v) out[assign[v]].push_back(static_cast<int>(v));
  return out;
}

namespace {

/// Working view: a connected alive subset of a fixed tree.
struct Sub {
  const std::vector<std::vector<int>>& adj;
  VertexSet alive;

  std::vector<int> vertices() const { return alive.to_vector(); }

  int size() const { return alive.count(); }

  std::vector<int> neighbors_alive(int v) const {
    std::vector<int> out;
    for (int w : adj[v])
      if (alive.test(w)) out.push_back(w);
    return out;
  }

  /// Path between two alive vertices through alive territory.
  std::vector<int> path(int from, int to) const {
    std::vector<int> prev(adj.size(), -2);
    std::queue<int> q;
    q.push(from);
    prev[from] = -1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (v == to) break;
      for (int w : adj[v]) {
        if (alive.test(w) && prev[w] == -2) {
          prev[w] = v;
          q.push(w);
        }
      }
    }
    std::vector<int> out;
    for (int v = to; v != -1; v = prev[v]) out.push_back(v);
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<VertexSet> components_without(const VertexSet& removed) const {
    VertexSet rest = alive - removed;
    std::vector<VertexSet> comps;
    VertexSet seen(static_cast<int>(adj.size()));
    rest.for_each([&](int s) {
      if (seen.test(s)) return;
      VertexSet comp(static_cast<int>(adj.size()));
      std::queue<int> q;
      q.push(s);
      seen.set(s);
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        comp.set(v);
        for (int w : adj[v])
          if (rest.test(w) && !seen.test(w)) {
            seen.set(w);
            q.push(w);
          }
      }
      comps.push_back(std::move(comp));
    });
    return comps;
  }
};

int bisector_of(const Sub& sub) {
  auto verts = sub.vertices();
  const int total = static_cast<int>(verts.size());
  const int bound = (total + 1) / 2;  // ceil(total / 2)
  for (int v : verts) {
    VertexSet removed(static_cast<int>(sub.adj.size()));
    removed.set(v);
    bool ok = true;
    for (const auto& comp : sub.components_without(removed)) {
      if (comp.count() > bound) {
        ok = false;
        break;
      }
    }
    if (ok) return v;  // verts ascending: smallest valid id wins
  }
  throw PipelineError("tree has no balanced bisector");  // unreachable
}

/// Median of three vertices in a tree: the common vertex of the pairwise
/// paths.  Returns the last common vertex of path(a,b) and path(a,c).
int median_vertex(const Sub& sub, int a, int b, int c) {
  auto pab = sub.path(a, b);
  auto pac = sub.path(a, c);
  int x = a;
  for (size_t i = 0; i < std::min(pab.size(), pac.size()); ++i) {
    if (pab[i] != pac[i]) break;
    x = pab[i];
  }
  return x;
}

struct Builder {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> blockParent;
  std::vector<int> assign;

  int newBlock(int par) {
    blockParent.push_back(par);
    return static_cast<int>(blockParent.size()) - 1;
  }

  int rec(Sub sub, std::vector<int> marked, int parentBlock) {
    if (marked.empty() || marked.size() > 2)
      throw std::invalid_argument("marked set must have 1 or 2 vertices");

    VertexSet mPrime(static_cast<int>(adj.size()));
    for (int m : marked) mPrime.set(m);
    int b = bisector_of(sub);
    mPrime.set(b);

    if (mPrime.count() == 3) {
      // marked = {m1, m2} and b distinct; add the junction vertex when the
      // three do not lie on a path.
      int m1 = marked[0], m2 = marked[1];
      int med = median_vertex(sub, m1, m2, b);
      if (med != m1 && med != m2 && med != b) mPrime.set(med);
    }

    int block = newBlock(parentBlock);
    mPrime.for_each([&](int v) { assign[v] = block; });

    for (const auto& comp : sub.components_without(mPrime)) {
      std::vector<int> childMarked;
      comp.for_each([&](int v) {
        for (int w : adj[v])
          if (mPrime.test(w)) {
            childMarked.push_back(v);
            return;
          }
      });
      if (childMarked.empty() || childMarked.size() > 2)
        throw PipelineError("component neighbors " + std::to_string(childMarked.size()) +
                            " marked vertices; expected 1 or 2");
      rec(Sub{adj, comp}, childMarked, block);
    }
    return block;
  }
};

}  // namespace

int balanced_bisector(const RootedTree& tree) {
  if (tree.size() == 0) throw std::invalid_argument("empty tree");
  auto adj = tree.adjacency();
  Sub sub{adj, VertexSet::full(tree.size())};
  return bisector_of(sub);
}

TreePartition find_balanced_tp(const RootedTree& tree, const std::vector<int>& marked) {
  if (marked.empty() || marked.size() > 2)
    throw std::invalid_argument("marked set must have 1 or 2 vertices");
  for (int m : marked)
    if (m < 0 || m >= tree.size()) throw std::invalid_argument("marked vertex out of range");

  auto adj = tree.adjacency();
  Builder builder{adj, {}, std::vector<int>(tree.size(), -1)};
  int rootBlock = builder.rec(Sub{adj, VertexSet::full(tree.size())}, marked, -1);

  TreePartition tp;
  tp.blockTree.root = rootBlock;
  tp.blockTree.parent = std::move(builder.blockParent);
  tp.assign = std::move(builder.assign);
  return tp;
}

NicePartitionReport validate_nice_partition(const RootedTree& tree, const TreePartition& tp) {
  NicePartitionReport rep;
  const int n = tree.size();
  auto flag = [&](const std::string& msg) { rep.violations.push_back(msg); };

  // Basic tree-partition conditions.
  rep.validPartition = true;
  if (static_cast<int>(tp.assign.size()) != n) {
    rep.validPartition = false;
    flag("assignment size mismatch");
    return rep;
  }
  for (int v = 0; v < n; ++v) {
    if (tp.assign[v] < 0 || tp.assign[v] >= tp.blockCount()) {
      rep.validPartition = false;
      flag("vertex " + std::to_string(v) + " unassigned");
    }
  }
  if (!rep.validPartition) return rep;

  auto blockAdjacent = [&](int a, int b) {
    return tp.blockTree.parent[a] == b || tp.blockTree.parent[b] == a;
  };
  for (int v = 0; v < n; ++v) {
    if (v == tree.root) continue;
    int u = tree.parent[v];
    if (tp.assign[u] != tp.assign[v] && !blockAdjacent(tp.assign[u], tp.assign[v])) {
      rep.validPartition = false;
      flag("edge (" + std::to_string(u) + "," + std::to_string(v) +
           ") maps to non-adjacent blocks");
    }
  }

  rep.depthOk = tp.blockTree.depth() <= ceil_log2(n);
  if (!rep.depthOk)
    flag("block tree depth " + std::to_string(tp.blockTree.depth()) + " exceeds ceil(log2 " +
         std::to_string(n) + ") = " + std::to_string(ceil_log2(n)));

  rep.blockSizesOk = true;
  auto blocks = tp.blocks();
  for (int t = 0; t < tp.blockCount(); ++t) {
    size_t sz = blocks[t].size();
    if (sz == 1) rep.sizeOneBlocks.push_back(t);  // reported, not failed
    if (sz < 1 || sz > 4) {
      rep.blockSizesOk = false;
      flag("block " + std::to_string(t) + " has size " + std::to_string(sz));
    }
  }

  // Per-subtree connectivity: for every block t, the union of blocks in the
  // subtree rooted at t induces a subtree of T.
  rep.connectivityOk = true;
  auto blockChildren = tp.blockTree.children();
  auto adj = tree.adjacency();
  for (int t = 0; t < tp.blockCount(); ++t) {
    VertexSet vt(n);
    std::vector<int> stack{t};
    while (!stack.empty()) {
      int b = stack.back();
      stack.pop_back();
      for (int v : blocks[b]) vt.set(v);
      for (int c : blockChildren[b]) stack.push_back(c);
    }
    if (vt.empty()) continue;
    // Connectivity of T[vt].
    std::queue<int> q;
    VertexSet seen(n);
    q.push(vt.first());
    seen.set(vt.first());
    int reached = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      ++reached;
      for (int w : adj[v])
        if (vt.test(w) && !seen.test(w)) {
          seen.set(w);
          q.push(w);
        }
    }
    if (reached != vt.count()) {
      rep.connectivityOk = false;
      flag("subtree of block " + std::to_string(t) + " induces a disconnected part of T");
    }
  }
  return rep;
}

}  // namespace fairbisect
