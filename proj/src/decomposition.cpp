#include "fairbisect/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>

#include <json.hpp>

#include "fairbisect/errors.hpp"

namespace fairbisect {

std::vector<std::vector<int>> TreeDecomposition::children() const {
  std::vector<std::vector<int>> ch(size());
  for (int v = 0; v < size(); ++v)
    if (v != root && parent[v] >= 0) ch[parent[v]].push_back(v);
  return ch;
}

std::vector<int> TreeDecomposition::depths() const {
  std::vector<int> d(size(), -1);
  for (int v : bfs_order()) d[v] = (v == root) ? 0 : d[parent[v]] + 1;
  return d;
}

int TreeDecomposition::depth() const {
  int mx = 0;
  for (int d : depths()) mx = std::max(mx, d);
  return mx;
}

std::vector<int> TreeDecomposition::bfs_order() const {
  std::vector<int> order;
  order.reserve(size());
  auto ch = children();
  std::queue<int> q;
  q.push(root);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    order.push_back(v);
    for (int w : ch[v]) q.push(w);
  }
  return order;
}

VertexSet adhesion(const TreeDecomposition& td, int node) {
  if (node < 0 || node >= td.size()) throw std::domain_error("unknown decomposition node");
  if (node == td.root) return VertexSet(td.bag[node].capacity());
  return td.bag[node] & td.bag[td.parent[node]];
}

VertexSet cone(const TreeDecomposition& td, int node) {
  if (node < 0 || node >= td.size()) throw std::domain_error("unknown decomposition node");
  VertexSet out = td.bag[node];
  auto ch = td.children();
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out |= td.bag[v];
    for (int w : ch[v]) stack.push_back(w);
  }
  return out;
}

VertexSet alpha(const TreeDecomposition& td, int node) {
  return cone(td, node) - adhesion(td, node);
}

Subgraph induced_minus_sigma(const ColoredGraph& g, const VertexSet& vertices,
                             const VertexSet& sigma) {
  Subgraph sub;
  sub.vertices = vertices;
  for (auto [u, v] : g.edges) {
    if (!vertices.test(u) || !vertices.test(v)) continue;
    if (sigma.test(u) && sigma.test(v)) continue;
    sub.edges.emplace_back(u, v);
  }
  return sub;
}

Subgraph subgraph_Gt(const ColoredGraph& g, const TreeDecomposition& td, int node) {
  return induced_minus_sigma(g, cone(td, node), adhesion(td, node));
}

namespace {

bool is_connected_in(const ColoredGraph& g, const VertexSet& s) {
  if (s.empty()) return true;
  auto comps = g.components_within(s);
  return comps.size() == 1;
}

}  // namespace

DecompositionReport validate(const ColoredGraph& g, const TreeDecomposition& td) {
  DecompositionReport rep;
  auto flag = [&](const std::string& msg) { rep.violations.push_back(msg); };

  const int m = td.size();
  if (m == 0) {
    flag("decomposition has no nodes");
    return rep;
  }
  if (td.root < 0 || td.root >= m || static_cast<int>(td.parent.size()) != m) {
    flag("malformed tree structure");
    return rep;
  }
  if (td.parent[td.root] != -1) flag("root must have parent -1");
  for (int v = 0; v < m; ++v) {
    if (v == td.root) continue;
    if (td.parent[v] < 0 || td.parent[v] >= m) {
      flag("node " + std::to_string(v) + " has invalid parent");
      return rep;
    }
  }
  if (static_cast<int>(td.bfs_order().size()) != m) {
    flag("parent links do not form a tree rooted at " + std::to_string(td.root));
    return rep;
  }
  for (int v = 0; v < m; ++v) {
    if (td.bag[v].capacity() != g.n) {
      flag("bag " + std::to_string(v) + " sized for a different graph");
      return rep;
    }
  }

  // (T1) bags cover V(G).
  VertexSet cover(g.n);
  for (const auto& b : td.bag) cover |= b;
  if (cover != g.all_vertices()) flag("T1: bags do not cover V(G)");

  // (T2) every edge inside some bag.
  for (auto [u, v] : g.edges) {
    bool found = false;
    for (const auto& b : td.bag)
      if (b.test(u) && b.test(v)) {
        found = true;
        break;
      }
    if (!found)
      flag("T2: edge (" + std::to_string(u) + "," + std::to_string(v) + ") in no bag");
  }

  // (T3) occurrence sets induce connected subtrees.
  auto ch = td.children();
  for (int v = 0; v < g.n; ++v) {
    int occurrences = 0;
    for (const auto& b : td.bag)
      if (b.test(v)) ++occurrences;
    if (occurrences == 0) continue;  // already a T1 violation
    // BFS within occurrence nodes from the highest one.
    int start = -1;
    for (int t : td.bfs_order())
      if (td.bag[t].test(v)) {
        start = t;
        break;
      }
    std::vector<char> seen(m, 0);
    std::deque<int> q{start};
    seen[start] = 1;
    int reached = 0;
    while (!q.empty()) {
      int t = q.front();
      q.pop_front();
      ++reached;
      auto tryVisit = [&](int s) {
        if (s >= 0 && !seen[s] && td.bag[s].test(v)) {
          seen[s] = 1;
          q.push_back(s);
        }
      };
      if (t != td.root) tryVisit(td.parent[t]);
      for (int s : ch[t]) tryVisit(s);
    }
    if (reached != occurrences)
      flag("T3: occurrence set of vertex " + std::to_string(v) + " is disconnected");
  }

  for (int t = 0; t < m; ++t)
    rep.maxAdhesion = std::max(rep.maxAdhesion, adhesion(td, t).count());
  rep.depth = td.depth();
  rep.valid = rep.violations.empty();

  // Compactness: alpha(t) connected with N_G(alpha(t)) = sigma(t) wherever
  // alpha(t) is non-empty.  A disconnected graph cannot satisfy this at the
  // root, so the root is checked only when G is connected.
  if (rep.valid) {
    rep.compact = true;
    bool gConnected = g.n == 0 || g.components().size() == 1;
    for (int t = 0; t < m; ++t) {
      if (t == td.root && !gConnected) continue;
      VertexSet a = alpha(td, t);
      if (a.empty()) {
        if (t != td.root) {
          rep.compact = false;
          rep.notes.push_back("compactness: alpha(" + std::to_string(t) + ") is empty");
        }
        continue;
      }
      if (!is_connected_in(g, a)) {
        rep.compact = false;
        rep.notes.push_back("compactness: G[alpha(" + std::to_string(t) + ")] is disconnected");
      }
      if (g.neighborhood(a) != adhesion(td, t)) {
        rep.compact = false;
        rep.notes.push_back("compactness: N(alpha(" + std::to_string(t) + ")) != sigma(" +
                            std::to_string(t) + ")");
      }
    }
  }
  return rep;
}

namespace {

/// Searches for a cut of order <= s with more than q vertices of X on both
/// sides, scanning bipartitions in ascending mask order.
std::optional<EdgeCut> breaking_cut_bipartitions(const ColoredGraph& g, const VertexSet& bagSet,
                                                 int q, int s,
                                                 const UnbreakabilityOptions& opts) {
  const int n = g.n;
  long long work = (1LL << (n - 1)) * std::max<long long>(1, g.edges.size());
  if (work > opts.enumerationBudget)
    throw BudgetError("unbreakability check beyond enumeration budget");
  // Vertex n-1 pinned to side B; sides are symmetric.
  for (uint64_t mask = 0; mask < (uint64_t(1) << (n - 1)); ++mask) {
    int order = 0;
    for (auto [u, v] : g.edges) {
      bool au = (mask >> u) & 1, av = (mask >> v) & 1;
      if (u == n - 1) au = false;
      if (v == n - 1) av = false;
      if (au != av && ++order > s) break;
    }
    if (order > s) continue;
    int inA = 0, inB = 0;
    bagSet.for_each([&](int v) {
      bool a = v < n - 1 && ((mask >> v) & 1);
      (a ? inA : inB)++;
    });
    if (inA > q && inB > q) {
      VertexSet a(n);
      for (int v = 0; v + 1 < n; ++v)
        if ((mask >> v) & 1) a.set(v);
      return EdgeCut::create(g.all_vertices(), a);
    }
  }
  return std::nullopt;
}

/// Enumerates edge subsets F with |F| <= s; any order-<=s cut arises from
/// 2-coloring the components of G - F.  Finds a coloring leaving more than q
/// bag vertices on both sides via subset search over component counts.
std::optional<EdgeCut> breaking_cut_edge_subsets(const ColoredGraph& g, const VertexSet& bagSet,
                                                 int q, int s,
                                                 const UnbreakabilityOptions& opts) {
  const int m = static_cast<int>(g.edges.size());
  long long budgetUsed = 0;

  std::vector<int> pick;
  std::optional<EdgeCut> found;

  auto tryEdgeSet = [&](const std::vector<int>& removed) -> bool {
    VertexSet removedMask(std::max(1, m));
    for (int e : removed) removedMask.set(e);
    // Components of G - F.
    std::vector<int> comp(g.n, -1);
    int nc = 0;
    for (int v0 = 0; v0 < g.n; ++v0) {
      if (comp[v0] >= 0) continue;
      comp[v0] = nc;
      std::vector<int> stack{v0};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g.adj[v]) {
          if (comp[w] >= 0) continue;
          int u = std::min(v, w), x = std::max(v, w);
          auto it = std::lower_bound(g.edges.begin(), g.edges.end(), std::make_pair(u, x));
          int ei = static_cast<int>(it - g.edges.begin());
          if (removedMask.test(ei)) continue;
          comp[w] = nc;
          stack.push_back(w);
        }
      }
      ++nc;
    }
    std::vector<int> bagCount(nc, 0), total(nc, 0);
    bagSet.for_each([&](int v) { ++bagCount[comp[v]]; });
    for (int v = 0; v < g.n; ++v) ++total[comp[v]];
    int bagTotal = bagSet.count();
    if (nc > 40) return false;  // cannot arise: nc <= n <= small here
    // Find component subset with q < sum(bagCount) < bagTotal - q, smallest
    // mask wins; require the induced cut order <= s (crossing edges are a
    // subset of F but re-count exactly).
    for (uint64_t cm = 1; cm + 1 < (uint64_t(1) << nc); ++cm) {
      budgetUsed += nc;
      if (budgetUsed > opts.enumerationBudget)
        throw BudgetError("unbreakability check beyond enumeration budget");
      int inA = 0;
      for (int ci = 0; ci < nc; ++ci)
        if ((cm >> ci) & 1) inA += bagCount[ci];
      if (inA <= q || bagTotal - inA <= q) continue;
      VertexSet a(g.n);
      for (int v = 0; v < g.n; ++v)
        if ((cm >> comp[v]) & 1) a.set(v);
      EdgeCut cut = EdgeCut::create(g.all_vertices(), a);
      if (cut_order(g, cut) <= s) {
        found = cut;
        return true;
      }
    }
    return false;
  };

  // F over subsets of edges, sizes 0..s, lexicographic within each size.
  std::function<bool(int, int)> rec = [&](int start, int remaining) -> bool {
    if (tryEdgeSet(pick)) return true;
    if (remaining == 0) return false;
    for (int e = start; e < m; ++e) {
      pick.push_back(e);
      if (rec(e + 1, remaining - 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  rec(0, s);
  return found;
}

}  // namespace

UnbreakabilityResult is_unbreakable(const ColoredGraph& g, const VertexSet& bagSet, int q, int s,
                                    const UnbreakabilityOptions& opts) {
  if (q < 0 || s < 0) throw std::invalid_argument("is_unbreakable needs q, s >= 0");
  UnbreakabilityResult res;
  if (bagSet.count() <= 2 * q + 1) {
    res.unbreakable = true;  // pigeonhole: one side always holds <= q
    return res;
  }
  std::optional<EdgeCut> witness;
  if (g.n <= opts.bipartitionLimit && g.n >= 1)
    witness = breaking_cut_bipartitions(g, bagSet, q, s, opts);
  else
    witness = breaking_cut_edge_subsets(g, bagSet, q, s, opts);
  if (witness) {
    res.unbreakable = false;
    res.witness = std::move(witness);
  } else {
    res.unbreakable = true;
  }
  return res;
}

namespace {

struct MutableTd {
  int root;
  std::vector<int> parent;
  std::vector<VertexSet> bag;
  std::vector<char> dead;

  std::vector<std::vector<int>> children() const {
    std::vector<std::vector<int>> ch(parent.size());
    for (size_t v = 0; v < parent.size(); ++v)
      if (!dead[v] && static_cast<int>(v) != root) ch[parent[v]].push_back(static_cast<int>(v));
    return ch;
  }

  std::vector<int> alive_bfs() const {
    std::vector<int> order;
    auto ch = children();
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      order.push_back(v);
      for (int w : ch[v]) q.push(w);
    }
    return order;
  }

  VertexSet gamma(int t) const {
    auto ch = children();
    VertexSet out = bag[t];
    std::vector<int> stack{t};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out |= bag[v];
      for (int w : ch[v]) stack.push_back(w);
    }
    return out;
  }

  VertexSet sigma(int t) const {
    if (t == root) return VertexSet(bag[t].capacity());
    return bag[t] & bag[parent[t]];
  }

  TreeDecomposition freeze() const {
    TreeDecomposition out;
    std::vector<int> remap(parent.size(), -1);
    int next = 0;
    for (int v : alive_bfs()) remap[v] = next++;
    out.parent.assign(next, -1);
    out.bag.assign(next, VertexSet());
    for (int v : alive_bfs()) {
      out.bag[remap[v]] = bag[v];
      out.parent[remap[v]] = (v == root) ? -1 : remap[parent[v]];
    }
    out.root = remap[root];
    return out;
  }
};

}  // namespace

TreeDecomposition compactify(const ColoredGraph& g, const TreeDecomposition& td) {
  MutableTd w;
  w.root = td.root;
  w.parent = td.parent;
  w.bag = td.bag;
  w.dead.assign(td.size(), 0);

  auto spliceNode = [&](int t) {
    // Remove t, re-attaching its children to its parent.
    int p = w.parent[t];
    for (size_t v = 0; v < w.parent.size(); ++v)
      if (!w.dead[v] && w.parent[v] == t) w.parent[v] = p;
    w.dead[t] = 1;
  };

  // For a disconnected graph, hang per-component territories under an empty
  // root so splits of the root have somewhere to attach.
  bool gConnected = g.components().size() <= 1;
  if (!gConnected && !w.bag[w.root].empty()) {
    w.parent.push_back(-1);
    w.bag.push_back(VertexSet(g.n));
    w.dead.push_back(0);
    int newRoot = static_cast<int>(w.parent.size()) - 1;
    w.parent[w.root] = newRoot;
    w.root = newRoot;
  }

  const int maxPasses = 4 * (td.size() + g.n) + 16;
  for (int pass = 0; pass < maxPasses; ++pass) {
    bool changed = false;

    // Nodes whose bag is contained in the parent bag are redundant.
    for (int t : w.alive_bfs()) {
      if (t == w.root) continue;
      if (w.bag[t].is_subset_of(w.bag[w.parent[t]])) {
        spliceNode(t);
        changed = true;
      }
    }
    // Collapse a root covered by its single child.
    {
      auto ch = w.children();
      while (ch[w.root].size() == 1 && w.bag[w.root].is_subset_of(w.bag[ch[w.root][0]])) {
        int c = ch[w.root][0];
        w.dead[w.root] = 1;
        w.parent[c] = -1;
        w.root = c;
        ch = w.children();
        changed = true;
      }
    }

    // Prune non-root nodes with empty alpha.
    for (int t : w.alive_bfs()) {
      if (t == w.root) continue;
      if ((w.gamma(t) - w.sigma(t)).empty()) {
        spliceNode(t);
        changed = true;
      }
    }

    // Split nodes whose alpha induces several components: one subtree copy
    // per component, bags restricted to component ∪ sigma(t).
    bool splitDone = false;
    for (int t : w.alive_bfs()) {
      if (t == w.root && !gConnected) continue;
      VertexSet sig = w.sigma(t);
      VertexSet a = w.gamma(t) - sig;
      if (a.empty()) continue;
      auto comps = g.components_within(a);
      if (comps.size() <= 1) continue;

      // Collect the subtree of t.
      std::vector<int> subtree;
      {
        auto ch = w.children();
        std::vector<int> stack{t};
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          subtree.push_back(v);
          for (int x : ch[v]) stack.push_back(x);
        }
      }
      int attach = (t == w.root) ? -1 : w.parent[t];
      for (const auto& comp : comps) {
        VertexSet keep = comp | sig;
        std::vector<int> remap(w.parent.size(), -1);
        for (int v : subtree) {
          VertexSet nb = w.bag[v] & keep;
          w.parent.push_back(-2);  // fixed below
          w.bag.push_back(nb);
          w.dead.push_back(0);
          remap[v] = static_cast<int>(w.parent.size()) - 1;
        }
        for (int v : subtree)
          w.parent[remap[v]] = (v == t) ? attach : remap[w.parent[v]];
        if (t == w.root) {
          // Cannot happen: root splits only when G is disconnected, and then
          // a fresh empty root was installed above.
          throw PipelineError("compactify: root split without umbrella root");
        }
      }
      for (int v : subtree) w.dead[v] = 1;
      splitDone = true;
      changed = true;
      break;  // restart traversal; indices shifted
    }

    // Trim sigma vertices not adjacent to alpha: drop them from the whole
    // subtree (they stay covered by the parent side).
    if (!splitDone) {
      for (int t : w.alive_bfs()) {
        if (t == w.root) continue;
        VertexSet sig = w.sigma(t);
        VertexSet a = w.gamma(t) - sig;
        VertexSet keepSig = g.neighborhood(a) & sig;
        VertexSet drop = sig - keepSig;
        if (drop.empty()) continue;
        auto ch = w.children();
        std::vector<int> stack{t};
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          w.bag[v] -= drop;
          for (int x : ch[v]) stack.push_back(x);
        }
        changed = true;
      }
    }

    if (!changed) break;
    if (pass + 1 == maxPasses)
      throw PipelineError("compactify did not converge within pass bound");
  }

  TreeDecomposition out = w.freeze();
  DecompositionReport rep = validate(g, out);
  if (!rep.valid || !rep.compact)
    throw PipelineError("compactify produced a non-compact decomposition: " +
                        (rep.violations.empty() ? std::string("unknown") : rep.violations[0]));
  return out;
}

std::string decomposition_to_json(const TreeDecomposition& td) {
  nlohmann::json nodes = nlohmann::json::array();
  for (int t = 0; t < td.size(); ++t) {
    nlohmann::json node;
    node["id"] = t;
    if (t == td.root)
      node["parent"] = nullptr;
    else
      node["parent"] = td.parent[t];
    node["bag"] = td.bag[t].to_vector();
    nodes.push_back(std::move(node));
  }
  nlohmann::json doc;
  doc["nodes"] = std::move(nodes);
  return doc.dump(2);
}

TreeDecomposition decomposition_from_json(const std::string& text, int graphN) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("decomposition document: ") + e.what());
  }
  if (!doc.contains("nodes") || !doc["nodes"].is_array())
    throw ParseError("decomposition document: missing 'nodes' array");
  const auto& nodes = doc["nodes"];
  TreeDecomposition td;
  td.parent.assign(nodes.size(), -1);
  td.bag.assign(nodes.size(), VertexSet(graphN));
  int rootCount = 0;
  for (const auto& node : nodes) {
    if (!node.contains("id") || !node.contains("bag"))
      throw ParseError("decomposition document: node missing id/bag");
    int id = node["id"].get<int>();
    if (id < 0 || id >= static_cast<int>(nodes.size()))
      throw ParseError("decomposition document: node id out of range");
    if (node.contains("parent") && !node["parent"].is_null()) {
      td.parent[id] = node["parent"].get<int>();
    } else {
      td.parent[id] = -1;
      td.root = id;
      ++rootCount;
    }
    for (int v : node["bag"].get<std::vector<int>>()) {
      if (v < 0 || v >= graphN)
        throw ParseError("decomposition document: bag vertex out of range");
      td.bag[id].set(v);
    }
  }
  if (rootCount != 1) throw ParseError("decomposition document: expected exactly one root");
  return td;
}

}  // namespace fairbisect
