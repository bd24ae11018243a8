#include "fairbisect/builder.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "fairbisect/errors.hpp"

namespace fairbisect {

namespace {

struct Induced {
  ColoredGraph sub;
  std::vector<int> orig;  // sub id -> original id
};

Induced extract_induced(const ColoredGraph& g, const VertexSet& w) {
  Induced out;
  out.orig = w.to_vector();
  std::vector<int> inv(g.n, -1);
  for (size_t i = 0; i < out.orig.size(); ++i) inv[out.orig[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> edges;
  for (auto [u, v] : g.edges)
    if (inv[u] >= 0 && inv[v] >= 0) edges.emplace_back(inv[u], inv[v]);
  std::vector<int> color(out.orig.size());
  for (size_t i = 0; i < out.orig.size(); ++i) color[i] = g.color[out.orig[i]];
  out.sub = ColoredGraph::create(static_cast<int>(out.orig.size()), g.c, std::move(edges),
                                 std::move(color));
  return out;
}

/// Visits breaking cuts of `sub` (order <= k, both sides > q) in a fixed
/// deterministic order until the visitor returns true.
void enumerate_breaking_cuts(const ColoredGraph& sub, int q, int k, long long budget,
                             const std::function<bool(const VertexSet&)>& visitor) {
  const int n = sub.n;
  if (n <= 1) return;
  if (n <= 20) {
    long long work = (1LL << (n - 1)) * std::max<long long>(1, sub.edges.size());
    if (work > budget) throw BudgetError("builder: bipartition enumeration beyond budget");
    for (uint64_t mask = 1; mask < (uint64_t(1) << (n - 1)); ++mask) {
      int sizeA = __builtin_popcountll(mask);
      if (sizeA <= q || n - sizeA <= q) continue;
      int order = 0;
      for (auto [u, v] : sub.edges) {
        bool au = u < n - 1 && ((mask >> u) & 1);
        bool av = v < n - 1 && ((mask >> v) & 1);
        if (au != av && ++order > k) break;
      }
      if (order > k) continue;
      VertexSet a(n);
      for (int v = 0; v + 1 < n; ++v)
        if ((mask >> v) & 1) a.set(v);
      if (visitor(a)) return;
    }
    return;
  }

  // Edge-subset mode: remove F with |F| <= k, then 2-color components.
  const int m = static_cast<int>(sub.edges.size());
  long long used = 0;
  std::vector<int> pick;
  std::function<bool(int, int)> rec = [&](int start, int remaining) -> bool {
    // Components of sub - pick.
    std::vector<char> removed(m, 0);
    for (int e : pick) removed[e] = 1;
    std::vector<int> comp(n, -1);
    int nc = 0;
    for (int v0 = 0; v0 < n; ++v0) {
      if (comp[v0] >= 0) continue;
      comp[v0] = nc;
      std::vector<int> stack{v0};
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : sub.adj[v]) {
          if (comp[w] >= 0) continue;
          auto it = std::lower_bound(sub.edges.begin(), sub.edges.end(),
                                     std::make_pair(std::min(v, w), std::max(v, w)));
          if (removed[it - sub.edges.begin()]) continue;
          comp[w] = nc;
          stack.push_back(w);
        }
      }
      ++nc;
    }
    if (nc <= 40) {
      std::vector<int> size(nc, 0);
      for (int v = 0; v < n; ++v) ++size[comp[v]];
      for (uint64_t cm = 1; cm + 1 < (uint64_t(1) << nc); ++cm) {
        used += nc;
        if (used > budget) throw BudgetError("builder: edge-subset enumeration beyond budget");
        int inA = 0;
        for (int ci = 0; ci < nc; ++ci)
          if ((cm >> ci) & 1) inA += size[ci];
        if (inA <= q || n - inA <= q) continue;
        VertexSet a(n);
        for (int v = 0; v < n; ++v)
          if ((cm >> comp[v]) & 1) a.set(v);
        int order = 0;
        for (auto [u, v] : sub.edges)
          if (a.test(u) != a.test(v)) ++order;
        if (order <= k && visitor(a)) return true;
      }
    }
    if (remaining == 0) return false;
    for (int e = start; e < m; ++e) {
      pick.push_back(e);
      if (rec(e + 1, remaining - 1)) return true;
      pick.pop_back();
    }
    return false;
  };
  rec(0, k);
}

struct BuildState {
  const ColoredGraph& g;
  const BuilderConfig& cfg;
  std::vector<int> parent;
  std::vector<VertexSet> bags;

  int newNode(int par, VertexSet bag) {
    parent.push_back(par);
    bags.push_back(std::move(bag));
    return static_cast<int>(parent.size()) - 1;
  }

  bool certify_bag(const Induced& ind, const VertexSet& bagInSub) {
    UnbreakabilityOptions opts;
    opts.enumerationBudget = cfg.enumerationBudget;
    return is_unbreakable(ind.sub, bagInSub, cfg.q, cfg.k, opts).unbreakable;
  }

  // Decomposes G[w]; the root bag of the produced subtree contains breq.
  int rec(const VertexSet& w, const VertexSet& breq, int par, int depthGuard) {
    if (depthGuard > g.n + 2) throw BuilderError("builder recursion exceeded depth guard");
    Induced ind = extract_induced(g, w);
    const int sn = ind.sub.n;

    UnbreakabilityOptions opts;
    opts.enumerationBudget = cfg.enumerationBudget;
    auto whole = is_unbreakable(ind.sub, ind.sub.all_vertices(), cfg.q, cfg.k, opts);
    if (whole.unbreakable) return newNode(par, w);

    // Breaking cut exists; search for an admissible split.
    std::optional<VertexSet> chosenR;
    std::vector<std::pair<int, VertexSet>> chosenChildren;  // (minVertex, component)
    enumerate_breaking_cuts(
        ind.sub, cfg.q, cfg.k, cfg.enumerationBudget, [&](const VertexSet& aSub) {
          VertexSet r(g.n);
          breq.for_each([&](int v) { r.set(v); });
          for (auto [u, v] : ind.sub.edges) {
            if (aSub.test(u) != aSub.test(v)) {
              r.set(ind.orig[u]);
              r.set(ind.orig[v]);
            }
          }
          if (r.empty()) return false;
          VertexSet rest = w - r;
          std::vector<std::pair<int, VertexSet>> kids;
          for (const auto& comp : g.components_within(rest)) {
            VertexSet nb = g.neighborhood(comp) & w;  // N_{G[w]}(comp), inside r
            if (nb.count() > cfg.k) return false;
            VertexSet childW = comp | nb;
            if (childW.count() >= w.count()) return false;  // no progress
            kids.emplace_back(comp.first(), childW);
          }
          // The separator bag itself must certify.
          if (r.count() > 2 * cfg.q + 1) {
            VertexSet rSub(sn);
            for (int i = 0; i < sn; ++i)
              if (r.test(ind.orig[i])) rSub.set(i);
            if (!certify_bag(ind, rSub)) return false;
          }
          chosenR = r;
          chosenChildren = std::move(kids);
          return true;
        });

    if (!chosenR)
      throw BuilderError("builder: no admissible split for a breakable territory of size " +
                         std::to_string(sn));

    int node = newNode(par, *chosenR);
    std::sort(chosenChildren.begin(), chosenChildren.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [minV, childW] : chosenChildren) {
      VertexSet childBreq = childW & *chosenR;
      rec(childW, childBreq, node, depthGuard + 1);
    }
    return node;
  }
};

/// Merges leaves into parents while the node count exceeds the target, as
/// long as the union bag still certifies unbreakable.  Keeps adhesions
/// unchanged (a leaf's bag meets its grandparent only inside the parent bag).
void coarsen(const ColoredGraph& g, const BuilderConfig& cfg, std::vector<int>& parent,
             std::vector<VertexSet>& bags, int root, int targetNodes) {
  UnbreakabilityOptions opts;
  opts.enumerationBudget = cfg.enumerationBudget;
  std::vector<char> dead(parent.size(), 0);
  auto aliveCount = [&] {
    return static_cast<int>(std::count(dead.begin(), dead.end(), 0));
  };
  while (aliveCount() > targetNodes) {
    // Depths of alive nodes.
    std::vector<int> depth(parent.size(), 0);
    std::vector<int> order;
    for (size_t v = 0; v < parent.size(); ++v)
      if (!dead[v]) order.push_back(static_cast<int>(v));
    // parent[] always points to an alive ancestor after merges.
    bool progressed = false;
    std::vector<char> hasChild(parent.size(), 0);
    for (int v : order)
      if (v != root) hasChild[parent[v]] = 1;
    for (int v : order)
      depth[v] = (v == root) ? 0 : depth[parent[v]] + 1;  // order is creation order; parents first
    std::vector<int> leaves;
    for (int v : order)
      if (v != root && !hasChild[v]) leaves.push_back(v);
    std::sort(leaves.begin(), leaves.end(), [&](int a, int b) {
      if (depth[a] != depth[b]) return depth[a] > depth[b];
      return a < b;
    });
    for (int leaf : leaves) {
      int par = parent[leaf];
      VertexSet unionBag = bags[leaf] | bags[par];
      bool ok = unionBag.count() <= 2 * cfg.q + 1 ||
                is_unbreakable(g, unionBag, cfg.q, cfg.k, opts).unbreakable;
      if (!ok) continue;
      bags[par] = unionBag;
      dead[leaf] = 1;
      progressed = true;
      break;
    }
    if (!progressed) break;
  }
  // Rebuild dense arrays.
  std::vector<int> remap(parent.size(), -1);
  std::vector<int> newParent;
  std::vector<VertexSet> newBags;
  for (size_t v = 0; v < parent.size(); ++v) {
    if (dead[v]) continue;
    remap[v] = static_cast<int>(newParent.size());
    newParent.push_back(parent[v]);
    newBags.push_back(bags[v]);
  }
  for (auto& p : newParent)
    if (p >= 0) p = remap[p];
  parent = std::move(newParent);
  bags = std::move(newBags);
  (void)root;
}

}  // namespace

std::optional<EdgeCut> find_breaking_cut(const ColoredGraph& g, const VertexSet& bagSet, int q,
                                         int k, const UnbreakabilityOptions& opts) {
  auto res = is_unbreakable(g, bagSet, q, k, opts);
  return res.witness;
}

TreeDecomposition build_unbreakable_decomposition(const ColoredGraph& g,
                                                  const BuilderConfig& config) {
  if (config.k < 0 || config.q < 1)
    throw std::invalid_argument("builder needs k >= 0 and q >= 1");
  if (g.n == 0) throw std::invalid_argument("builder needs a non-empty graph");

  BuildState st{g, config, {}, {}};
  auto comps = g.components();
  int root;
  if (comps.size() == 1) {
    root = st.rec(comps[0], VertexSet(g.n), -1, 0);
  } else {
    root = st.newNode(-1, VertexSet(g.n));
    for (const auto& comp : comps) st.rec(comp, VertexSet(g.n), root, 0);
  }

  TreeDecomposition td;
  td.root = root;
  td.parent = st.parent;
  td.bag = st.bags;
  td = compactify(g, td);

  // Keep the decomposition tree at most half the vertex count so that the
  // depth-reduction stage meets its 2*ceil(log2 n) bound.
  int target = std::max(1, (g.n + 1) / 2);
  if (td.size() > target) {
    coarsen(g, config, td.parent, td.bag, td.root, target);
    // compactify() and coarsen() both keep the root first.
    td.root = 0;
    td = compactify(g, td);
  }

  DecompositionReport rep = validate(g, td);
  if (!rep.valid || !rep.compact || rep.maxAdhesion > config.k) {
    // Fall back to a single bag when it certifies; otherwise fail loudly.
    TreeDecomposition single;
    single.root = 0;
    single.parent = {-1};
    single.bag = {g.all_vertices()};
    UnbreakabilityOptions opts;
    opts.enumerationBudget = config.enumerationBudget;
    if (g.components().size() == 1 &&
        is_unbreakable(g, g.all_vertices(), config.q, config.k, opts).unbreakable)
      return single;
    throw BuilderError("builder produced an uncertifiable decomposition (adhesion " +
                       std::to_string(rep.maxAdhesion) + ", valid=" +
                       std::to_string(rep.valid) + ")");
  }
  UnbreakabilityOptions opts;
  opts.enumerationBudget = config.enumerationBudget;
  for (const auto& bag : td.bag) {
    if (!is_unbreakable(g, bag, config.q, config.k, opts).unbreakable)
      throw BuilderError("builder emitted a breakable bag");
  }
  return td;
}

}  // namespace fairbisect
