#include "fairbisect/fair_dp.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>

#include "fairbisect/builder.hpp"
#include "fairbisect/depth_reduction.hpp"
#include "fairbisect/errors.hpp"

namespace fairbisect {

namespace {

/// Balanced binary tree over ids {0..i} with i the root and 0 a leaf;
/// internal ids assigned by in-order halving.
struct IndexTree {
  int root = 0;
  std::vector<int> parent;
  std::vector<std::vector<int>> children;

  std::vector<int> postorder() const {
    std::vector<int> out, stack{root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      out.push_back(v);
      for (int c : children[v]) stack.push_back(c);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<int> subtree(int v) const {
    std::vector<int> out, stack{v};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      out.push_back(x);
      for (int c : children[x]) stack.push_back(c);
    }
    return out;
  }
};

IndexTree build_index_tree(int topId) {
  IndexTree t;
  t.parent.assign(topId + 1, -1);
  t.children.assign(topId + 1, {});
  t.root = topId;
  std::function<void(int, int, int)> rec = [&](int lo, int hi, int par) {
    if (lo > hi) return;
    int node = hi;
    if (par >= 0) {
      t.parent[node] = par;
      t.children[par].push_back(node);
    }
    if (lo == hi) return;
    int mid = (lo + hi - 1) / 2;
    rec(lo, mid, node);
    rec(mid + 1, hi - 1, node);
  };
  rec(0, topId, -1);
  return t;
}

uint64_t set_to_mask(const VertexSet& s) {
  uint64_t m = 0;
  s.for_each([&](int v) { m |= uint64_t(1) << v; });
  return m;
}

VertexSet mask_to_set(int n, uint64_t m) {
  VertexSet s(n);
  for (int v = 0; v < n; ++v)
    if ((m >> v) & 1) s.set(v);
  return s;
}

/// Enumerates the subsets of `mask` in a fixed deterministic order (by the
/// index over the packed bit positions, ascending).
template <class F>
void for_each_submask(uint64_t mask, F&& visit) {
  std::vector<int> bits;
  for (int v = 0; v < 64; ++v)
    if ((mask >> v) & 1) bits.push_back(v);
  if (bits.size() > 25) throw BudgetError("subset enumeration over a set larger than 25");
  for (uint64_t idx = 0; idx < (uint64_t(1) << bits.size()); ++idx) {
    uint64_t sub = 0;
    for (size_t i = 0; i < bits.size(); ++i)
      if ((idx >> i) & 1) sub |= uint64_t(1) << bits[i];
    visit(sub);
  }
}

}  // namespace

std::vector<WConfiguration> enumerate_feasible_configurations(const DpTable& left,
                                                              const DpTable& right,
                                                              const MergeCorrection& corr,
                                                              const TableKey& target,
                                                              const RoundingDomain& domain) {
  std::vector<WConfiguration> out;
  const int c = static_cast<int>(target.a.size());
  for (const auto& [kl, cutl] : left) {
    if (kl.at != target.at || kl.flags != target.flags) continue;
    for (const auto& [kr, cutr] : right) {
      if (kr.at != kl.at || kr.flags != kl.flags) continue;
      int w = kl.w + kr.w - corr.dupCross;
      if (w < 0 || w > target.w) continue;
      ColorProfile a(c), b(c);
      bool feasible = true;
      for (int i = 0; i < c && feasible; ++i) {
        int av = kl.a[i] + kr.a[i] - (corr.dupA.empty() ? 0 : corr.dupA[i]);
        int bv = kl.b[i] + kr.b[i] - (corr.dupB.empty() ? 0 : corr.dupB[i]);
        if (av < 0 || bv < 0) {
          feasible = false;  // correction exceeds the contributed counts
          break;
        }
        a[i] = static_cast<int>(round_down(av, domain));
        b[i] = static_cast<int>(round_down(bv, domain));
        if (a[i] > target.a[i] || b[i] > target.b[i]) feasible = false;
      }
      if (!feasible) continue;
      WConfiguration cfg;
      cfg.nuW = {kl.w, kr.w};
      cfg.nuA = {kl.a, kr.a};
      cfg.nuB = {kl.b, kr.b};
      cfg.merged = TableKey{w, kl.at, kl.flags, std::move(a), std::move(b)};
      out.push_back(std::move(cfg));
    }
  }
  return out;
}

FairDpSolver::FairDpSolver(const FairInstance& inst, const TreeDecomposition& td,
                           const SolveOptions& opts)
    : inst_(inst), g_(inst.graph), td_(td), opts_(opts), k_(inst.k) {
  if (g_.n > 64) throw BudgetError("the dynamic program supports at most 64 vertices");
  DecompositionReport rep = validate(g_, td_);
  if (!rep.valid)
    throw std::domain_error("fair_dp: decomposition invalid: " + rep.violations[0]);

  domain_ = build_domain(rounding_delta(opts_.eps, std::max<int64_t>(1, g_.n)), std::max(1, g_.n));
  stats_.domainSize = domain_.size();
  stats_.delta = domain_.delta;
  stats_.decompositionDepth = rep.depth;
  stats_.decompositionNodes = td_.size();
  stats_.maxAdhesion = rep.maxAdhesion;

  bagMask_.resize(td_.size());
  sigmaMask_.resize(td_.size());
  gammaMask_.resize(td_.size());
  for (int t = 0; t < td_.size(); ++t) {
    bagMask_[t] = set_to_mask(td_.bag[t]);
    sigmaMask_[t] = set_to_mask(adhesion(td_, t));
    gammaMask_[t] = set_to_mask(cone(td_, t));
  }
  children_ = td_.children();
  mTables_.assign(td_.size(), std::nullopt);
}

ColorProfile FairDpSolver::profile_of(uint64_t mask) const {
  ColorProfile p(g_.c, 0);
  for (int v = 0; v < g_.n; ++v)
    if ((mask >> v) & 1) ++p[g_.color[v] - 1];
  return p;
}

ColorProfile FairDpSolver::rounded(const ColorProfile& p) const {
  ColorProfile out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = static_cast<int>(round_down(p[i], domain_));
  return out;
}

RefinementSplit FairDpSolver::refinement_components(int node, uint64_t xMask) const {
  if ((xMask & ~bagMask_[node]) != 0)
    throw std::domain_error("refinement X must be a subset of the bag");
  RefinementSplit ref;
  ref.x = xMask;
  ref.parts.push_back(xMask);

  // Torso adjacency: G[bag] plus cliques over sigma(t) and each child
  // adhesion.
  std::vector<uint64_t> adjMask(g_.n, 0);
  for (auto [u, v] : g_.edges) {
    if (((bagMask_[node] >> u) & 1) && ((bagMask_[node] >> v) & 1)) {
      adjMask[u] |= uint64_t(1) << v;
      adjMask[v] |= uint64_t(1) << u;
    }
  }
  auto addClique = [&](uint64_t s) {
    for (int v = 0; v < g_.n; ++v)
      if ((s >> v) & 1) adjMask[v] |= s & ~(uint64_t(1) << v);
  };
  addClique(sigmaMask_[node]);
  for (int child : children_[node]) addClique(sigmaMask_[child]);

  uint64_t rest = bagMask_[node] & ~xMask;
  uint64_t seen = 0;
  for (int v0 = 0; v0 < g_.n; ++v0) {
    uint64_t bit = uint64_t(1) << v0;
    if (!(rest & bit) || (seen & bit)) continue;
    uint64_t comp = 0, frontier = bit;
    while (frontier) {
      comp |= frontier;
      uint64_t next = 0;
      for (int v = 0; v < g_.n; ++v)
        if ((frontier >> v) & 1) next |= adjMask[v];
      frontier = next & rest & ~comp;
    }
    seen |= comp;
    ref.parts.push_back(comp);
  }

  ref.groups.assign(ref.parts.size(), {});
  for (int child : children_[node]) {
    uint64_t sig = sigmaMask_[child];
    uint64_t remainder = sig & ~xMask;
    if (remainder == 0) {
      ref.groups[0].push_back(child);  // empty or X-contained adhesions
      continue;
    }
    int where = -1;
    for (size_t ell = 1; ell < ref.parts.size(); ++ell) {
      if (remainder & ref.parts[ell]) {
        if ((remainder & ~ref.parts[ell]) != 0)
          throw PipelineError("child adhesion spans two torso components");
        where = static_cast<int>(ell);
        break;
      }
    }
    if (where < 0) throw PipelineError("child adhesion matched no torso component");
    ref.groups[where].push_back(child);
  }
  return ref;
}

MergeCorrection FairDpSolver::base_correction(int node, const RefinementSplit& ref, int ell,
                                              uint8_t flags) const {
  // Both operands contain the whole base X ∪ P_ell with the same assignment;
  // one copy of its profile and crossing edges must be subtracted.
  uint64_t baseMask = ref.x | ref.parts[ell];
  uint64_t aMask = ((flags & kFlagXA) ? ref.x : 0) | ((flags & kFlagXEll) ? ref.parts[ell] : 0);
  MergeCorrection corr;
  corr.dupA = profile_of(aMask & ~sigmaMask_[node]);
  corr.dupB = profile_of((baseMask & ~aMask) & ~sigmaMask_[node]);
  corr.dupCross = 0;
  for (auto [u, v] : g_.edges) {
    uint64_t ub = uint64_t(1) << u, vb = uint64_t(1) << v;
    if (!(baseMask & ub) || !(baseMask & vb)) continue;
    if ((sigmaMask_[node] & ub) && (sigmaMask_[node] & vb)) continue;
    if (((aMask & ub) != 0) != ((aMask & vb) != 0)) ++corr.dupCross;
  }
  return corr;
}

MergeCorrection FairDpSolver::x_correction(int node, uint64_t xMask, uint8_t flags) const {
  // Operands share exactly X; crossing edges inside X cannot exist since X
  // sits wholly on one side.
  MergeCorrection corr;
  ColorProfile xp = profile_of(xMask & ~sigmaMask_[node]);
  ColorProfile zero(g_.c, 0);
  if (flags & kFlagXA) {
    corr.dupA = xp;
    corr.dupB = zero;
  } else {
    corr.dupA = zero;
    corr.dupB = xp;
  }
  corr.dupCross = 0;
  return corr;
}

DpTable FairDpSolver::merge_tables(const DpTable& left, const DpTable& right,
                                   const MergeCorrection& corr) {
  DpTable out;
  const int c = g_.c;
  auto b = right.begin();
  for (auto l = left.begin(); l != left.end(); ++l) {
    // Advance the right iterator to the bucket of l.
    while (b != right.end() &&
           (b->first.at < l->first.at ||
            (b->first.at == l->first.at && b->first.flags < l->first.flags)))
      ++b;
    for (auto r = b; r != right.end() && r->first.at == l->first.at &&
                     r->first.flags == l->first.flags;
         ++r) {
      int w = l->first.w + r->first.w - corr.dupCross;
      if (w < 0 || w > k_) continue;
      ColorProfile a(c), bb(c);
      bool ok = true;
      for (int i = 0; i < c; ++i) {
        int av = l->first.a[i] + r->first.a[i] - (corr.dupA.empty() ? 0 : corr.dupA[i]);
        int bv = l->first.b[i] + r->first.b[i] - (corr.dupB.empty() ? 0 : corr.dupB[i]);
        if (av < 0 || bv < 0) {
          ok = false;
          break;
        }
        a[i] = static_cast<int>(round_down(av, domain_));
        bb[i] = static_cast<int>(round_down(bv, domain_));
      }
      if (!ok) continue;
      out.try_emplace(TableKey{w, l->first.at, l->first.flags, std::move(a), std::move(bb)},
                      l->second | r->second);
    }
  }
  return out;
}

DpTable FairDpSolver::base_table(int node, const RefinementSplit& ref, int ell) const {
  DpTable out;
  const uint64_t sigma = sigmaMask_[node];
  const uint64_t baseMask = ref.x | ref.parts[ell];
  const uint64_t freeAt = sigma & ~baseMask;

  for (uint8_t flags = 0; flags < 4; ++flags) {
    if (ell == 0) {
      // P_0 = X: the component flag must match the X flag.
      if (((flags & kFlagXA) != 0) != ((flags & kFlagXEll) != 0)) continue;
    }
    uint64_t aMask = ((flags & kFlagXA) ? ref.x : 0) | ((flags & kFlagXEll) ? ref.parts[ell] : 0);
    int cross = 0;
    for (auto [u, v] : g_.edges) {
      uint64_t ub = uint64_t(1) << u, vb = uint64_t(1) << v;
      if (!(baseMask & ub) || !(baseMask & vb)) continue;
      if ((sigma & ub) && (sigma & vb)) continue;
      if (((aMask & ub) != 0) != ((aMask & vb) != 0)) ++cross;
    }
    if (cross > k_) continue;
    ColorProfile a = rounded(profile_of(aMask & ~sigma));
    ColorProfile b = rounded(profile_of((baseMask & ~aMask) & ~sigma));
    uint64_t fixedAt = aMask & sigma;
    for_each_submask(freeAt, [&](uint64_t freeBits) {
      out.try_emplace(TableKey{cross, fixedAt | freeBits, flags, a, b}, aMask);
    });
  }
  return out;
}

DpTable FairDpSolver::merge_child_m(int node, const DpTable& acc, const RefinementSplit& ref,
                                    int ell, int childId) {
  const DpTable& childM = compute_table_M(childId);
  const uint64_t childSigma = sigmaMask_[childId];
  DpTable out;
  const int c = g_.c;
  for (const auto& [ka, cutA] : acc) {
    uint64_t childAt = (((ka.flags & kFlagXA) ? ref.x : 0) |
                        ((ka.flags & kFlagXEll) ? ref.parts[ell] : 0)) &
                       childSigma;
    auto lo = childM.lower_bound(TableKey{0, childAt, 0, {}, {}});
    for (auto it = lo; it != childM.end() && it->first.at == childAt; ++it) {
      int w = ka.w + it->first.w;
      if (w > k_) continue;
      ColorProfile a(c), b(c);
      for (int i = 0; i < c; ++i) {
        a[i] = static_cast<int>(round_down(ka.a[i] + it->first.a[i], domain_));
        b[i] = static_cast<int>(round_down(ka.b[i] + it->first.b[i], domain_));
      }
      out.try_emplace(TableKey{w, ka.at, ka.flags, std::move(a), std::move(b)},
                      cutA | it->second);
    }
  }
  return out;
}

DpTable FairDpSolver::compute_table_H(int node, const RefinementSplit& ref, int ell, int m) {
  const auto& group = ref.groups[ell];
  IndexTree tz = build_index_tree(static_cast<int>(group.size()));

  std::vector<DpTable> tables(group.size() + 1);
  for (int j : tz.postorder()) {
    DpTable acc;
    bool haveAcc = false;
    for (int q : tz.children[j]) {
      if (!haveAcc) {
        acc = tables[q];
        haveAcc = true;
      } else {
        auto corrFor = [&](const DpTable& l, const DpTable& r) {
          // Correction varies per flag bucket; split by flags.
          DpTable merged;
          for (uint8_t flags = 0; flags < 4; ++flags) {
            DpTable lf, rf;
            for (const auto& [key, cut] : l)
              if (key.flags == flags) lf.emplace(key, cut);
            for (const auto& [key, cut] : r)
              if (key.flags == flags) rf.emplace(key, cut);
            if (lf.empty() || rf.empty()) continue;
            DpTable part = merge_tables(lf, rf, base_correction(node, ref, ell, flags));
            for (const auto& [key, cut] : part) merged.try_emplace(key, cut);
          }
          return merged;
        };
        acc = corrFor(acc, tables[q]);
      }
    }
    if (!haveAcc) acc = base_table(node, ref, ell);
    if (j != 0) acc = merge_child_m(node, acc, ref, ell, group[j - 1]);
    if (opts_.certifyTables || opts_.dumpDir) certify_or_dump(node, ref, ell, j, "H", acc);
    tables[j] = std::move(acc);
  }
  return tables[m];
}

DpTable FairDpSolver::compute_table_N(int node, const RefinementSplit& ref, int ell) {
  DpTable h = compute_table_H(node, ref, ell, static_cast<int>(ref.groups[ell].size()));
  // Collapse the component flag; x_ell = F entries come first in key order
  // and win the emplace.
  DpTable out;
  for (const auto& [key, cut] : h) {
    TableKey collapsed = key;
    collapsed.flags = key.flags & kFlagXA;
    out.try_emplace(std::move(collapsed), cut);
  }
  if (opts_.certifyTables || opts_.dumpDir) certify_or_dump(node, ref, ell, -1, "N", out);
  return out;
}

DpTable FairDpSolver::compute_table_Nleq(int node, const RefinementSplit& ref) {
  const int p = static_cast<int>(ref.parts.size()) - 1;
  IndexTree tp = build_index_tree(p);
  std::vector<DpTable> tables(p + 1);
  for (int ell : tp.postorder()) {
    DpTable n = compute_table_N(node, ref, ell);
    DpTable acc;
    bool haveAcc = false;
    for (int q : tp.children[ell]) {
      if (!haveAcc) {
        acc = tables[q];
        haveAcc = true;
      } else {
        acc = [&] {
          DpTable merged;
          for (uint8_t flags = 0; flags < 2; ++flags) {
            DpTable lf, rf;
            for (const auto& [key, cut] : acc)
              if (key.flags == flags) lf.emplace(key, cut);
            for (const auto& [key, cut] : tables[q])
              if (key.flags == flags) rf.emplace(key, cut);
            if (lf.empty() || rf.empty()) continue;
            DpTable part = merge_tables(lf, rf, x_correction(node, ref.x, flags));
            for (const auto& [key, cut] : part) merged.try_emplace(key, cut);
          }
          return merged;
        }();
      }
    }
    if (haveAcc) {
      DpTable merged;
      for (uint8_t flags = 0; flags < 2; ++flags) {
        DpTable lf, rf;
        for (const auto& [key, cut] : acc)
          if (key.flags == flags) lf.emplace(key, cut);
        for (const auto& [key, cut] : n)
          if (key.flags == flags) rf.emplace(key, cut);
        if (lf.empty() || rf.empty()) continue;
        DpTable part = merge_tables(lf, rf, x_correction(node, ref.x, flags));
        for (const auto& [key, cut] : part) merged.try_emplace(key, cut);
      }
      tables[ell] = std::move(merged);
    } else {
      tables[ell] = std::move(n);
    }
    if (opts_.certifyTables || opts_.dumpDir)
      certify_or_dump(node, ref, ell, -1, "Nleq", tables[ell]);
  }
  return tables[p];
}

DpTable FairDpSolver::compute_table_MX(int node, uint64_t xMask) {
  RefinementSplit ref = refinement_components(node, xMask);
  DpTable nleq = compute_table_Nleq(node, ref);
  DpTable out;
  for (const auto& [key, cut] : nleq) {
    TableKey collapsed = key;
    collapsed.flags = 0;  // x_A = F entries precede and win
    out.try_emplace(std::move(collapsed), cut);
  }
  if (opts_.certifyTables || opts_.dumpDir) certify_or_dump(node, ref, -1, -1, "MX", out);
  return out;
}

const DpTable& FairDpSolver::compute_table_M(int node) {
  if (mTables_[node]) return *mTables_[node];
  for (int child : children_[node]) compute_table_M(child);

  const int bagSize = td_.bag[node].count();
  if (bagSize > opts_.coveringFallbackThreshold)
    throw BudgetError("bag of size " + std::to_string(bagSize) +
                      " exceeds the covering-family fallback threshold");

  // Exhaustive covering family over the bag, ascending subset index.
  std::vector<uint64_t> xs;
  xs.reserve(size_t(1) << bagSize);
  for_each_submask(bagMask_[node], [&](uint64_t x) { xs.push_back(x); });
  stats_.coveringSetsTried += static_cast<long long>(xs.size());

  DpTable m;
  // Certification and dumping mutate shared counters; keep them single
  // threaded.
  const int threads =
      (opts_.certifyTables || opts_.dumpDir) ? 1 : std::max(1, opts_.threads);
  if (threads == 1 || xs.size() < 8) {
    for (uint64_t x : xs) {
      DpTable mx = compute_table_MX(node, x);
      for (const auto& [key, cut] : mx) m.try_emplace(key, cut);
    }
  } else {
    const size_t chunk = (xs.size() + threads - 1) / threads;
    std::vector<std::future<std::vector<DpTable>>> futures;
    for (int ti = 0; ti < threads; ++ti) {
      size_t lo = ti * chunk, hi = std::min(xs.size(), lo + chunk);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [this, node, &xs, lo, hi] {
        std::vector<DpTable> out;
        for (size_t i = lo; i < hi; ++i) out.push_back(compute_table_MX(node, xs[i]));
        return out;
      }));
    }
    for (auto& f : futures)
      for (const DpTable& mx : f.get())
        for (const auto& [key, cut] : mx) m.try_emplace(key, cut);
  }

  // Table-size contract: entries within (k+1) * 2^|sigma| * |D|^(2c).
  NodeTableStats ns;
  ns.node = node;
  ns.sigmaSize = adhesion(td_, node).count();
  ns.entries = static_cast<long long>(m.size());
  ns.bound = static_cast<long double>(k_ + 1) *
             std::pow(2.0L, static_cast<long double>(ns.sigmaSize)) *
             std::pow(static_cast<long double>(domain_.size()), 2.0L * g_.c);
  if (static_cast<long double>(ns.entries) > ns.bound)
    throw PipelineError("table size bound violated at node " + std::to_string(node));
  stats_.nodes.push_back(ns);

  if (opts_.certifyTables || opts_.dumpDir) {
    RefinementSplit whole;
    whole.x = 0;
    whole.parts = {0};
    certify_or_dump(node, whole, -1, -1, "M", m);
  }

  mTables_[node] = std::move(m);
  return *mTables_[node];
}

uint64_t FairDpSolver::table_universe(int node, const RefinementSplit& ref, int ell, int m,
                                      const std::string& kind) const {
  if (kind == "M" || kind == "MX") return gammaMask_[node];
  if (kind == "N") {
    uint64_t u = ref.x | ref.parts[ell];
    for (int child : ref.groups[ell]) u |= gammaMask_[child];
    return u;
  }
  if (kind == "Nleq") {
    const int p = static_cast<int>(ref.parts.size()) - 1;
    IndexTree tp = build_index_tree(p);
    uint64_t u = ref.x;
    for (int j : tp.subtree(ell)) {
      u |= ref.parts[j];
      for (int child : ref.groups[j]) u |= gammaMask_[child];
    }
    return u;
  }
  // H at inner node m of the adhesion tree for component ell.
  IndexTree tz = build_index_tree(static_cast<int>(ref.groups[ell].size()));
  uint64_t u = ref.x | ref.parts[ell];
  for (int j : tz.subtree(m))
    if (j != 0) u |= gammaMask_[ref.groups[ell][j - 1]];
  return u;
}

void FairDpSolver::certify_or_dump(int node, const RefinementSplit& ref, int ell, int m,
                                   const std::string& kind, const DpTable& table) {
  const uint64_t sigma = sigmaMask_[node];
  uint64_t universe;
  std::vector<uint64_t> monoParts;
  bool xFlagged = kind == "N" || kind == "Nleq";
  if (kind == "M" || kind == "MX") {
    universe = table_universe(node, ref, 0, 0, kind);
    if (kind == "MX") {
      if (ref.x) monoParts.push_back(ref.x);
      for (size_t j = 1; j < ref.parts.size(); ++j) monoParts.push_back(ref.parts[j]);
    }
  } else if (kind == "N") {
    universe = table_universe(node, ref, ell, 0, kind);
    if (ref.x) monoParts.push_back(ref.x);
    if (ref.parts[ell]) monoParts.push_back(ref.parts[ell]);
  } else if (kind == "Nleq") {
    universe = table_universe(node, ref, ell, 0, kind);
    if (ref.x) monoParts.push_back(ref.x);
    const int p = static_cast<int>(ref.parts.size()) - 1;
    IndexTree tp = build_index_tree(p);
    for (int j : tp.subtree(ell))
      if (ref.parts[j] && j != 0) monoParts.push_back(ref.parts[j]);
  } else {
    universe = table_universe(node, ref, ell, m, kind);
    if (ref.x) monoParts.push_back(ref.x);
    if (ref.parts[ell]) monoParts.push_back(ref.parts[ell]);
  }

  std::vector<std::pair<int, int>> subEdges;
  for (auto [u, v] : g_.edges) {
    uint64_t ub = uint64_t(1) << u, vb = uint64_t(1) << v;
    if (!(universe & ub) || !(universe & vb)) continue;
    if ((sigma & ub) && (sigma & vb)) continue;
    subEdges.emplace_back(u, v);
  }

  std::ofstream dump;
  if (opts_.dumpDir) {
    std::filesystem::create_directories(*opts_.dumpDir);
    dump.open(*opts_.dumpDir + "/node_" + std::to_string(node) + ".txt", std::ios::app);
  }

  for (const auto& [key, cutA] : table) {
    if (opts_.dumpDir && dump) {
      dump << kind << " w=" << key.w << " at=" << key.at << " flags=" << int(key.flags)
           << " a=" << profile_to_string(key.a) << " b=" << profile_to_string(key.b)
           << " order=" << key.w << " |A|=" << __builtin_popcountll(cutA)
           << " profileA=" << profile_to_string(profile_of(cutA & ~sigma)) << "\n";
    }
    if (!opts_.certifyTables) continue;
    ++cert_.entriesChecked;
    auto fail = [&](const std::string& why) {
      ++cert_.violations;
      if (cert_.samples.size() < 8)
        cert_.samples.push_back(kind + " node " + std::to_string(node) + ": " + why);
    };
    if ((cutA & ~universe) != 0) {
      fail("cut leaves the designated subgraph");
      continue;
    }
    if ((cutA & sigma) != (key.at & universe & sigma)) {
      fail("adhesion restriction violated");
      continue;
    }
    int order = 0;
    for (auto [u, v] : subEdges)
      if (((cutA >> u) & 1) != ((cutA >> v) & 1)) ++order;
    if (order > key.w) {
      fail("stored order exceeds the w index");
      continue;
    }
    bool flagsOk = true;
    if (xFlagged && ref.x) {
      bool xInA = (key.flags & kFlagXA) != 0;
      if (xInA && (ref.x & ~cutA) != 0) flagsOk = false;
      if (!xInA && (ref.x & cutA) != 0) flagsOk = false;
    }
    if (kind == "H" && ell >= 0 && ref.parts[ell]) {
      bool pInA = (key.flags & kFlagXEll) != 0;
      if (pInA && (ref.parts[ell] & ~cutA) != 0) flagsOk = false;
      if (!pInA && (ref.parts[ell] & cutA) != 0) flagsOk = false;
    }
    for (uint64_t part : monoParts) {
      uint64_t inA = part & cutA;
      if (inA != 0 && inA != part) flagsOk = false;
    }
    if (!flagsOk) {
      fail("flag or refinement placement violated");
      continue;
    }
    ColorProfile trueA = profile_of(cutA & ~sigma);
    ColorProfile trueB = profile_of((universe & ~cutA) & ~sigma);
    if (!profile_leq(key.a, trueA) || !profile_leq(key.b, trueB)) {
      fail("key profiles do not dominate the true profiles");
      continue;
    }
  }
}

std::optional<EdgeCut> FairDpSolver::extract() {
  const DpTable& rootTable = compute_table_M(td_.root);
  for (const auto& [key, cutA] : rootTable) {
    if (key.at != 0 || key.w > k_) continue;
    EdgeCut cut = EdgeCut::create(g_.all_vertices(), mask_to_set(g_.n, cutA));
    if (!is_eps_fair(inst_, cut, opts_.eps)) continue;
    // Re-verify before returning.
    if (cut_order(g_, cut) > k_)
      throw PipelineError("extracted cut fails order re-verification");
    return cut;
  }
  return std::nullopt;
}

SolveResult solve_with_decomposition(const FairInstance& inst, const TreeDecomposition& td,
                                     const SolveOptions& opts) {
  FairDpSolver solver(inst, td, opts);
  SolveResult result;
  result.cut = solver.extract();
  result.stats = solver.stats();
  result.certification = solver.certification();
  result.decomposition = solver.decomposition();
  result.domain = solver.domain();
  return result;
}

SolveResult solve(const FairInstance& inst, const SolveOptions& opts) {
  BuilderConfig cfg = BuilderConfig::with_k(inst.k);
  cfg.enumerationBudget = opts.builderBudget;
  TreeDecomposition raw = build_unbreakable_decomposition(inst.graph, cfg);
  TreeDecomposition low = reduce_depth(inst.graph, raw, inst.k, cfg.q);
  return solve_with_decomposition(inst, low, opts);
}

}  // namespace fairbisect
