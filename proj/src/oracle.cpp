#include "fairbisect/oracle.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>
#include <string>
#include <unordered_map>

#include "fairbisect/errors.hpp"

namespace fairbisect {

namespace {

VertexSet mask_to_set(int n, const std::vector<int>& verts, uint64_t mask) {
  VertexSet s(n);
  for (size_t i = 0; i < verts.size(); ++i)
    if ((mask >> i) & 1) s.set(verts[i]);
  return s;
}

std::string profile_key(const ColorProfile& p) {
  std::string key(p.size() * sizeof(int), '\0');
  std::memcpy(key.data(), p.data(), key.size());
  return key;
}

}  // namespace

std::optional<EdgeCut> exact_zero_cut_fair(const FairInstance& inst, const OracleBudget& budget) {
  const ColoredGraph& g = inst.graph;
  std::vector<VertexSet> comps = g.components();
  const int p = static_cast<int>(comps.size());
  if (p > budget.maxComponents)
    throw BudgetError("exact_zero_cut_fair: " + std::to_string(p) + " components exceed budget " +
                      std::to_string(budget.maxComponents));

  std::vector<ColorProfile> profs;
  profs.reserve(p);
  for (const auto& comp : comps) profs.push_back(color_profile(g, comp));

  // Meet in the middle over component subsets: order-0 cuts put whole
  // components on one side.
  const int half = p / 2;
  std::unordered_map<std::string, uint64_t> firstHalf;  // profile -> smallest mask
  for (uint64_t mask = 0; mask < (uint64_t(1) << half); ++mask) {
    ColorProfile sum(g.c, 0);
    for (int i = 0; i < half; ++i)
      if ((mask >> i) & 1) sum = profile_add(sum, profs[i]);
    firstHalf.try_emplace(profile_key(sum), mask);
  }
  const int rest = p - half;
  std::optional<uint64_t> best;
  for (uint64_t mask = 0; mask < (uint64_t(1) << rest); ++mask) {
    ColorProfile sum(g.c, 0);
    for (int i = 0; i < rest; ++i)
      if ((mask >> i) & 1) sum = profile_add(sum, profs[half + i]);
    ColorProfile need = profile_sub(inst.rTarget, sum);
    if (!profile_leq(ColorProfile(g.c, 0), need)) continue;
    auto it = firstHalf.find(profile_key(need));
    if (it == firstHalf.end()) continue;
    uint64_t full = it->second | (mask << half);
    if (!best || full < *best) best = full;
  }
  if (!best) return std::nullopt;

  VertexSet a(g.n);
  for (int i = 0; i < p; ++i)
    if ((*best >> i) & 1) a |= comps[i];
  return EdgeCut::create(g.all_vertices(), a);
}

std::optional<EdgeCut> exact_fair_bisection(const FairInstance& inst, const OracleBudget& budget) {
  const ColoredGraph& g = inst.graph;
  if (g.n > budget.maxVertices) {
    if (inst.k == 0) return exact_zero_cut_fair(inst, budget);
    throw BudgetError("exact_fair_bisection: n = " + std::to_string(g.n) + " exceeds budget " +
                      std::to_string(budget.maxVertices));
  }

  const int want = std::accumulate(inst.rTarget.begin(), inst.rTarget.end(), 0);
  for (uint64_t mask = 0; mask < (uint64_t(1) << g.n); ++mask) {
    if (__builtin_popcountll(mask) != want) continue;
    VertexSet a(g.n);
    for (int v = 0; v < g.n; ++v)
      if ((mask >> v) & 1) a.set(v);
    if (color_profile(g, a) != inst.rTarget) continue;
    EdgeCut cut = EdgeCut::create(g.all_vertices(), a);
    if (cut_order(g, cut) <= inst.k) return cut;
  }
  return std::nullopt;
}

void exact_region_cuts(const ColoredGraph& g, const VertexSet& region, const VertexSet& sigma,
                       const std::function<bool(const EdgeCut&, int)>& visit,
                       const OracleBudget& budget) {
  std::vector<int> verts = region.to_vector();
  const int r = static_cast<int>(verts.size());
  if (r > budget.maxVertices)
    throw BudgetError("exact_region_cuts: region size " + std::to_string(r) +
                      " exceeds budget " + std::to_string(budget.maxVertices));

  // Edges of G[region] - E(G[sigma]).
  std::vector<std::pair<int, int>> subEdges;
  for (auto [u, v] : g.edges) {
    if (!region.test(u) || !region.test(v)) continue;
    if (sigma.test(u) && sigma.test(v)) continue;
    subEdges.emplace_back(u, v);
  }

  for (uint64_t mask = 0; mask < (uint64_t(1) << r); ++mask) {
    VertexSet a = mask_to_set(g.n, verts, mask);
    int order = 0;
    for (auto [u, v] : subEdges)
      if (a.test(u) != a.test(v)) ++order;
    EdgeCut cut = EdgeCut::create(region, std::move(a));
    if (!visit(cut, order)) return;
  }
}

std::vector<EdgeCut> collect_region_cuts(const ColoredGraph& g, const VertexSet& region,
                                         const VertexSet& sigma,
                                         const std::function<bool(const EdgeCut&, int)>& keep,
                                         const OracleBudget& budget) {
  std::vector<EdgeCut> out;
  exact_region_cuts(
      g, region, sigma,
      [&](const EdgeCut& cut, int order) {
        if (keep(cut, order)) out.push_back(cut);
        return true;
      },
      budget);
  return out;
}

}  // namespace fairbisect
