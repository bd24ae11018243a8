#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "fairbisect/errors.hpp"
#include "fairbisect/generators.hpp"
#include "fairbisect/oracle.hpp"

using namespace fairbisect;

namespace {

/// Independent second oracle: recursive branch over vertices instead of the
/// bitmask sweep, used to cross-check exact_fair_bisection.
bool second_oracle(const FairInstance& inst) {
  const ColoredGraph& g = inst.graph;
  VertexSet a(g.n);
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == g.n) {
      EdgeCut cut = EdgeCut::create(g.all_vertices(), a);
      return color_profile(g, cut.sideA) == inst.rTarget && cut_order(g, cut) <= inst.k;
    }
    if (rec(v + 1)) return true;
    a.set(v);
    bool hit = rec(v + 1);
    a.reset(v);
    return hit;
  };
  return rec(0);
}

}  // namespace

TEST_CASE("exact_fair_bisection on the toy instances") {
  ColoredGraph twoEdges = ColoredGraph::create(4, 2, {{0, 1}, {2, 3}}, {1, 1, 2, 2});
  FairInstance yes = FairInstance::create(twoEdges, 0, {2, 0});
  auto cut = exact_fair_bisection(yes);
  REQUIRE(cut.has_value());
  CHECK(is_exact_fair(yes, *cut));

  // K3 single color: isolating one vertex needs two cut edges.
  ColoredGraph k3 = ColoredGraph::create(3, 1, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 1});
  FairInstance no = FairInstance::create(k3, 1, {1});
  CHECK_FALSE(exact_fair_bisection(no).has_value());
}

TEST_CASE("oracle cross-check against an independent enumeration") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    int n = 4 + static_cast<int>(seed % 9);  // up to 12
    int m = std::min(n * (n - 1) / 2, 3 + static_cast<int>(seed % 14));
    FairInstance inst =
        random_instance(n, m, 1 + static_cast<int>(seed % 3), static_cast<int>(seed % 4), seed);
    auto cut = exact_fair_bisection(inst);
    CHECK(cut.has_value() == second_oracle(inst));
    if (cut) CHECK(is_exact_fair(inst, *cut));
  }
}

TEST_CASE("relaxing k never flips yes to no") {
  for (uint64_t seed = 1; seed <= 15; ++seed) {
    FairInstance inst = random_instance(8, 10, 2, 1, seed);
    if (!exact_fair_bisection(inst).has_value()) continue;
    FairInstance relaxed = FairInstance::create(inst.graph, inst.k + 2, inst.rTarget);
    CHECK(exact_fair_bisection(relaxed).has_value());
  }
}

TEST_CASE("k = 0 component path agrees with the bitmask sweep") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    int n = 5 + static_cast<int>(seed % 8);
    FairInstance inst = random_instance(n, static_cast<int>(seed % 7), 2, 0, seed);
    auto viaMask = exact_fair_bisection(inst);
    auto viaComponents = exact_zero_cut_fair(inst);
    CHECK(viaMask.has_value() == viaComponents.has_value());
    if (viaComponents) CHECK(is_exact_fair(inst, *viaComponents));
  }
}

TEST_CASE("budget handling") {
  FairInstance big = random_instance(24, 30, 2, 1, 7);
  CHECK_THROWS_AS(exact_fair_bisection(big), BudgetError);
  // k = 0 falls back to the component search instead of failing.
  FairInstance bigZero = random_instance(24, 10, 2, 0, 7);
  CHECK_NOTHROW(exact_fair_bisection(bigZero));
}

TEST_CASE("exact_region_cuts enumerates the region cuts") {
  ColoredGraph g = ColoredGraph::create(4, 1, {{0, 1}, {1, 2}, {2, 3}}, {1, 1, 1, 1});

  int visits = 0;
  exact_region_cuts(g, VertexSet(4), VertexSet(4), [&](const EdgeCut& cut, int order) {
    CHECK(cut.sideA.empty());
    CHECK(order == 0);
    ++visits;
    return true;
  });
  CHECK(visits == 1);  // the empty region has exactly the empty cut

  // Sigma-internal edges are not counted.
  VertexSet region = VertexSet::of(4, {0, 1, 2});
  VertexSet sigma = VertexSet::of(4, {0, 1});
  int maxOrder = 0, count = 0;
  exact_region_cuts(g, region, sigma, [&](const EdgeCut&, int order) {
    maxOrder = std::max(maxOrder, order);
    ++count;
    return true;
  });
  CHECK(count == 8);
  CHECK(maxOrder == 1);  // only edge (1,2) remains countable

  auto none = collect_region_cuts(g, region, sigma, [](const EdgeCut&, int) { return false; });
  CHECK(none.empty());
}
