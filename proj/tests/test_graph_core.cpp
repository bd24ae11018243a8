#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "fairbisect/errors.hpp"
#include "fairbisect/generators.hpp"
#include "fairbisect/graph.hpp"
#include "fairbisect/rng.hpp"

using namespace fairbisect;

namespace {

ColoredGraph triangle() {
  return ColoredGraph::create(3, 1, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 1});
}

FairInstance two_disjoint_edges(ColorProfile r, int k) {
  ColoredGraph g = ColoredGraph::create(4, 2, {{0, 1}, {2, 3}}, {1, 1, 2, 2});
  return FairInstance::create(std::move(g), k, std::move(r));
}

}  // namespace

TEST_CASE("cut_order on the worked examples") {
  ColoredGraph tri = triangle();
  CHECK(cut_order(tri, EdgeCut::create(tri.all_vertices(), VertexSet::of(3, {0}))) == 2);
  CHECK(cut_order(tri, EdgeCut::create(tri.all_vertices(), VertexSet(3))) == 0);

  ColoredGraph path = ColoredGraph::create(4, 1, {{0, 1}, {1, 2}, {2, 3}}, {1, 1, 1, 1});
  CHECK(cut_order(path, EdgeCut::create(path.all_vertices(), VertexSet::of(4, {0, 2}))) == 3);
}

TEST_CASE("color_profile basics") {
  ColoredGraph g = ColoredGraph::create(4, 2, {}, {1, 1, 2, 2});
  CHECK(color_profile(g, VertexSet::of(4, {0, 2})) == ColorProfile{1, 1});
  CHECK(color_profile(g, VertexSet(4)) == ColorProfile{0, 0});
  CHECK(color_profile(g, g.all_vertices()) == ColorProfile{2, 2});
}

TEST_CASE("is_exact_fair on the two-edge instance") {
  FairInstance inst = two_disjoint_edges({2, 0}, 0);
  CHECK(is_exact_fair(inst, EdgeCut::create(inst.graph.all_vertices(), VertexSet::of(4, {0, 1}))));
  CHECK_FALSE(
      is_exact_fair(inst, EdgeCut::create(inst.graph.all_vertices(), VertexSet::of(4, {0, 2}))));

  // r = (1,1): no order-0 bipartition is fair; all 16 sides enumerated.
  FairInstance inst11 = two_disjoint_edges({1, 1}, 0);
  for (uint64_t mask = 0; mask < 16; ++mask) {
    VertexSet a(4);
    for (int v = 0; v < 4; ++v)
      if ((mask >> v) & 1) a.set(v);
    CHECK_FALSE(is_exact_fair(inst11, EdgeCut::create(inst11.graph.all_vertices(), a)));
  }
}

TEST_CASE("is_eps_fair arithmetic") {
  FairInstance inst = two_disjoint_edges({2, 0}, 0);
  EdgeCut exact = EdgeCut::create(inst.graph.all_vertices(), VertexSet::of(4, {0, 1}));
  for (double eps : {1e-9, 0.3, 1.0, 10.0}) CHECK(is_eps_fair(inst, exact, eps));
  CHECK_THROWS_AS(is_eps_fair(inst, exact, 0.0), std::invalid_argument);

  // A holds 3 of color 1 out of 4 against r_1 = 2: 3 > 2 * 1.4.
  ColoredGraph g4 = ColoredGraph::create(4, 1, {}, {1, 1, 1, 1});
  FairInstance inst4 = FairInstance::create(std::move(g4), 0, {2});
  EdgeCut three = EdgeCut::create(inst4.graph.all_vertices(), VertexSet::of(4, {0, 1, 2}));
  CHECK_FALSE(is_eps_fair(inst4, three, 0.4));

  // r = (2,2), totals (4,4), A profile (2,3), B profile (2,1), eps 0.5.
  ColoredGraph g8 = ColoredGraph::create(8, 2, {}, {1, 1, 1, 1, 2, 2, 2, 2});
  FairInstance inst8 = FairInstance::create(std::move(g8), 0, {2, 2});
  EdgeCut mixed = EdgeCut::create(inst8.graph.all_vertices(), VertexSet::of(8, {0, 1, 4, 5, 6}));
  CHECK(color_profile(inst8.graph, mixed.sideA) == ColorProfile{2, 3});
  CHECK(is_eps_fair(inst8, mixed, 0.5));
}

TEST_CASE("cut and profile invariants on seeded instances") {
  for (uint64_t seed = 1; seed <= 30; ++seed) {
    int n = 3 + static_cast<int>(seed % 10);
    int maxM = n * (n - 1) / 2;
    int m = std::min<int>(maxM, static_cast<int>(seed % 12));
    FairInstance inst =
        random_instance(n, m, 1 + static_cast<int>(seed % 3), static_cast<int>(seed % 4), seed);
    const ColoredGraph& g = inst.graph;
    Rng rng(seed * 77);
    VertexSet a(g.n);
    for (int v = 0; v < g.n; ++v)
      if (rng.coin()) a.set(v);
    EdgeCut cut = EdgeCut::create(g.all_vertices(), a);
    EdgeCut swapped = EdgeCut::create(g.all_vertices(), cut.sideB());

    CHECK(cut_order(g, cut) == cut_order(g, swapped));
    CHECK(profile_add(color_profile(g, cut.sideA), color_profile(g, cut.sideB())) ==
          color_profile(g, g.all_vertices()));
    if (is_exact_fair(inst, cut)) {
      for (double eps : {0.01, 0.5, 2.0}) CHECK(is_eps_fair(inst, cut, eps));
    }
    // Below 1/(2n), approximate and exact fairness coincide.
    double tiny = 1.0 / (2.0 * g.n + 1.0);
    CHECK(is_eps_fair(inst, cut, tiny) == is_exact_fair(inst, cut));
  }
}

TEST_CASE("instance text format round-trips") {
  FairInstance inst = random_instance(9, 14, 3, 2, 42);
  std::string text = format_instance(inst);
  FairInstance back = parse_instance_text(text);
  CHECK(back.graph.n == inst.graph.n);
  CHECK(back.graph.edges == inst.graph.edges);
  CHECK(back.graph.color == inst.graph.color);
  CHECK(back.k == inst.k);
  CHECK(back.rTarget == inst.rTarget);
  CHECK(format_instance(back) == text);
}

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS(parse_instance_text("p fairbis 2 2 1 0\n"
                                      "v 0 1\nv 1 1\n"
                                      "e 0 1\ne 1 0\nr 1"),
                  ParseError);  // duplicate edge under normalization
  CHECK_THROWS_AS(parse_instance_text("p fairbis 2 0 1 0\nv 0 1\nv 1 3\nr 1"), ParseError);
  CHECK_THROWS_AS(parse_instance_text("p fairbis 2 0 1 0\nv 0 1\nv 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_instance_text("p fairbis 2 1 1 0\nv 0 1\nv 1 1\ne 0 0\nr 1"), ParseError);
  CHECK_THROWS_AS(parse_instance_text("# only a comment\n"), ParseError);
  // Target above the color total violates the instance invariant.
  CHECK_THROWS_AS(parse_instance_text("p fairbis 2 0 1 0\nv 0 1\nv 1 1\nr 3"), ParseError);
}

TEST_CASE("comments and blank lines are ignored") {
  FairInstance inst = parse_instance_text(
      "# instance\np fairbis 2 1 2 1\n\nv 0 1 # first\nv 1 2\ne 0 1\nr 1 0\n");
  CHECK(inst.graph.n == 2);
  CHECK(inst.cTotal == ColorProfile{1, 1});
}
