#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairbisect/decomposition.hpp"
#include "fairbisect/errors.hpp"
#include "fairbisect/generators.hpp"
#include "fairbisect/rng.hpp"

using namespace fairbisect;

namespace {

TreeDecomposition make_td(int n, std::vector<int> parent, std::vector<std::vector<int>> bags,
                          int root = 0) {
  TreeDecomposition td;
  td.root = root;
  td.parent = std::move(parent);
  for (auto& b : bags) td.bag.push_back(VertexSet::from_vector(n, b));
  return td;
}

/// Reference unbreakability check: full sweep over all bipartitions.
bool unbreakable_reference(const ColoredGraph& g, const VertexSet& x, int q, int s) {
  for (uint64_t mask = 0; mask < (uint64_t(1) << g.n); ++mask) {
    VertexSet a(g.n);
    for (int v = 0; v < g.n; ++v)
      if ((mask >> v) & 1) a.set(v);
    EdgeCut cut = EdgeCut::create(g.all_vertices(), a);
    if (cut_order(g, cut) > s) continue;
    int inA = (a & x).count();
    int inB = x.count() - inA;
    if (inA > q && inB > q) return false;
  }
  return true;
}

ColoredGraph star(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return ColoredGraph::create(leaves + 1, 1, std::move(edges), std::vector<int>(leaves + 1, 1));
}

}  // namespace

TEST_CASE("adhesion, cone and G_t accessors") {
  // Bags {0,1} root with child {1,2}.
  ColoredGraph g = ColoredGraph::create(3, 1, {{0, 1}, {1, 2}}, {1, 1, 1});
  TreeDecomposition td = make_td(3, {-1, 0}, {{0, 1}, {1, 2}});

  CHECK(adhesion(td, 0).empty());
  CHECK(adhesion(td, 1) == VertexSet::of(3, {1}));
  CHECK(cone(td, 1) == VertexSet::of(3, {1, 2}));
  CHECK(cone(td, 0) == VertexSet::full(3));
  CHECK(alpha(td, 1) == VertexSet::of(3, {2}));
  CHECK_THROWS_AS(adhesion(td, 5), std::domain_error);

  // Disjoint parent/child bags have an empty adhesion.
  TreeDecomposition disj = make_td(3, {-1, 0}, {{0}, {1, 2}});
  CHECK(adhesion(disj, 1).empty());

  // G_t keeps the child-internal edge and drops sigma-internal ones.
  Subgraph gt = subgraph_Gt(g, td, 1);
  CHECK(gt.vertices == VertexSet::of(3, {1, 2}));
  CHECK(gt.edges == std::vector<std::pair<int, int>>{{1, 2}});
}

TEST_CASE("validate accepts and rejects") {
  ColoredGraph path = ColoredGraph::create(3, 1, {{0, 1}, {1, 2}}, {1, 1, 1});

  DecompositionReport single = validate(path, make_td(3, {-1}, {{0, 1, 2}}));
  CHECK(single.valid);
  CHECK(single.depth == 0);
  CHECK(single.maxAdhesion == 0);
  CHECK(single.compact);

  DecompositionReport chained = validate(path, make_td(3, {-1, 0}, {{0, 1}, {1, 2}}));
  CHECK(chained.valid);
  CHECK(chained.compact);
  CHECK(chained.maxAdhesion == 1);

  // Edge (0,2) in no bag: T2 violation.
  ColoredGraph spread = ColoredGraph::create(4, 1, {{0, 2}}, {1, 1, 1, 1});
  DecompositionReport bad = validate(spread, make_td(4, {-1, 0}, {{0, 1}, {2, 3}}));
  CHECK_FALSE(bad.valid);
  bool foundT2 = false;
  for (const auto& v : bad.violations) foundT2 |= v.find("T2") != std::string::npos;
  CHECK(foundT2);

  // Occurrence set of vertex 0 split across two bags: T3 violation.
  ColoredGraph three = ColoredGraph::create(3, 1, {}, {1, 1, 1});
  DecompositionReport t3 = validate(three, make_td(3, {-1, 0, 1}, {{0, 1}, {1, 2}, {0, 2}}));
  CHECK_FALSE(t3.valid);
}

TEST_CASE("is_unbreakable on the worked examples") {
  // Star K_{1,5}: any order-1 cut strands at most one leaf.
  ColoredGraph s5 = star(5);
  CHECK(is_unbreakable(s5, s5.all_vertices(), 1, 1).unbreakable);

  // Two disjoint edges split 2/2 by the order-0 component cut.
  ColoredGraph twoEdges = ColoredGraph::create(4, 1, {{0, 1}, {2, 3}}, {1, 1, 1, 1});
  auto res = is_unbreakable(twoEdges, twoEdges.all_vertices(), 1, 0);
  CHECK_FALSE(res.unbreakable);
  REQUIRE(res.witness.has_value());
  CHECK(cut_order(twoEdges, *res.witness) == 0);
  CHECK((res.witness->sideA & twoEdges.all_vertices()).count() == 2);

  // |X| <= q is always unbreakable by pigeonhole.
  CHECK(is_unbreakable(twoEdges, VertexSet::of(4, {0, 2}), 1, 4).unbreakable);
}

TEST_CASE("is_unbreakable agrees with the full sweep") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    int n = 4 + static_cast<int>(seed % 7);  // up to 10 keeps the sweep fast
    int m = std::min(n * (n - 1) / 2, 2 + static_cast<int>(seed % 12));
    ColoredGraph g = random_instance(n, m, 1, 0, seed).graph;
    Rng rng(seed);
    VertexSet x(n);
    for (int v = 0; v < n; ++v)
      if (rng.coin()) x.set(v);
    int q = static_cast<int>(seed % 3);
    int s = static_cast<int>(seed % 4);
    CHECK(is_unbreakable(g, x, q, s).unbreakable == unbreakable_reference(g, x, q, s));
  }
}

TEST_CASE("edge-subset mode matches bipartition mode") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    int n = 8;
    ColoredGraph g = random_instance(n, 10, 1, 0, seed).graph;
    VertexSet x = g.all_vertices();
    for (int q = 1; q <= 3; ++q)
      for (int s = 0; s <= 2; ++s) {
        UnbreakabilityOptions bip;
        UnbreakabilityOptions edge;
        edge.bipartitionLimit = 0;  // force edge-subset mode
        CHECK(is_unbreakable(g, x, q, s, bip).unbreakable ==
              is_unbreakable(g, x, q, s, edge).unbreakable);
      }
  }
}

TEST_CASE("compactify leaves compact inputs structurally intact") {
  ColoredGraph path = ColoredGraph::create(3, 1, {{0, 1}, {1, 2}}, {1, 1, 1});
  TreeDecomposition td = make_td(3, {-1, 0}, {{0, 1}, {1, 2}});
  TreeDecomposition out = compactify(path, td);
  CHECK(out.size() == 2);
  DecompositionReport rep = validate(path, out);
  CHECK(rep.valid);
  CHECK(rep.compact);
}

TEST_CASE("compactify splits disconnected alpha and prunes empty parts") {
  // alpha(child) = {3,4} is disconnected in G: the node is replicated per
  // component, each with N(alpha) = sigma.
  ColoredGraph g = ColoredGraph::create(5, 1, {{0, 1}, {0, 2}, {1, 3}, {2, 4}}, {1, 1, 1, 1, 1});
  TreeDecomposition td = make_td(5, {-1, 0}, {{0, 1, 2}, {1, 2, 3, 4}});
  REQUIRE(validate(g, td).valid);
  TreeDecomposition out = compactify(g, td);
  DecompositionReport rep = validate(g, out);
  CHECK(rep.valid);
  CHECK(rep.compact);
  for (int t = 0; t < out.size(); ++t) {
    bool subset = false;
    for (const auto& orig : td.bag)
      if (out.bag[t].is_subset_of(orig)) subset = true;
    CHECK(subset);
  }
  CHECK(out.depth() <= td.depth());

  // A leaf with empty alpha disappears.
  TreeDecomposition padded = make_td(3, {-1, 0}, {{0, 1, 2}, {1}});
  ColoredGraph p3 = ColoredGraph::create(3, 1, {{0, 1}, {1, 2}}, {1, 1, 1});
  TreeDecomposition pruned = compactify(p3, padded);
  CHECK(pruned.size() == 1);
}

TEST_CASE("compactify on seeded decompositions keeps bags within inputs") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    int n = 5 + static_cast<int>(seed % 8);
    ColoredGraph g = random_connected_graph(n, static_cast<int>(seed % 5), 1, seed);
    // A deliberately sloppy decomposition: everything in the root plus
    // redundant children and one nested redundant chain.
    std::vector<int> parent{-1};
    std::vector<std::vector<int>> bags{{}};
    for (int v = 0; v < n; ++v) bags[0].push_back(v);
    for (int v = 0; v + 1 < n; v += 2) {
      parent.push_back(0);
      bags.push_back({v, v + 1});
    }
    parent.push_back(1);
    bags.push_back({bags[1][0]});
    TreeDecomposition td = make_td(n, std::move(parent), std::move(bags));
    REQUIRE(validate(g, td).valid);
    TreeDecomposition out = compactify(g, td);
    DecompositionReport rep = validate(g, out);
    CHECK(rep.valid);
    CHECK(rep.compact);
    CHECK(out.depth() <= td.depth());
    CHECK(rep.maxAdhesion <= validate(g, td).maxAdhesion);
    for (int t = 0; t < out.size(); ++t) {
      bool subset = false;
      for (const auto& orig : td.bag)
        if (out.bag[t].is_subset_of(orig)) subset = true;
      CHECK(subset);
    }
  }
}

TEST_CASE("interchange document round-trips") {
  ColoredGraph g = random_connected_graph(7, 3, 1, 5);
  TreeDecomposition td = make_td(7, {-1, 0, 0}, {{0, 1, 2, 3, 4, 5, 6}, {0, 1}, {2, 3}});
  std::string doc = decomposition_to_json(td);
  TreeDecomposition back = decomposition_from_json(doc, g.n);
  CHECK(back.root == td.root);
  CHECK(back.parent == td.parent);
  for (int t = 0; t < td.size(); ++t) CHECK(back.bag[t] == td.bag[t]);
  CHECK(decomposition_to_json(back) == doc);

  CHECK_THROWS_AS(decomposition_from_json("{\"nodes\": \"zip\"}", 3), ParseError);
  CHECK_THROWS_AS(decomposition_from_json("not json", 3), ParseError);
}
