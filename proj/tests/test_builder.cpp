#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairbisect/builder.hpp"
#include "fairbisect/generators.hpp"

using namespace fairbisect;

namespace {

void certify(const ColoredGraph& g, const TreeDecomposition& td, const BuilderConfig& cfg) {
  DecompositionReport rep = validate(g, td);
  CHECK(rep.valid);
  CHECK(rep.compact);
  CHECK(rep.maxAdhesion <= cfg.k);
  for (const auto& bag : td.bag) CHECK(is_unbreakable(g, bag, cfg.q, cfg.k).unbreakable);
}

}  // namespace

TEST_CASE("find_breaking_cut worked examples") {
  // K5 with q = 2, k = 1: every 3/2 split crosses at least six edges.
  std::vector<std::pair<int, int>> k5;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) k5.emplace_back(u, v);
  ColoredGraph clique = ColoredGraph::create(5, 1, std::move(k5), {1, 1, 1, 1, 1});
  CHECK_FALSE(find_breaking_cut(clique, clique.all_vertices(), 2, 1).has_value());

  // Two disjoint triangles split along the component boundary at order 0.
  ColoredGraph twoTri = ColoredGraph::create(
      6, 1, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}}, {1, 1, 1, 1, 1, 1});
  auto wit = find_breaking_cut(twoTri, twoTri.all_vertices(), 2, 0);
  REQUIRE(wit.has_value());
  CHECK(cut_order(twoTri, *wit) == 0);
  CHECK(wit->sideA.count() == 3);

  // Any bag of size <= 2q+1 yields no breaking cut.
  CHECK_FALSE(find_breaking_cut(twoTri, VertexSet::of(6, {0, 1, 2, 3, 4}), 2, 3).has_value());
}

TEST_CASE("single-bag outputs for unbreakable graphs") {
  std::vector<std::pair<int, int>> k5;
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) k5.emplace_back(u, v);
  ColoredGraph clique = ColoredGraph::create(5, 1, std::move(k5), {1, 1, 1, 1, 1});
  BuilderConfig cfg = BuilderConfig::with_k(1);
  TreeDecomposition td = build_unbreakable_decomposition(clique, cfg);
  CHECK(td.size() == 1);
  CHECK(td.bag[0] == clique.all_vertices());
  certify(clique, td, cfg);
}

TEST_CASE("two triangles joined by one edge split into triangle bags") {
  ColoredGraph g = ColoredGraph::create(
      6, 1, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}}, {1, 1, 1, 1, 1, 1});
  BuilderConfig cfg = BuilderConfig::with_k(1);
  cfg.q = 2;
  TreeDecomposition td = build_unbreakable_decomposition(g, cfg);
  certify(g, td, cfg);
  CHECK(td.size() >= 2);
  CHECK(validate(g, td).maxAdhesion <= 1);
}

TEST_CASE("disconnected graphs decompose per component") {
  ColoredGraph g = ColoredGraph::create(7, 1, {{0, 1}, {1, 2}, {3, 4}, {5, 6}}, //
                                        {1, 1, 1, 1, 1, 1, 1});
  BuilderConfig cfg = BuilderConfig::with_k(1);
  TreeDecomposition td = build_unbreakable_decomposition(g, cfg);
  DecompositionReport rep = validate(g, td);
  CHECK(rep.valid);
  CHECK(rep.maxAdhesion <= 1);
  for (const auto& bag : td.bag) CHECK(is_unbreakable(g, bag, cfg.q, cfg.k).unbreakable);
}

TEST_CASE("seeded random graphs certify across k") {
  int trials = 0;
  for (uint64_t seed = 1; seed <= 24; ++seed) {
    int n = 6 + static_cast<int>(seed % 9);  // up to 14
    int m = std::min(n * (n - 1) / 2, n + static_cast<int>(seed % 6));
    ColoredGraph g = random_connected_graph(n, m - (n - 1), 1, seed);
    for (int k = 0; k <= 3; ++k) {
      BuilderConfig cfg = BuilderConfig::with_k(k);
      TreeDecomposition td = build_unbreakable_decomposition(g, cfg);
      certify(g, td, cfg);
      ++trials;
    }
  }
  CHECK(trials == 24 * 4);
}

TEST_CASE("builder is deterministic") {
  ColoredGraph g = random_connected_graph(12, 5, 1, 99);
  BuilderConfig cfg = BuilderConfig::with_k(2);
  TreeDecomposition a = build_unbreakable_decomposition(g, cfg);
  TreeDecomposition b = build_unbreakable_decomposition(g, cfg);
  CHECK(a.parent == b.parent);
  CHECK(a.root == b.root);
  for (int t = 0; t < a.size(); ++t) CHECK(a.bag[t] == b.bag[t]);
}
