#include "fairbisect/graph.hpp"

#include <algorithm>
#include <optional>
#include <queue>
#include <sstream>

#include "fairbisect/errors.hpp"

namespace fairbisect {

ColorProfile profile_add(const ColorProfile& a, const ColorProfile& b) {
  assert(a.size() == b.size());
  ColorProfile out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ColorProfile profile_sub(const ColorProfile& a, const ColorProfile& b) {
  assert(a.size() == b.size());
  ColorProfile out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

bool profile_leq(const ColorProfile& a, const ColorProfile& b) {
  assert(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

std::string profile_to_string(const ColorProfile& p) {
  std::string out = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + ")";
}

ColoredGraph ColoredGraph::create(int n, int c, std::vector<std::pair<int, int>> edges,
                                  std::vector<int> color) {
  if (n < 0 || c < 1) throw std::invalid_argument("graph needs n >= 0 and c >= 1");
  if (static_cast<int>(color.size()) != n)
    throw std::invalid_argument("color vector size must equal n");
  for (int v = 0; v < n; ++v)
    if (color[v] < 1 || color[v] > c)
      throw std::invalid_argument("vertex " + std::to_string(v) + " has color out of 1..c");

  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop rejected");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw std::invalid_argument("duplicate edge rejected");

  ColoredGraph g;
  g.n = n;
  g.c = c;
  g.edges = std::move(edges);
  g.color = std::move(color);
  g.adj.assign(n, {});
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

bool ColoredGraph::has_edge(int u, int v) const {
  if (u > v) std::swap(u, v);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

std::vector<VertexSet> ColoredGraph::components_within(const VertexSet& within) const {
  std::vector<VertexSet> out;
  VertexSet seen(n);
  within.for_each([&](int s) {
    if (seen.test(s)) return;
    VertexSet comp(n);
    std::queue<int> q;
    q.push(s);
    seen.set(s);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      comp.set(v);
      for (int w : adj[v]) {
        if (within.test(w) && !seen.test(w)) {
          seen.set(w);
          q.push(w);
        }
      }
    }
    out.push_back(std::move(comp));
  });
  return out;
}

std::vector<VertexSet> ColoredGraph::components() const {
  return components_within(all_vertices());
}

VertexSet ColoredGraph::neighborhood(const VertexSet& s) const {
  VertexSet out(n);
  s.for_each([&](int v) {
    for (int w : adj[v])
      if (!s.test(w)) out.set(w);
  });
  return out;
}

FairInstance FairInstance::create(ColoredGraph g, int k, ColorProfile rTarget) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  if (static_cast<int>(rTarget.size()) != g.c)
    throw std::invalid_argument("target tuple must have length c");
  FairInstance inst;
  inst.cTotal = color_profile(g, g.all_vertices());
  for (int i = 0; i < g.c; ++i) {
    if (rTarget[i] < 0 || rTarget[i] > inst.cTotal[i])
      throw std::invalid_argument("target r_" + std::to_string(i + 1) +
                                  " outside 0..total for that color");
  }
  inst.graph = std::move(g);
  inst.k = k;
  inst.rTarget = std::move(rTarget);
  return inst;
}

EdgeCut EdgeCut::create(VertexSet ground, VertexSet a) {
  if (!a.is_subset_of(ground)) throw std::domain_error("cut side A not within ground set");
  return EdgeCut{std::move(ground), std::move(a)};
}

int cut_order(const ColoredGraph& g, const EdgeCut& cut) {
  if (cut.groundSet.capacity() != g.n)
    throw std::domain_error("cut ground set sized for a different graph");
  int order = 0;
  for (auto [u, v] : g.edges) {
    if (!cut.groundSet.test(u) || !cut.groundSet.test(v)) continue;
    if (cut.sideA.test(u) != cut.sideA.test(v)) ++order;
  }
  return order;
}

ColorProfile color_profile(const ColoredGraph& g, const VertexSet& subset) {
  if (subset.capacity() != g.n)
    throw std::domain_error("subset sized for a different graph");
  ColorProfile p(g.c, 0);
  subset.for_each([&](int v) { ++p[g.color[v] - 1]; });
  return p;
}

bool is_exact_fair(const FairInstance& inst, const EdgeCut& cut) {
  if (cut.groundSet != inst.graph.all_vertices())
    throw std::domain_error("fairness is defined for cuts spanning V(G)");
  if (color_profile(inst.graph, cut.sideA) != inst.rTarget) return false;
  return cut_order(inst.graph, cut) <= inst.k;
}

bool is_eps_fair(const FairInstance& inst, const EdgeCut& cut, double eps) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (cut.groundSet != inst.graph.all_vertices())
    throw std::domain_error("fairness is defined for cuts spanning V(G)");
  ColorProfile a = color_profile(inst.graph, cut.sideA);
  for (int i = 0; i < inst.graph.c; ++i) {
    long double aBound = static_cast<long double>(inst.rTarget[i]) * (1.0L + eps);
    long double bBound =
        static_cast<long double>(inst.cTotal[i] - inst.rTarget[i]) * (1.0L + eps);
    if (static_cast<long double>(a[i]) > aBound) return false;
    if (static_cast<long double>(inst.cTotal[i] - a[i]) > bBound) return false;
  }
  return cut_order(inst.graph, cut) <= inst.k;
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

long parse_long(const std::string& tok, int lineNo) {
  try {
    size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineNo) + ": expected integer, got '" + tok + "'");
  }
}

}  // namespace

FairInstance parse_instance(std::istream& in) {
  int n = -1, m = -1, c = -1, k = -1;
  std::vector<int> color;
  std::vector<char> seenVertex;
  std::vector<std::pair<int, int>> edges;
  std::optional<ColorProfile> rTarget;

  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kind = toks[0];
    auto fail = [&](const std::string& msg) -> void {
      throw ParseError("line " + std::to_string(lineNo) + ": " + msg);
    };

    if (kind == "p") {
      if (n >= 0) fail("duplicate header");
      if (toks.size() != 6 || toks[1] != "fairbis") fail("expected 'p fairbis n m c k'");
      n = static_cast<int>(parse_long(toks[2], lineNo));
      m = static_cast<int>(parse_long(toks[3], lineNo));
      c = static_cast<int>(parse_long(toks[4], lineNo));
      k = static_cast<int>(parse_long(toks[5], lineNo));
      if (n < 1 || m < 0 || c < 1 || k < 0) fail("header values out of range");
      color.assign(n, 0);
      seenVertex.assign(n, 0);
    } else if (n < 0) {
      fail("'" + kind + "' line before header");
    } else if (kind == "v") {
      if (toks.size() != 3) fail("expected 'v id color'");
      long id = parse_long(toks[1], lineNo);
      long col = parse_long(toks[2], lineNo);
      if (id < 0 || id >= n) fail("vertex id out of range");
      if (seenVertex[id]) fail("vertex " + std::to_string(id) + " declared twice");
      if (col < 1 || col > c) fail("color out of 1..c");
      seenVertex[id] = 1;
      color[id] = static_cast<int>(col);
    } else if (kind == "e") {
      if (toks.size() != 3) fail("expected 'e u v'");
      long u = parse_long(toks[1], lineNo);
      long v = parse_long(toks[2], lineNo);
      if (u < 0 || u >= n || v < 0 || v >= n) fail("edge endpoint out of range");
      if (u == v) fail("self-loop rejected");
      edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    } else if (kind == "r") {
      if (rTarget) fail("duplicate 'r' line");
      if (static_cast<int>(toks.size()) != c + 1) fail("expected c target values");
      ColorProfile r(c);
      for (int i = 0; i < c; ++i) r[i] = static_cast<int>(parse_long(toks[i + 1], lineNo));
      rTarget = std::move(r);
    } else {
      fail("unknown record '" + kind + "'");
    }
  }

  if (n < 0) throw ParseError("missing 'p fairbis' header");
  for (int v = 0; v < n; ++v)
    if (!seenVertex[v]) throw ParseError("vertex " + std::to_string(v) + " has no 'v' line");
  if (static_cast<int>(edges.size()) != m)
    throw ParseError("header announces " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  if (!rTarget) throw ParseError("missing 'r' target line");

  try {
    ColoredGraph g = ColoredGraph::create(n, c, std::move(edges), std::move(color));
    return FairInstance::create(std::move(g), k, std::move(*rTarget));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

FairInstance parse_instance_text(const std::string& text) {
  std::istringstream ss(text);
  return parse_instance(ss);
}

std::string format_instance(const FairInstance& inst) {
  const ColoredGraph& g = inst.graph;
  std::ostringstream out;
  out << "p fairbis " << g.n << " " << g.edges.size() << " " << g.c << " " << inst.k << "\n";
  for (int v = 0; v < g.n; ++v) out << "v " << v << " " << g.color[v] << "\n";
  for (auto [u, v] : g.edges) out << "e " << u << " " << v << "\n";
  out << "r";
  for (int i = 0; i < g.c; ++i) out << " " << inst.rTarget[i];
  out << "\n";
  return out.str();
}

}  // namespace fairbisect
