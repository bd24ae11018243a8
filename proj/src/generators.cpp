#include "fairbisect/generators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fairbisect/errors.hpp"
#include "fairbisect/rng.hpp"

namespace fairbisect {

MdssInstance bcsp_to_mdss(const BcspInstance& bcsp) {
  const int n = bcsp.domainSize;
  const long long bigN = 100LL * n, bigA = 60LL * n, bigB = 40LL * n;

  // Dimensions: (variable, constraint) incidences sorted by (variable index,
  // constraint key).
  std::vector<std::pair<int, std::pair<int, int>>> incidences;
  for (const auto& [key, allowed] : bcsp.constraints) {
    (void)allowed;
    incidences.push_back({key.first, key});
    incidences.push_back({key.second, key});
  }
  std::sort(incidences.begin(), incidences.end());
  std::map<std::pair<int, std::pair<int, int>>, int> dimOf;
  for (size_t d = 0; d < incidences.size(); ++d) dimOf[incidences[d]] = static_cast<int>(d);

  MdssInstance out;
  out.dims = static_cast<int>(incidences.size());

  for (int var = 1; var <= bcsp.kVars; ++var) {
    std::vector<int> myDims;
    for (const auto& [inc, d] : dimOf)
      if (inc.first == var) myDims.push_back(d);
    if (myDims.empty()) continue;  // unconstrained variable contributes nothing
    for (int a = 1; a <= n; ++a) {
      std::vector<long long> vec(out.dims, 0);
      for (int d : myDims) vec[d] = bigA + a;
      out.vectors.push_back(std::move(vec));
    }
  }
  for (const auto& [key, allowed] : bcsp.constraints) {
    int di = dimOf[{key.first, key}];
    int dj = dimOf[{key.second, key}];
    for (auto [a, b] : allowed) {
      std::vector<long long> vec(out.dims, 0);
      vec[di] = bigB - a;
      vec[dj] = bigB - b;
      out.vectors.push_back(std::move(vec));
    }
  }
  out.target.assign(out.dims, bigN);
  for (const auto& vec : out.vectors)
    for (long long e : vec)
      if (e < 0) throw PipelineError("reduction emitted a negative entry");
  return out;
}

MdssInstance mdss_to_mdp(const MdssInstance& mdss) {
  MdssInstance out = mdss;
  std::vector<long long> colSum(out.dims, 0);
  for (const auto& vec : out.vectors)
    for (int d = 0; d < out.dims; ++d) colSum[d] += vec[d];

  // Parity vector: entries target_j + 1 or + 2, chosen (smallest first) so
  // every column sum becomes even.  Entries exceed the target, so the vector
  // can never join a target-sum subset.
  std::vector<long long> parity(out.dims);
  for (int d = 0; d < out.dims; ++d) {
    long long small = out.target[d] + 1;
    parity[d] = ((colSum[d] + small) % 2 == 0) ? small : small + 1;
    colSum[d] += parity[d];
  }
  out.vectors.push_back(parity);

  std::vector<long long> slack(out.dims);
  for (int d = 0; d < out.dims; ++d) {
    slack[d] = colSum[d] - 2 * out.target[d];
    if (slack[d] < 0)
      throw std::domain_error("mdss_to_mdp needs 2T <= S plus parity slack (dimension " +
                              std::to_string(d) + ")");
    colSum[d] += slack[d];
  }
  out.vectors.push_back(slack);

  for (int d = 0; d < out.dims; ++d) {
    if (colSum[d] % 2 != 0) throw PipelineError("partition form requires even column sums");
    out.target[d] = colSum[d] / 2;
  }
  return out;
}

GeneratedFairInstance mdp_to_fair_bisection(const MdssInstance& mdp) {
  const int c = mdp.dims;
  std::vector<long long> colSum(c, 0);
  for (const auto& vec : mdp.vectors)
    for (int d = 0; d < c; ++d) colSum[d] += vec[d];
  for (int d = 0; d < c; ++d) {
    if (colSum[d] % 2 != 0)
      throw std::domain_error("mdp_to_fair_bisection needs even per-color sums");
    if (colSum[d] / 2 != mdp.target[d])
      throw std::domain_error("mdp_to_fair_bisection needs a partition-form target");
  }

  GeneratedFairInstance out;
  std::vector<int> color;
  std::vector<std::pair<int, int>> edges;
  int next = 0;
  for (size_t i = 0; i < mdp.vectors.size(); ++i) {
    long long total = std::accumulate(mdp.vectors[i].begin(), mdp.vectors[i].end(), 0LL);
    if (total == 0) {
      out.skippedVectors.push_back(static_cast<int>(i));
      continue;
    }
    int center = next;
    for (int d = 0; d < c; ++d) {
      for (long long rep = 0; rep < mdp.vectors[i][d]; ++rep) {
        color.push_back(d + 1);
        if (next != center) edges.emplace_back(center, next);
        ++next;
      }
    }
  }
  ColorProfile r(c);
  for (int d = 0; d < c; ++d) {
    if (colSum[d] > std::numeric_limits<int>::max())
      throw std::domain_error("instance too large for dense vertex ids");
    r[d] = static_cast<int>(colSum[d] / 2);
  }
  ColoredGraph g = ColoredGraph::create(next, c, std::move(edges), std::move(color));
  out.instance = FairInstance::create(std::move(g), 0, std::move(r));
  return out;
}

FairInstance random_instance(int n, int m, int c, int k, uint64_t seed) {
  long long maxEdges = static_cast<long long>(n) * (n - 1) / 2;
  if (m < 0 || m > maxEdges) throw std::invalid_argument("m outside 0..C(n,2)");
  Rng rng(seed);

  std::vector<std::pair<int, int>> all;
  all.reserve(maxEdges);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) all.emplace_back(u, v);
  // Partial Fisher-Yates: the first m entries become the edge set.
  for (int i = 0; i < m; ++i) {
    int j = i + rng.below_int(static_cast<int>(all.size()) - i);
    std::swap(all[i], all[j]);
  }
  all.resize(m);

  std::vector<int> color(n);
  for (int v = 0; v < n; ++v) color[v] = 1 + rng.below_int(c);
  ColoredGraph g = ColoredGraph::create(n, c, std::move(all), std::move(color));

  VertexSet a(n);
  for (int v = 0; v < n; ++v)
    if (rng.coin()) a.set(v);
  ColorProfile r = color_profile(g, a);
  return FairInstance::create(std::move(g), k, std::move(r));
}

ColoredGraph random_connected_graph(int n, int extraEdges, int c, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    int p = rng.below_int(v);
    edges.emplace_back(std::min(p, v), std::max(p, v));
  }
  std::vector<std::pair<int, int>> rest;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (std::find(edges.begin(), edges.end(), std::make_pair(u, v)) == edges.end())
        rest.emplace_back(u, v);
  for (int i = 0; i < extraEdges && !rest.empty(); ++i) {
    int j = rng.below_int(static_cast<int>(rest.size()));
    edges.push_back(rest[j]);
    rest.erase(rest.begin() + j);
  }
  std::vector<int> color(n);
  for (int v = 0; v < n; ++v) color[v] = 1 + rng.below_int(c);
  return ColoredGraph::create(n, c, std::move(edges), std::move(color));
}

BcspInstance random_bcsp(int kVars, int domainSize, uint64_t seed) {
  Rng rng(seed);
  BcspInstance out;
  out.kVars = kVars;
  out.domainSize = domainSize;
  for (int i = 1; i <= kVars; ++i)
    for (int j = i + 1; j <= kVars; ++j) {
      if (!rng.coin()) continue;
      std::vector<std::pair<int, int>> allowed;
      for (int a = 1; a <= domainSize; ++a)
        for (int b = 1; b <= domainSize; ++b)
          if (rng.coin()) allowed.emplace_back(a, b);
      out.constraints[{i, j}] = std::move(allowed);
    }
  if (out.constraints.empty()) {
    std::vector<std::pair<int, int>> allowed;
    for (int a = 1; a <= domainSize; ++a)
      for (int b = 1; b <= domainSize; ++b)
        if (rng.coin()) allowed.emplace_back(a, b);
    out.constraints[{1, std::max(2, kVars)}] = std::move(allowed);
  }
  return out;
}

bool bcsp_satisfiable(const BcspInstance& bcsp) {
  std::vector<int> assign(bcsp.kVars + 1, 1);
  std::function<bool(int)> rec = [&](int var) -> bool {
    if (var > bcsp.kVars) {
      for (const auto& [key, allowed] : bcsp.constraints) {
        std::pair<int, int> val{assign[key.first], assign[key.second]};
        if (std::find(allowed.begin(), allowed.end(), val) == allowed.end()) return false;
      }
      return true;
    }
    for (int a = 1; a <= bcsp.domainSize; ++a) {
      assign[var] = a;
      if (rec(var + 1)) return true;
    }
    return false;
  };
  return rec(1);
}

bool mdss_solvable_bruteforce(const MdssInstance& mdss) {
  const size_t v = mdss.vectors.size();
  if (v > 24) throw BudgetError("mdss brute force limited to 24 vectors");
  for (uint64_t mask = 0; mask < (uint64_t(1) << v); ++mask) {
    std::vector<long long> sum(mdss.dims, 0);
    for (size_t i = 0; i < v; ++i)
      if ((mask >> i) & 1)
        for (int d = 0; d < mdss.dims; ++d) sum[d] += mdss.vectors[i][d];
    if (sum == mdss.target) return true;
  }
  return false;
}

}  // namespace fairbisect
