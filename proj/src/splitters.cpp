#include "fairbisect/splitters.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fairbisect/errors.hpp"
#include "fairbisect/rng.hpp"

namespace fairbisect {

namespace {

/// Visits all k-subsets of [n] in lexicographic order.
template <class F>
void for_each_subset(int n, int k, F&& visit) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

bool splits_evenly(const std::vector<int>& fn, const std::vector<int>& subset, int ell) {
  std::vector<int> count(ell, 0);
  for (int v : subset) ++count[fn[v]];
  auto [mn, mx] = std::minmax_element(count.begin(), count.end());
  return *mx - *mn <= 1;
}

bool verify_splitter(const SplitterFamily& family) {
  bool ok = true;
  for_each_subset(family.n, family.k, [&](const std::vector<int>& subset) {
    if (!ok) return;
    for (const auto& fn : family.functions)
      if (splits_evenly(fn, subset, family.ell)) return;
    ok = false;
  });
  return ok;
}

SplitterFamily build_splitter(int n, int k, const SplitterOptions& opts) {
  if (n < 1 || k < 1) throw std::invalid_argument("splitter needs n, k >= 1");
  SplitterFamily fam;
  fam.n = n;
  fam.k = k;
  fam.ell = k * k;

  if (k == 1) {
    fam.functions.push_back(std::vector<int>(n, 0));
    return fam;
  }
  if (n <= fam.ell) {
    // An injection splits every subset evenly.
    std::vector<int> id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    fam.functions.push_back(std::move(id));
    return fam;
  }

  // Greedy cover: index all k-subsets, then repeatedly take the pool map
  // covering the most still-unsplit subsets.
  std::vector<std::vector<int>> subsets;
  for_each_subset(n, k, [&](const std::vector<int>& s) { subsets.push_back(s); });
  std::vector<char> covered(subsets.size(), 0);
  size_t uncovered = subsets.size();

  Rng rng(opts.seed);
  auto randomMap = [&] {
    std::vector<int> fn(n);
    for (int i = 0; i < n; ++i) fn[i] = rng.below_int(fam.ell);
    return fn;
  };

  const int poolBatch = 64;
  while (uncovered > 0) {
    std::vector<int> bestFn;
    std::vector<size_t> bestHits;
    for (int cand = 0; cand < poolBatch; ++cand) {
      std::vector<int> fn = randomMap();
      std::vector<size_t> hits;
      for (size_t si = 0; si < subsets.size(); ++si)
        if (!covered[si] && splits_evenly(fn, subsets[si], fam.ell)) hits.push_back(si);
      if (hits.size() > bestHits.size()) {
        bestHits = std::move(hits);
        bestFn = std::move(fn);
      }
    }
    if (bestHits.empty()) {
      // Target the lexicographically first uncovered subset directly.
      size_t si = 0;
      while (covered[si]) ++si;
      std::vector<int> fn(n, 0);
      for (size_t j = 0; j < subsets[si].size(); ++j) fn[subsets[si][j]] = static_cast<int>(j);
      bestFn = std::move(fn);
      bestHits.push_back(si);
      for (size_t other = 0; other < subsets.size(); ++other)
        if (other != si && !covered[other] &&
            splits_evenly(bestFn, subsets[other], fam.ell) )
          bestHits.push_back(other);
    }
    for (size_t si : bestHits)
      if (!covered[si]) {
        covered[si] = 1;
        --uncovered;
      }
    fam.functions.push_back(std::move(bestFn));
    if (static_cast<int>(fam.functions.size()) > opts.maxFamily)
      throw BudgetError("splitter family exceeded the configured size budget");
  }

  if (!verify_splitter(fam))
    throw PipelineError("constructed splitter failed exhaustive verification");
  return fam;
}

CoveringFamily build_covering_family(const std::vector<int>& ground, int s1, int s2,
                                     CoveringMode mode, const SplitterOptions& opts) {
  const int sz = static_cast<int>(ground.size());
  if (s1 < 0 || s2 < 0 || s1 >= sz || s2 >= sz)
    throw std::invalid_argument("covering family needs 0 <= s1, s2 < |S|");

  CoveringFamily fam;
  fam.ground = ground;
  fam.s1 = s1;
  fam.s2 = s2;

  std::set<std::vector<int>> dedup;
  auto emit = [&](std::vector<int> subset) {
    std::sort(subset.begin(), subset.end());
    if (dedup.insert(subset).second) fam.sets.push_back(std::move(subset));
  };

  if (mode == CoveringMode::kExhaustive) {
    if (sz > 20) throw BudgetError("exhaustive covering family needs |S| <= 20");
    for (uint64_t mask = 0; mask < (uint64_t(1) << sz); ++mask) {
      std::vector<int> subset;
      for (int i = 0; i < sz; ++i)
        if ((mask >> i) & 1) subset.push_back(ground[i]);
      emit(std::move(subset));
    }
    return fam;
  }

  // Splitter construction: for each pair (s1', s2'), build a
  // (|S|, s1'+s2', (s1'+s2')^2) splitter; each function f and each size-s1'
  // subset X of its range yields the member {ground[j] : f(j) in X}.
  for (int s1p = 0; s1p <= s1; ++s1p) {
    for (int s2p = 0; s2p <= s2; ++s2p) {
      int sPrime = s1p + s2p;
      if (sPrime == 0) {
        emit({});
        continue;
      }
      if (sPrime > sz) continue;
      SplitterFamily splitter = build_splitter(sz, sPrime, opts);
      for (const auto& fn : splitter.functions) {
        for_each_subset(splitter.ell, s1p, [&](const std::vector<int>& rangeSubset) {
          std::vector<char> inX(splitter.ell, 0);
          for (int r : rangeSubset) inX[r] = 1;
          std::vector<int> subset;
          for (int j = 0; j < sz; ++j)
            if (inX[fn[j]]) subset.push_back(ground[j]);
          emit(std::move(subset));
        });
        if (s1p == 0) emit({});
      }
    }
  }
  return fam;
}

bool verify_covering_family(const CoveringFamily& fam) {
  const int sz = static_cast<int>(fam.ground.size());
  if (sz > 63) throw BudgetError("covering verification needs |S| <= 63");

  auto groundIndex = [&](int value) {
    for (int i = 0; i < sz; ++i)
      if (fam.ground[i] == value) return i;
    throw std::invalid_argument("covering member outside ground set");
  };
  std::vector<uint64_t> memberMasks;
  memberMasks.reserve(fam.sets.size());
  for (const auto& member : fam.sets) {
    uint64_t m = 0;
    for (int value : member) m |= uint64_t(1) << groundIndex(value);
    memberMasks.push_back(m);
  }

  // All disjoint (X1, X2) pairs with |X1| <= s1, |X2| <= s2 over ground
  // indices.
  bool ok = true;
  for (int a = 0; a <= fam.s1 && ok; ++a) {
    for_each_subset(sz, a, [&](const std::vector<int>& x1Idx) {
      if (!ok) return;
      uint64_t x1 = 0;
      for (int i : x1Idx) x1 |= uint64_t(1) << i;
      std::vector<int> rest;
      for (int i = 0; i < sz; ++i)
        if (!((x1 >> i) & 1)) rest.push_back(i);
      for (int b = 0; b <= fam.s2 && ok; ++b) {
        for_each_subset(static_cast<int>(rest.size()), b, [&](const std::vector<int>& x2Pos) {
          if (!ok) return;
          uint64_t x2 = 0;
          for (int p : x2Pos) x2 |= uint64_t(1) << rest[p];
          for (uint64_t m : memberMasks)
            if ((x1 & ~m) == 0 && (x2 & m) == 0) return;
          ok = false;
        });
      }
    });
  }
  return ok;
}

}  // namespace fairbisect
