#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fairbisect {

/// Family of functions [n] -> [ell] such that every k-subset of [n] is split
/// evenly by some member.  Domain and range are 0-based internally.
struct SplitterFamily {
  int n = 0, k = 0, ell = 0;
  std::vector<std::vector<int>> functions;  // each of length n, values in 0..ell-1
};

struct SplitterOptions {
  uint64_t seed = 0x5eed;
  int maxFamily = 512;  // hard cap; construction fails loudly beyond it
};

/// Constructs an (n, k, k^2) splitter family.  k = 1 needs one constant
/// function; n <= k^2 admits an injection; otherwise a greedy cover over a
/// seeded pool of random maps, verified exhaustively before returning.
SplitterFamily build_splitter(int n, int k, const SplitterOptions& opts = {});

/// True iff some member of the family splits subset evenly (all class counts
/// pairwise within 1).
bool splits_evenly(const std::vector<int>& fn, const std::vector<int>& subset, int ell);

/// Exhaustive verification over all k-subsets of [n].
bool verify_splitter(const SplitterFamily& family);

/// Family of subsets of a ground set such that every disjoint pair
/// (X1, X2) with |X1| <= s1, |X2| <= s2 has a member containing X1 and
/// avoiding X2.
struct CoveringFamily {
  std::vector<int> ground;
  int s1 = 0, s2 = 0;
  std::vector<std::vector<int>> sets;  // sorted subsets of ground
};

enum class CoveringMode {
  kSplitterBased,  // the splitter construction
  kExhaustive,     // all subsets; valid for small ground sets
};

CoveringFamily build_covering_family(const std::vector<int>& ground, int s1, int s2,
                                     CoveringMode mode = CoveringMode::kSplitterBased,
                                     const SplitterOptions& opts = {});

/// Exhaustive verification over all disjoint (X1, X2) pairs at the bound
/// sizes.
bool verify_covering_family(const CoveringFamily& family);

}  // namespace fairbisect
