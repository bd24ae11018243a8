#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fairbisect/graph.hpp"

namespace fairbisect {

/// Binary CSP: variables x_1..x_kVars over domain [n], constraints on pairs
/// (i, j) with i < j listing the allowed value pairs.
struct BcspInstance {
  int kVars = 0;
  int domainSize = 0;
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> constraints;
};

/// Multi-dimensional subset sum: non-negative integer vectors and a target.
struct MdssInstance {
  int dims = 0;
  std::vector<std::vector<long long>> vectors;
  std::vector<long long> target;
};

/// Star-forest instance assembled from a partition-form MDSS instance; the
/// report lists vectors skipped for being all-zero.
struct GeneratedFairInstance {
  FairInstance instance;
  std::vector<int> skippedVectors;
};

/// One dimension per (variable, constraint) incidence, value vectors
/// V(x_i, a) with entry A+a, constraint vectors V(C_ij, a, b) with entries
/// B-a and B-b, target N per dimension, where N = 100n, A = 60n, B = 40n.
MdssInstance bcsp_to_mdss(const BcspInstance& bcsp);

/// Appends a parity-fixing vector (entries target_j + 1 or + 2) and the slack
/// vector S - 2T, retargeting to half the column sums.  Throws
/// std::domain_error when S - 2T would go negative.
MdssInstance mdss_to_mdp(const MdssInstance& mdss);

/// One star per vector with V_i[j] vertices of color j; k = 0 and r = the
/// per-color half sums.
GeneratedFairInstance mdp_to_fair_bisection(const MdssInstance& mdp);

/// Seeded uniform simple graph with uniform colors; r is read off a random
/// bipartition so the instance always has an achievable target profile.
FairInstance random_instance(int n, int m, int c, int k, uint64_t seed);

/// Seeded connected graph: a random tree plus extra edges.
ColoredGraph random_connected_graph(int n, int extraEdges, int c, uint64_t seed);

/// Seeded random BCSP: every pair becomes a constraint with probability 1/2
/// (at least one constraint overall), each value pair allowed with
/// probability 1/2.
BcspInstance random_bcsp(int kVars, int domainSize, uint64_t seed);

/// Brute-force BCSP satisfiability (domainSize^kVars assignments).
bool bcsp_satisfiable(const BcspInstance& bcsp);

/// Brute-force MDSS solvability over all vector subsets (guarded small).
bool mdss_solvable_bruteforce(const MdssInstance& mdss);

}  // namespace fairbisect
