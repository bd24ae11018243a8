#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fairbisect/decomposition.hpp"
#include "fairbisect/domain.hpp"
#include "fairbisect/graph.hpp"

namespace fairbisect {

/// DP table key: exact cut order w, adhesion trace A_t, per-kind flags and
/// the rounded-down side profiles.
struct TableKey {
  int w = 0;
  uint64_t at = 0;      // A_t as a bitmask over V(G)
  uint8_t flags = 0;    // bit0 = x_A, bit1 = x_ell (where the kind uses them)
  ColorProfile a, b;    // values drawn from the rounding domain

  friend bool operator<(const TableKey& lhs, const TableKey& rhs) {
    if (lhs.at != rhs.at) return lhs.at < rhs.at;
    if (lhs.flags != rhs.flags) return lhs.flags < rhs.flags;
    if (lhs.w != rhs.w) return lhs.w < rhs.w;
    if (lhs.a != rhs.a) return lhs.a < rhs.a;
    return lhs.b < rhs.b;
  }
  friend bool operator==(const TableKey& lhs, const TableKey& rhs) = default;
};

constexpr uint8_t kFlagXA = 1;    // X on the A side
constexpr uint8_t kFlagXEll = 2;  // P_ell on the A side

/// Sparse table: absent key means bottom.  The value is the A-side bitmask of
/// the stored cut over V(G).
using DpTable = std::map<TableKey, uint64_t>;

/// Duplicate corrections applied when two tables sharing vertices are merged.
struct MergeCorrection {
  int dupCross = 0;   // crossing edges counted by both sides
  ColorProfile dupA;  // profile counted twice on the A side
  ColorProfile dupB;
};

/// One way of combining entries of two tables: the contributing weights and
/// profiles per family member, in (left, right) order.
struct WConfiguration {
  std::vector<int> nuW;
  std::vector<ColorProfile> nuA, nuB;
  TableKey merged;
};

/// Enumerates the bucket-compatible entry pairs of two tables, applies the
/// duplicate correction, rounds the corrected sums down into the domain and
/// yields the configurations whose merged key fits the target: weight within
/// target.w and profiles componentwise at most the target's.  Deterministic
/// order (left table outer, right inner, key-sorted).
std::vector<WConfiguration> enumerate_feasible_configurations(const DpTable& left,
                                                              const DpTable& right,
                                                              const MergeCorrection& corr,
                                                              const TableKey& target,
                                                              const RoundingDomain& domain);

struct SolveOptions {
  double eps = 0.5;
  /// Ground sets up to this size use the exhaustive covering family; larger
  /// bags are rejected (desk-scale contract).
  int coveringFallbackThreshold = 16;
  int threads = 1;
  bool certifyTables = false;           // re-verify every stored entry
  std::optional<std::string> dumpDir;   // table dump directory
  long long builderBudget = 200'000'000;
};

struct NodeTableStats {
  int node = 0;
  int sigmaSize = 0;
  long long entries = 0;      // M-table entries
  long double bound = 0;      // (k+1) * 2^|sigma| * |D|^(2c)
};

struct CertificationReport {
  long long entriesChecked = 0;
  long long violations = 0;
  std::vector<std::string> samples;  // first few violation descriptions
};

struct SolveStats {
  int domainSize = 0;
  double delta = 0;
  int decompositionDepth = 0;
  int decompositionNodes = 0;
  int maxAdhesion = 0;
  std::vector<NodeTableStats> nodes;
  long long coveringSetsTried = 0;
};

struct SolveResult {
  std::optional<EdgeCut> cut;
  SolveStats stats;
  CertificationReport certification;
  TreeDecomposition decomposition;
  RoundingDomain domain;
};

/// The component split induced by X on a node's torso: parts[0] = X, parts
/// 1..p the components of H_t minus X, and the child decomposition nodes
/// grouped by the part their adhesion attaches to.
struct RefinementSplit {
  uint64_t x = 0;
  std::vector<uint64_t> parts;              // parts[0] = X
  std::vector<std::vector<int>> groups;     // per part: child node ids, sorted
};

/// Bottom-up dynamic program over a low-depth unbreakable tree decomposition.
/// Requires n <= 64.
class FairDpSolver {
 public:
  FairDpSolver(const FairInstance& inst, const TreeDecomposition& td, const SolveOptions& opts);

  RefinementSplit refinement_components(int node, uint64_t xMask) const;

  /// M_t = first non-bottom M^X_t over the covering family (memoized).
  const DpTable& compute_table_M(int node);
  DpTable compute_table_MX(int node, uint64_t xMask);
  DpTable compute_table_N(int node, const RefinementSplit& ref, int ell);
  DpTable compute_table_Nleq(int node, const RefinementSplit& ref);

  /// Root extraction: first stored root cut passing is_eps_fair, re-verified.
  std::optional<EdgeCut> extract();

  const SolveStats& stats() const { return stats_; }
  const CertificationReport& certification() const { return cert_; }
  const RoundingDomain& domain() const { return domain_; }
  const TreeDecomposition& decomposition() const { return td_; }

 private:
  DpTable base_table(int node, const RefinementSplit& ref, int ell) const;
  DpTable merge_tables(const DpTable& left, const DpTable& right, const MergeCorrection& corr);
  DpTable merge_child_m(int node, const DpTable& acc, const RefinementSplit& ref, int ell,
                        int childId);
  DpTable compute_table_H(int node, const RefinementSplit& ref, int ell, int m);
  MergeCorrection base_correction(int node, const RefinementSplit& ref, int ell,
                                  uint8_t flags) const;
  MergeCorrection x_correction(int node, uint64_t xMask, uint8_t flags) const;
  ColorProfile profile_of(uint64_t mask) const;
  ColorProfile rounded(const ColorProfile& p) const;
  void certify_or_dump(int node, const RefinementSplit& ref, int ell, int m,
                       const std::string& kind, const DpTable& table);
  uint64_t table_universe(int node, const RefinementSplit& ref, int ell, int m,
                          const std::string& kind) const;

  const FairInstance& inst_;  // must outlive the solver
  const ColoredGraph& g_;
  TreeDecomposition td_;
  SolveOptions opts_;
  RoundingDomain domain_;
  int k_ = 0;
  std::vector<uint64_t> bagMask_, sigmaMask_, gammaMask_;
  std::vector<std::vector<int>> children_;
  std::vector<std::optional<DpTable>> mTables_;
  SolveStats stats_;
  CertificationReport cert_;
};

/// Full pipeline: unbreakable builder, depth reduction, DP, extraction.  The
/// returned cut, if any, is certified by is_eps_fair before returning.
SolveResult solve(const FairInstance& inst, const SolveOptions& opts);

/// DP over a caller-provided decomposition (validated, adhesions arbitrary).
SolveResult solve_with_decomposition(const FairInstance& inst, const TreeDecomposition& td,
                                     const SolveOptions& opts);

}  // namespace fairbisect
