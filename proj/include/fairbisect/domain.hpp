#pragma once

#include <cstdint>
#include <vector>

namespace fairbisect {

/// Error-budget constant from the accuracy analysis; 10 suffices.
inline constexpr int kGeometricZ = 10;

/// Geometric grid D = {floor((1+delta)^i) : i >= 0} ∪ {0}, truncated at
/// maxValue, with consecutive members d < d' satisfying
/// d' <= floor((1+delta)*d) + 1.
struct RoundingDomain {
  double delta = 0;
  int64_t maxValue = 0;
  std::vector<int64_t> values;  // strictly increasing, starts 0, contains 1

  int size() const { return static_cast<int>(values.size()); }
  bool dense() const { return values.back() == maxValue && size() == maxValue + 1; }
};

RoundingDomain build_domain(double delta, int64_t n);

/// max{d in D : d <= v};  v must be non-negative.
int64_t round_down(int64_t v, const RoundingDomain& d);
/// min{d in D : d >= v};  throws std::domain_error above the domain maximum.
int64_t round_up(int64_t v, const RoundingDomain& d);

/// delta = eps / (2 z log^3 n) with logs base 2 (clamped below by 1).
double rounding_delta(double eps, int64_t n);

/// Numeric check of the accuracy bound (1+delta)^(z log^3 n) <= 1 + eps.
bool error_budget_holds(double eps, int64_t n);

/// |D| <= log_{1+delta}(n) + 2 for the domain built from eps at size n.
bool domain_size_bound_holds(double eps, int64_t n);

}  // namespace fairbisect
