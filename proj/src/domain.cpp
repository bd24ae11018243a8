#include "fairbisect/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairbisect {

RoundingDomain build_domain(double delta, int64_t n) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (n < 1) throw std::invalid_argument("domain needs n >= 1");

  RoundingDomain d;
  d.delta = delta;
  d.maxValue = n;
  d.values.push_back(0);

  // floor((1+delta)^i) by repeated multiplication, deduplicated.  Skipping
  // ahead when growth per step is below one keeps the loop short for tiny
  // delta: once x >= 1/delta the floor advances every step.
  long double x = 1.0L;
  const long double base = 1.0L + static_cast<long double>(delta);
  int64_t last = 0;
  while (true) {
    int64_t v = static_cast<int64_t>(std::floor(x));
    if (v > n) break;
    if (v > last) {
      d.values.push_back(v);
      last = v;
    }
    if (x > static_cast<long double>(n) * base + 2) break;
    x *= base;
  }

  // Dense prefix shortcut: if delta is so small that every integer up to n is
  // hit, the loop above already produced 0..n; otherwise enforce the gap
  // invariant d' <= floor((1+delta) d) + 1 by inserting midpoints.
  std::vector<int64_t> repaired;
  repaired.push_back(d.values[0]);
  for (size_t i = 1; i < d.values.size(); ++i) {
    int64_t prev = repaired.back();
    int64_t next = d.values[i];
    while (prev >= 1 && next > static_cast<int64_t>(std::floor((1.0L + (long double)delta) *
                                                               (long double)prev)) +
                                   1) {
      int64_t fill =
          static_cast<int64_t>(std::floor((1.0L + (long double)delta) * (long double)prev)) + 1;
      repaired.push_back(fill);
      prev = fill;
    }
    repaired.push_back(next);
    }
  d.values = std::move(repaired);

  return d;
}

int64_t round_down(int64_t v, const RoundingDomain& d) {
  if (v < 0) throw std::domain_error("round_down needs v >= 0");
  auto it = std::upper_bound(d.values.begin(), d.values.end(), v);
  return *(it - 1);
}

int64_t round_up(int64_t v, const RoundingDomain& d) {
  if (v < 0) throw std::domain_error("round_up needs v >= 0");
  auto it = std::lower_bound(d.values.begin(), d.values.end(), v);
  if (it == d.values.end()) throw std::domain_error("round_up above domain maximum");
  return *it;
}

namespace {

long double log2_clamped(int64_t n) {
  long double lg = std::log2(static_cast<long double>(n));
  return std::max<long double>(1.0L, lg);
}

}  // namespace

double rounding_delta(double eps, int64_t n) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  long double lg = log2_clamped(n);
  return static_cast<double>(static_cast<long double>(eps) / (2.0L * kGeometricZ * lg * lg * lg));
}

bool error_budget_holds(double eps, int64_t n) {
  long double lg = log2_clamped(n);
  long double delta = rounding_delta(eps, n);
  long double exponent = kGeometricZ * lg * lg * lg;
  long double total = std::pow(1.0L + delta, exponent);
  return total <= 1.0L + static_cast<long double>(eps);
}

bool domain_size_bound_holds(double eps, int64_t n) {
  double delta = rounding_delta(eps, n);
  RoundingDomain d = build_domain(delta, n);
  long double bound =
      std::log(static_cast<long double>(n)) / std::log(1.0L + static_cast<long double>(delta)) +
      2.0L;
  return static_cast<long double>(d.size()) <= bound;
}

}  // namespace fairbisect
