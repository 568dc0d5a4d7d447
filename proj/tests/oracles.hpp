#pragma once

// Reference computations written independently of the library code paths.

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

// Exhaustive min/max of the weighted average over all 2^P corner weightings.
inline std::pair<double, double> corner_extremes(const std::vector<double>& lower, const std::vector<double>& upper,
                                                 const std::vector<double>& d) {
  const std::size_t P = d.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (unsigned long mask = 0; mask < (1UL << P); ++mask) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      const double w = (mask >> p) & 1UL ? upper[p] : lower[p];
      num += w * d[p];
      den += w;
    }
    if (den <= 0.0) continue;
    lo = std::min(lo, num / den);
    hi = std::max(hi, num / den);
  }
  return {lo, hi};
}

inline double triangle(double z, double l, double c, double r) {
  if (z <= l || z >= r) return 0.0;
  return z <= c ? (z - l) / (c - l) : (r - z) / (r - c);
}

// Central difference of f at x along coordinate i.
inline double central_difference(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                                 std::size_t i, double h) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double plus = f(x);
  x[i] = x0 - h;
  const double minus = f(x);
  return (plus - minus) / (2.0 * h);
}

// Anchors k with k >= m and k + N <= K - 1, stepping by stride.
inline std::size_t enumerate_anchors(std::size_t K, int m, int N, int stride) {
  std::size_t count = 0;
  for (long k = m; k + N <= static_cast<long>(K) - 1; k += stride) ++count;
  return count;
}

inline double pinball(double e, double tau) { return e >= 0.0 ? tau * e : (tau - 1.0) * e; }

}  // namespace oracle
