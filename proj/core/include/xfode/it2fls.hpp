#pragma once

// Single-input interval type-2 TSK fuzzy system with affine consequents.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "xfode/partition.hpp"

namespace xfode {

struct FiringInterval {
  std::vector<double> lower;
  std::vector<double> upper;
};

template <class T>
struct TypeReduced {
  T lower{};
  T upper{};
};

using Interval = TypeReduced<double>;

// Type-reduced set per output together with its midpoint.
template <class T>
struct BasicTrs {
  std::vector<T> lower;
  std::vector<T> upper;
  std::vector<T> crisp;
  bool degenerate = false;  // AFODE+ fallback to the nearest rule was used
};

using Trs = BasicTrs<double>;

// Karnik-Mendel bounds for two rules a, b with d_a <= d_b (L = R = 1).
// A rule whose upper grade is not above kActiveThreshold is treated as silent.
template <class T>
TypeReduced<T> two_rule_type_reduce(const T& lower_a, const T& upper_a, const T& d_a,
                                    const T& lower_b, const T& upper_b, const T& d_b) {
  const bool a_fires = value(upper_a) > kActiveThreshold;
  const bool b_fires = value(upper_b) > kActiveThreshold;
  if (!a_fires && !b_fires) throw DegenerateFiring("no rule fires in two-rule type reduction");
  if (!b_fires) return {d_a, d_a};
  if (!a_fires) return {d_b, d_b};
  // Written as d_a + w (d_b - d_a) so ties return the common value exactly.
  const T gap = d_b - d_a;
  return {d_a + lower_b * gap / (upper_a + lower_b), d_a + upper_b * gap / (lower_a + upper_b)};
}

// Exact extrema of sum(w d) / sum(w) over w_p in [lower_p, upper_p], found by
// scanning every switch point of the consequents sorted ascending (ties
// broken by rule index). The winning switch point is chosen on values, so for
// ad::Var the gradient treats it as a constant of the forward pass.
template <class T>
TypeReduced<T> km_reduce(std::span<const T> lower, std::span<const T> upper, std::span<const T> d) {
  const std::size_t P = d.size();
  double total = 0.0;
  for (const T& u : upper) total += value(u);
  if (!(total > kActiveThreshold)) throw DegenerateFiring("total upper firing is zero");

  std::vector<std::size_t> order(P);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return value(d[i]) < value(d[j]); });

  // candidate(k, head, tail): weights `head` on the k smallest consequents.
  auto scan = [&](std::span<const T> head, std::span<const T> tail, bool minimize) {
    double head_num = 0.0, head_den = 0.0, tail_num = 0.0, tail_den = 0.0;
    for (std::size_t j : order) {
      tail_num += value(tail[j]) * value(d[j]);
      tail_den += value(tail[j]);
    }
    std::size_t best_k = 0;
    double best = 0.0;
    bool found = false;
    for (std::size_t k = 0; k <= P; ++k) {
      if (k > 0) {
        const std::size_t j = order[k - 1];
        head_num += value(head[j]) * value(d[j]);
        head_den += value(head[j]);
        tail_num -= value(tail[j]) * value(d[j]);
        tail_den -= value(tail[j]);
      }
      const double den = head_den + tail_den;
      if (!(den > 0.0)) continue;
      const double y = (head_num + tail_num) / den;
      if (!found || (minimize ? y < best : y > best)) {
        best = y;
        best_k = k;
        found = true;
      }
    }
    T num(0.0), den(0.0);
    for (std::size_t k = 0; k < P; ++k) {
      const std::size_t j = order[k];
      const T& w = k < best_k ? head[j] : tail[j];
      num += w * d[j];
      den += w;
    }
    return num / den;
  };
  T lo = scan(upper, lower, true);
  T hi = scan(lower, upper, false);
  // Both ends coincide up to rounding when the spread collapses; keep them ordered.
  if (value(lo) > value(hi)) std::swap(lo, hi);
  return {lo, hi};
}

Interval km_type_reduce(const FiringInterval& firing, std::span<const double> d);

// Brute-force extrema over all 2^P corner weightings; P <= 20.
Interval vertex_oracle(const FiringInterval& firing, std::span<const double> d);

template <class T>
struct BasicFls {
  BasicPartition<T> partition;
  int outputs = 1;
  // consequents[(p * outputs + o) * 2 + 0] is the slope, + 1 the intercept.
  std::vector<T> consequents;

  int rules() const { return partition.rules(); }
  const T& slope(int p, int o) const { return consequents[(p * outputs + o) * 2]; }
  const T& intercept(int p, int o) const { return consequents[(p * outputs + o) * 2 + 1]; }
  T consequent(int p, int o, const T& z) const { return slope(p, o) * z + intercept(p, o); }
};

using It2Fls = BasicFls<double>;

FiringInterval firing_intervals(const It2Fls& fls, double z);

// P x n_x row-major matrix of affine consequents at the unclamped input.
std::vector<double> consequent_values(const It2Fls& fls, double z);

template <class T>
BasicTrs<T> infer(const BasicFls<T>& fls, const T& z) {
  const int n = fls.outputs;
  BasicTrs<T> trs;
  trs.lower.resize(n);
  trs.upper.resize(n);
  trs.crisp.resize(n);
  const BasicPartition<T>& part = fls.partition;

  if (part.kind != PartitionKind::gauss) {
    const SegmentFiring<T> seg = segment_firing(part, z);
    const int a = seg.first;
    const int b = a + 1;
    const T lower_a = part.height[a] * seg.upper[0];
    const T lower_b = part.height[b] * seg.upper[1];
    for (int o = 0; o < n; ++o) {
      const T d_a = fls.consequent(a, o, z);
      const T d_b = fls.consequent(b, o, z);
      const TypeReduced<T> y = value(d_a) <= value(d_b)
                                   ? two_rule_type_reduce(lower_a, seg.upper[0], d_a, lower_b, seg.upper[1], d_b)
                                   : two_rule_type_reduce(lower_b, seg.upper[1], d_b, lower_a, seg.upper[0], d_a);
      trs.lower[o] = y.lower;
      trs.upper[o] = y.upper;
    }
  } else {
    const int P = fls.rules();
    std::vector<T> up(P), lo(P);
    double total = 0.0;
    for (int p = 0; p < P; ++p) {
      up[p] = gauss_grade(z, part.center[p], part.left[p]);
      lo[p] = part.height[p] * up[p];
      total += value(up[p]);
    }
    if (!(total > kActiveThreshold)) {
      int nearest = 0;
      for (int p = 1; p < P; ++p)
        if (std::abs(value(z) - value(part.center[p])) < std::abs(value(z) - value(part.center[nearest])))
          nearest = p;
      for (int o = 0; o < n; ++o) trs.lower[o] = trs.upper[o] = fls.consequent(nearest, o, z);
      trs.degenerate = true;
    } else {
      std::vector<T> d(P);
      for (int o = 0; o < n; ++o) {
        for (int p = 0; p < P; ++p) d[p] = fls.consequent(p, o, z);
        const TypeReduced<T> y = km_reduce<T>(lo, up, d);
        trs.lower[o] = y.lower;
        trs.upper[o] = y.upper;
      }
    }
  }
  for (int o = 0; o < n; ++o) trs.crisp[o] = 0.5 * (trs.lower[o] + trs.upper[o]);
  return trs;
}

}  // namespace xfode
