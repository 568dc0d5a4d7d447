#pragma once

// Antecedent membership functions and the constrained partitions built from
// them. Everything here is templated on the scalar so the same code serves
// plain inference (double) and gradient computation (ad::Var).

#include <algorithm>
#include <array>
#include <cmath>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xfode/ad.hpp"
#include "xfode/error.hpp"
#include "xfode/types.hpp"

namespace xfode {

// Grades at or below this are counted as "not firing".
inline constexpr double kActiveThreshold = 1e-12;
inline constexpr double kMinHeight = 0.1;

using ad::value;

template <class T>
T gauss_grade(const T& z, const T& center, const T& sigma) {
  using std::exp;
  using ad::exp;
  const T d = (z - center) / sigma;
  return exp(-0.5 * d * d);
}

template <class T>
T gauss2_grade(const T& z, const T& center, const T& sigma_left, const T& sigma_right) {
  return value(z) <= value(center) ? gauss_grade(z, center, sigma_left)
                                   : gauss_grade(z, center, sigma_right);
}

template <class T>
T tri_grade(const T& z, const T& left, const T& center, const T& right) {
  const double zv = value(z);
  if (zv <= value(left) || zv >= value(right)) return T(0.0);
  if (zv <= value(center)) return (z - left) / (center - left);
  return (right - z) / (right - center);
}

// Constrained antecedent layout for one input dimension.
//
// Field meaning depends on the kind:
//   ps1   left/right are the triangle feet l_p, r_p.
//   ps2   left/right are the two-sided Gaussian deviations.
//   ps3   even rules (1-based) as ps2; odd rules are complements and store the
//         widths of the segments they share with their even neighbours.
//   gauss left holds sigma, right mirrors it.
template <class T>
struct BasicPartition {
  PartitionKind kind = PartitionKind::ps1;
  std::vector<T> center;
  std::vector<T> left;
  std::vector<T> right;
  std::vector<T> height;

  int rules() const { return static_cast<int>(center.size()); }
  double lower_bound() const { return value(center.front()); }
  double upper_bound() const { return value(center.back()); }
};

using PartitionSpec = BasicPartition<double>;

// Grades of the two rules bracketing the (clamped) input. Rules outside the
// bracket have grade zero by construction of the partitioned kinds.
template <class T>
struct SegmentFiring {
  int first = 0;  // 0-based index of the left rule; right rule is first + 1
  std::array<T, 2> upper{};
  T clamped{};
};

namespace detail {

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string("nonpositive ") + what + " in partition");
}

template <class T>
void check_heights(std::span<const T> heights, std::size_t rules) {
  if (heights.size() != rules) throw ConfigError("height vector length differs from rule count");
  for (const T& h : heights) {
    const double v = value(h);
    if (!(v >= kMinHeight && v <= 1.0)) throw ConfigError("LMF height outside [0.1, 1]");
  }
}

}  // namespace detail

// Triangular partition: each right foot is the next center.
template <class T>
BasicPartition<T> build_ps1(const T& c1, const T& left_width, std::span<const T> right_widths,
                            std::span<const T> heights) {
  const std::size_t P = right_widths.size();
  if (P < 2) throw ConfigError("a partition needs at least two rules");
  detail::require_positive(value(left_width), "left width");
  for (const T& w : right_widths) detail::require_positive(value(w), "right width");
  detail::check_heights(heights, P);

  BasicPartition<T> part;
  part.kind = PartitionKind::ps1;
  part.center.resize(P);
  part.left.resize(P);
  part.right.resize(P);
  part.height.assign(heights.begin(), heights.end());
  part.center[0] = c1;
  part.left[0] = c1 - left_width;
  for (std::size_t p = 0; p + 1 < P; ++p) {
    part.center[p + 1] = part.center[p] + right_widths[p];
    part.right[p] = part.center[p + 1];
    part.left[p + 1] = part.center[p];
  }
  part.right[P - 1] = part.center[P - 1] + right_widths[P - 1];
  return part;
}

// Two-sided Gaussian partition with c_{p+1} = c_p + 4 sigma_p^r.
template <class T>
BasicPartition<T> build_ps2(const T& c1, const T& left_sigma, std::span<const T> right_sigmas,
                            std::span<const T> heights) {
  const std::size_t P = right_sigmas.size();
  if (P < 2) throw ConfigError("a partition needs at least two rules");
  detail::require_positive(value(left_sigma), "sigma");
  for (const T& s : right_sigmas) detail::require_positive(value(s), "sigma");
  detail::check_heights(heights, P);

  BasicPartition<T> part;
  part.kind = PartitionKind::ps2;
  part.center.resize(P);
  part.left.resize(P);
  part.right.assign(right_sigmas.begin(), right_sigmas.end());
  part.height.assign(heights.begin(), heights.end());
  part.center[0] = c1;
  part.left[0] = left_sigma;
  for (std::size_t p = 0; p + 1 < P; ++p) {
    part.center[p + 1] = part.center[p] + 4.0 * right_sigmas[p];
    part.left[p + 1] = right_sigmas[p];
  }
  return part;
}

// Complementary partition for odd P >= 3.
//
// Even rules (1-based 2, 4, ..., P-1) are two-sided Gaussians chained as in
// ps2: c_2 = c1 + 4 lead, sigma_2^l = lead, c_{2q+2} = c_2q + 4 sigma_2q^r and
// sigma_{2q+2}^l = sigma_2q^r. Odd interior rules sit at the midpoint of their
// even neighbours and are 1 - mu_2q on the left half, 1 - mu_{2q+2} on the
// right half. Rule 1 starts the domain at c1, rule P ends it at
// c_{P-1} + 4 sigma_{P-1}^r.
template <class T>
BasicPartition<T> build_ps3(const T& c1, const T& lead_sigma, std::span<const T> even_right_sigmas,
                            std::span<const T> heights) {
  const std::size_t evens = even_right_sigmas.size();
  const std::size_t P = 2 * evens + 1;
  if (evens < 1) throw ConfigError("ps3 needs at least three rules");
  if (heights.size() % 2 == 0) throw ConfigError("ps3 requires an odd rule count");
  detail::require_positive(value(lead_sigma), "sigma");
  for (const T& s : even_right_sigmas) detail::require_positive(value(s), "sigma");
  detail::check_heights(heights, P);

  BasicPartition<T> part;
  part.kind = PartitionKind::ps3;
  part.center.resize(P);
  part.left.resize(P);
  part.right.resize(P);
  part.height.assign(heights.begin(), heights.end());
  part.center[0] = c1;
  part.center[1] = c1 + 4.0 * lead_sigma;
  part.left[1] = lead_sigma;
  for (std::size_t q = 0; q < evens; ++q) {
    const std::size_t e = 2 * q + 1;  // 0-based index of an even rule
    part.right[e] = even_right_sigmas[q];
    const T next = part.center[e] + 4.0 * even_right_sigmas[q];
    if (e + 2 < P) {
      part.center[e + 2] = next;
      part.left[e + 2] = even_right_sigmas[q];
      part.center[e + 1] = 0.5 * (part.center[e] + next);
    } else {
      part.center[e + 1] = next;
    }
  }
  // Odd rules record the widths of the segments they share.
  part.left[0] = part.center[1] - part.center[0];
  part.right[0] = part.left[0];
  for (std::size_t p = 2; p < P; p += 2) {
    part.left[p] = part.center[p] - part.center[p - 1];
    part.right[p] = p + 1 < P ? part.center[p + 1] - part.center[p] : part.left[p];
  }
  return part;
}

template <class T>
BasicPartition<T> build_gauss(std::span<const T> centers, std::span<const T> sigmas,
                              std::span<const T> heights) {
  const std::size_t P = centers.size();
  if (P < 1 || sigmas.size() != P) throw ConfigError("gauss partition vectors must share length P");
  for (const T& s : sigmas) detail::require_positive(value(s), "sigma");
  detail::check_heights(heights, P);
  BasicPartition<T> part;
  part.kind = PartitionKind::gauss;
  part.center.assign(centers.begin(), centers.end());
  part.left.assign(sigmas.begin(), sigmas.end());
  part.right = part.left;
  part.height.assign(heights.begin(), heights.end());
  return part;
}

// Grades of the bracketing pair for ps1/ps2/ps3. The input is clamped to
// [c_1, c_P] first so at least one rule always fires.
template <class T>
SegmentFiring<T> segment_firing(const BasicPartition<T>& part, const T& z) {
  const int P = part.rules();
  SegmentFiring<T> out;
  const double zv = value(z);
  if (zv <= value(part.center.front()))
    out.clamped = part.center.front();
  else if (zv >= value(part.center.back()))
    out.clamped = part.center.back();
  else
    out.clamped = z;
  const double zc = value(out.clamped);

  int s = 0;
  while (s + 2 < P && value(part.center[s + 1]) <= zc) ++s;
  out.first = s;
  const T& x = out.clamped;
  const int a = s;
  const int b = s + 1;

  switch (part.kind) {
    case PartitionKind::ps1:
      out.upper[0] = tri_grade(x, part.left[a], part.center[a], part.right[a]);
      out.upper[1] = tri_grade(x, part.left[b], part.center[b], part.right[b]);
      break;
    case PartitionKind::ps2:
      // Support of rule p is the open interval (c_{p-1}, c_{p+1}).
      out.upper[0] = zc < value(part.center[b])
                         ? gauss2_grade(x, part.center[a], part.left[a], part.right[a])
                         : T(0.0);
      out.upper[1] = zc > value(part.center[a])
                         ? gauss2_grade(x, part.center[b], part.left[b], part.right[b])
                         : T(0.0);
      break;
    case PartitionKind::ps3: {
      // 0-based odd index <=> 1-based even rule.
      const int even = (a % 2 == 1) ? a : b;
      const T mu = gauss2_grade(x, part.center[even], part.left[even], part.right[even]);
      const T complement = 1.0 - mu;
      out.upper[0] = even == a ? mu : complement;
      out.upper[1] = even == b ? mu : complement;
      break;
    }
    case PartitionKind::gauss:
      throw ConfigError("segment_firing requires a constrained partition");
  }
  return out;
}

// Upper membership grade of rule p (0-based).
template <class T>
T eval_umf(const BasicPartition<T>& part, int p, const T& z) {
  if (part.kind == PartitionKind::gauss) return gauss_grade(z, part.center[p], part.left[p]);
  const SegmentFiring<T> seg = segment_firing(part, z);
  if (p == seg.first) return seg.upper[0];
  if (p == seg.first + 1) return seg.upper[1];
  return T(0.0);
}

template <class T>
T eval_lmf(const T& umf_grade, const T& height) {
  return height * umf_grade;
}

// 0-based indices of rules whose upper grade exceeds kActiveThreshold.
std::vector<int> active_rules(const PartitionSpec& part, double z);

// Number of raw antecedent parameters for one input dimension.
int mf_param_count(PartitionKind kind, int rules, bool fixed_heights);

// Maps raw (unconstrained) antecedent parameters to a partition. Raw layout:
//   ps1      [c1, D1l', Dr'_1..P, h'_1..P]
//   ps2/ps3  [c1, s1l', sr'_1..P, h'_1..P]
//   gauss    [c_1..P, s'_1..P, h'_1..P]
// Widths go through softplus and heights through 0.1 + 0.9 sigmoid. With
// fixed_heights the h' block is absent and every height is one.
//
// Under input clamping the leftmost width and the last right width shape only
// the region outside [c_1, c_P] and therefore never influence outputs. ps3
// also leaves s1l' and the odd-indexed sr' (1-based 3, 5, ..., P) unused:
// sr'_1 is the lead deviation and sr'_2q the even-rule right deviations.
template <class T>
BasicPartition<T> constrain(PartitionKind kind, int rules, bool fixed_heights, std::span<const T> raw) {
  using ad::sigmoid;
  using ad::softplus;
  const std::size_t P = static_cast<std::size_t>(rules);
  if (static_cast<int>(raw.size()) != mf_param_count(kind, rules, fixed_heights))
    throw ConfigError("raw antecedent block has the wrong length");
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (!std::isfinite(value(raw[i])))
      throw NumericError("non-finite raw antecedent parameter at offset " + std::to_string(i));

  std::vector<T> heights(P);
  const std::size_t h_off = kind == PartitionKind::gauss ? 2 * P : 2 + P;
  for (std::size_t p = 0; p < P; ++p)
    heights[p] = fixed_heights ? T(1.0) : T(kMinHeight + 0.9 * sigmoid(raw[h_off + p]));

  if (kind == PartitionKind::gauss) {
    std::vector<T> sig(P);
    for (std::size_t p = 0; p < P; ++p) sig[p] = softplus(raw[P + p]);
    return build_gauss<T>(raw.subspan(0, P), sig, heights);
  }

  std::vector<T> widths(P);
  for (std::size_t p = 0; p < P; ++p) widths[p] = softplus(raw[2 + p]);
  const T lead = softplus(raw[1]);
  switch (kind) {
    case PartitionKind::ps1: return build_ps1<T>(raw[0], lead, widths, heights);
    case PartitionKind::ps2: return build_ps2<T>(raw[0], lead, widths, heights);
    case PartitionKind::ps3: {
      if (P % 2 == 0) throw ConfigError("ps3 requires an odd rule count");
      std::vector<T> evens;
      for (std::size_t p = 1; p + 1 < P; p += 2) evens.push_back(widths[p]);
      return build_ps3<T>(raw[0], widths[0], evens, heights);
    }
    default: break;
  }
  throw ConfigError("unsupported partition kind");
}

// Throws ConfigError describing the first violated partition invariant.
void validate_partition(const PartitionSpec& part);

// CSV with columns z, umf_1..umf_P, lmf_1..lmf_P, one row per grid value.
void write_mf_csv(std::ostream& out, const PartitionSpec& part, std::span<const double> grid);

// Evenly spaced grid covering the partition with a 10% margin.
std::vector<double> default_grid(const PartitionSpec& part, int points);

}  // namespace xfode
