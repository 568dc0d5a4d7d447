#include "xfode/partition.hpp"

#include <iomanip>
#include <ostream>

namespace xfode {

std::vector<int> active_rules(const PartitionSpec& part, double z) {
  std::vector<int> out;
  if (part.kind == PartitionKind::gauss) {
    for (int p = 0; p < part.rules(); ++p)
      if (eval_umf(part, p, z) > kActiveThreshold) out.push_back(p);
    return out;
  }
  const SegmentFiring<double> seg = segment_firing(part, z);
  for (int j = 0; j < 2; ++j)
    if (seg.upper[j] > kActiveThreshold) out.push_back(seg.first + j);
  return out;
}

int mf_param_count(PartitionKind kind, int rules, bool fixed_heights) {
  const int heights = fixed_heights ? 0 : rules;
  if (kind == PartitionKind::gauss) return 2 * rules + heights;
  return 2 + rules + heights;
}

void validate_partition(const PartitionSpec& part) {
  const int P = part.rules();
  auto fail = [](const std::string& msg) { throw ConfigError("partition invariant: " + msg); };
  if (P < 1) fail("no rules");
  if (static_cast<int>(part.left.size()) != P || static_cast<int>(part.right.size()) != P ||
      static_cast<int>(part.height.size()) != P)
    fail("vector lengths differ");
  for (int p = 0; p < P; ++p) {
    if (!(part.height[p] >= kMinHeight && part.height[p] <= 1.0)) fail("height out of range");
    if (!std::isfinite(part.center[p])) fail("non-finite center");
  }
  if (part.kind == PartitionKind::gauss) {
    for (int p = 0; p < P; ++p)
      if (!(part.left[p] > 0.0)) fail("nonpositive sigma");
    return;
  }
  if (P < 2) fail("fewer than two rules");
  for (int p = 0; p + 1 < P; ++p)
    if (!(part.center[p] < part.center[p + 1])) fail("centers not strictly increasing");
  switch (part.kind) {
    case PartitionKind::ps1:
      for (int p = 0; p < P; ++p)
        if (!(part.left[p] < part.center[p] && part.center[p] < part.right[p])) fail("l < c < r");
      for (int p = 0; p + 1 < P; ++p)
        if (part.right[p] != part.center[p + 1] || part.left[p + 1] != part.center[p])
          fail("triangles not chained");
      break;
    case PartitionKind::ps2:
      for (int p = 0; p < P; ++p)
        if (!(part.left[p] > 0.0 && part.right[p] > 0.0)) fail("nonpositive sigma");
      for (int p = 0; p + 1 < P; ++p)
        if (part.left[p + 1] != part.right[p]) fail("sigma coupling broken");
      break;
    case PartitionKind::ps3:
      if (P % 2 == 0) fail("even rule count");
      for (int p = 0; p < P; ++p)
        if (!(part.left[p] > 0.0 && part.right[p] > 0.0)) fail("nonpositive width");
      for (int e = 1; e + 2 < P; e += 2)
        if (part.left[e + 2] != part.right[e]) fail("even sigma coupling broken");
      break;
    default: break;
  }
}

void write_mf_csv(std::ostream& out, const PartitionSpec& part, std::span<const double> grid) {
  const int P = part.rules();
  out << "z";
  for (int p = 1; p <= P; ++p) out << ",umf_" << p;
  for (int p = 1; p <= P; ++p) out << ",lmf_" << p;
  out << '\n';
  out << std::setprecision(17);
  std::vector<double> umf(P);
  for (double z : grid) {
    out << z;
    for (int p = 0; p < P; ++p) {
      umf[p] = eval_umf(part, p, z);
      out << ',' << umf[p];
    }
    for (int p = 0; p < P; ++p) out << ',' << eval_lmf(umf[p], part.height[p]);
    out << '\n';
  }
}

std::vector<double> default_grid(const PartitionSpec& part, int points) {
  if (points < 1) throw ConfigError("grid needs at least one point");
  double lo = part.center.front();
  double hi = part.center.front();
  for (int p = 0; p < part.rules(); ++p) {
    const double spread = part.kind == PartitionKind::gauss ? 3.0 * part.left[p] : 0.0;
    lo = std::min(lo, part.center[p] - spread);
    hi = std::max(hi, part.center[p] + spread);
  }
  const double margin = 0.1 * (hi - lo);
  lo -= margin;
  hi += margin;
  if (points == 1) return {0.5 * (lo + hi)};
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

}  // namespace xfode
