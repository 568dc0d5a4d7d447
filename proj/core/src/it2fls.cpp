#include "xfode/it2fls.hpp"

#include <limits>

namespace xfode {

Interval km_type_reduce(const FiringInterval& firing, std::span<const double> d) {
  if (firing.lower.size() != d.size() || firing.upper.size() != d.size())
    throw ConfigError("firing interval and consequent column differ in length");
  return km_reduce<double>(firing.lower, firing.upper, d);
}

Interval vertex_oracle(const FiringInterval& firing, std::span<const double> d) {
  const std::size_t P = d.size();
  if (P > 20) throw ConfigError("vertex oracle limited to 20 rules");
  if (firing.lower.size() != P || firing.upper.size() != P)
    throw ConfigError("firing interval and consequent column differ in length");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::uint32_t mask = 0; mask < (1u << P); ++mask) {
    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      const double w = (mask >> p) & 1u ? firing.upper[p] : firing.lower[p];
      num += w * d[p];
      den += w;
    }
    if (!(den > 0.0)) continue;
    lo = std::min(lo, num / den);
    hi = std::max(hi, num / den);
  }
  if (lo > hi) throw DegenerateFiring("every corner has zero total firing");
  return {lo, hi};
}

FiringInterval firing_intervals(const It2Fls& fls, double z) {
  const int P = fls.rules();
  FiringInterval f;
  f.lower.resize(P);
  f.upper.resize(P);
  for (int p = 0; p < P; ++p) {
    f.upper[p] = eval_umf(fls.partition, p, z);
    f.lower[p] = eval_lmf(f.upper[p], fls.partition.height[p]);
  }
  return f;
}

std::vector<double> consequent_values(const It2Fls& fls, double z) {
  std::vector<double> out(static_cast<std::size_t>(fls.rules() * fls.outputs));
  for (int p = 0; p < fls.rules(); ++p)
    for (int o = 0; o < fls.outputs; ++o) out[p * fls.outputs + o] = fls.consequent(p, o, z);
  return out;
}

}  // namespace xfode
