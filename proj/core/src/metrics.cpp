#include "xfode/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "xfode/error.hpp"

namespace xfode {

namespace {

void check_band(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper) {
  if (truth.size() != lower.size() || truth.size() != upper.size()) throw DataError("metric inputs differ in length");
  if (truth.empty()) throw DataError("metric inputs are empty");
  for (std::size_t k = 0; k < truth.size(); ++k)
    if (lower[k] > upper[k]) throw DataError("crossed interval bounds at index " + std::to_string(k));
}

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? end : buf);
}

}  // namespace

double rmse(std::span<const double> truth, std::span<const double> predicted) {
  if (truth.size() != predicted.size()) throw DataError("rmse inputs differ in length");
  if (truth.empty()) throw DataError("rmse inputs are empty");
  double sum = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) sum += (truth[k] - predicted[k]) * (truth[k] - predicted[k]);
  return std::sqrt(sum / static_cast<double>(truth.size()));
}

double picp(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper) {
  check_band(truth, lower, upper);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < truth.size(); ++k)
    if (lower[k] <= truth[k] && truth[k] <= upper[k]) ++inside;
  return 100.0 * static_cast<double>(inside) / static_cast<double>(truth.size());
}

double pinaw(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper) {
  check_band(truth, lower, upper);
  const auto [lo, hi] = std::minmax_element(truth.begin(), truth.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw DataError("pinaw needs targets with a nonzero range");
  double width = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) width += upper[k] - lower[k];
  return width / static_cast<double>(truth.size()) / range;
}

long count_params(Variant variant, PartitionKind kind, int rules, int n_x, int n_z) {
  validate_combination(variant, kind);
  if (kind == PartitionKind::ps3 && rules % 2 == 0) throw ConfigError("ps3 requires an odd rule count");
  const long P = rules;
  const long consequents = 2 * P * n_x;
  switch (variant) {
    case Variant::it2: return n_z * (2 + P + P + consequents);
    case Variant::t1: return n_z * (2 + P + consequents);
    case Variant::afode: return n_z * (P + P + P + consequents);
  }
  throw ConfigError("unknown variant");
}

void write_report_csv_header(std::ostream& out, std::size_t channels) {
  out << "variant,partition,seed,params,windows";
  for (std::size_t j = 1; j <= channels; ++j) out << ",rmse_y" << j << ",picp_y" << j << ",pinaw_y" << j;
  out << '\n';
}

void write_report_csv_row(std::ostream& out, const EvalReport& r) {
  out << r.variant << ',' << r.partition << ',' << r.seed << ',' << r.params << ','
      << r.windows;
  for (const auto& c : r.channels) out << ',' << shortest(c.rmse) << ',' << shortest(c.picp) << ',' << shortest(c.pinaw);
  out << '\n';
}

void write_report_text(std::ostream& out, const EvalReport& r) {
  out << "model    " << r.variant << " (" << r.partition << "), seed " << r.seed << '\n'
      << "#LP      " << r.params << '\n'
      << "windows  " << r.windows << '\n';
  out << std::fixed << std::setprecision(4);
  for (std::size_t j = 0; j < r.channels.size(); ++j)
    out << "y" << j + 1 << "       RMSE " << r.channels[j].rmse << "  PICP " << std::setprecision(2)
        << r.channels[j].picp << "%  PINAW " << std::setprecision(4) << r.channels[j].pinaw << '\n';
  out << std::defaultfloat;
}

}  // namespace xfode
