#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xfode/types.hpp"

namespace xfode {

double rmse(std::span<const double> truth, std::span<const double> predicted);
// Percentage of targets inside the closed band [lower, upper].
double picp(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper);
// Mean band width divided by the target range.
double pinaw(std::span<const double> truth, std::span<const double> lower, std::span<const double> upper);

// Closed-form learnable-parameter counts.
//   xFODE+ (ps1/ps2/ps3)  n_z (2 + P + P + 2 P n_x)
//   xFODE  (ps1/ps2/ps3)  n_z (2 + P + 2 P n_x)
//   AFODE+ (gauss)        n_z (3 P + 2 P n_x)
long count_params(Variant variant, PartitionKind kind, int rules, int n_x, int n_z);

struct ChannelMetrics {
  double rmse = 0.0;
  double picp = 0.0;
  double pinaw = 0.0;
};

struct EvalReport {
  std::string variant;
  std::string partition;
  std::uint64_t seed = 0;
  long params = 0;
  std::size_t windows = 0;
  std::vector<ChannelMetrics> channels;
};

void write_report_csv_header(std::ostream& out, std::size_t channels);
void write_report_csv_row(std::ostream& out, const EvalReport& report);
void write_report_text(std::ostream& out, const EvalReport& report);

}  // namespace xfode
