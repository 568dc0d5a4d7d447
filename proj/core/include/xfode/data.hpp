#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "xfode/model.hpp"
#include "xfode/series.hpp"

namespace xfode {

struct Dataset {
  Series u;  // K x n_u
  Series y;  // K x n_y
  std::optional<double> sample_period;

  std::size_t size() const { return y.rows(); }
  int n_u() const { return static_cast<int>(u.cols()); }
  int n_y() const { return static_cast<int>(y.cols()); }
  // Rows [first, first + count) of both tables.
  Dataset slice(std::size_t first, std::size_t count) const;
};

// Header names u1..u{n_u}, y1..y{n_y} in any order.
Dataset read_csv(std::istream& in, const std::string& source = "<stream>");
Dataset load_csv(const std::filesystem::path& path);
// Columns u1.., y1.., 17 significant digits.
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::filesystem::path& path, const Dataset& data);

struct NormStats {
  std::vector<double> u_mean, u_std;
  std::vector<double> y_mean, y_std;

  bool operator==(const NormStats&) const = default;
};

// Per-channel mean and population standard deviation. Constant channels are
// rejected.
NormStats compute_stats(const Dataset& train);
Dataset normalize(const Dataset& data, const NormStats& stats);
Dataset denormalize(const Dataset& data, const NormStats& stats);
inline double denormalize_output(double v, const NormStats& s, int channel) {
  return v * s.y_std[channel] + s.y_mean[channel];
}

// Contiguous prefix (training) and suffix (test). train_fraction in (0, 1].
std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction);
std::size_t split_index(std::size_t size, double train_fraction);

struct Trajectory {
  std::size_t anchor = 0;       // dataset row of x_0
  std::vector<double> x0;       // n_x
  Series inputs;                // N x n_u, rows anchor .. anchor + N - 1
  Series targets;               // N x n_x, states at anchor + 1 .. anchor + N
};

using TrajectoryBatch = std::vector<Trajectory>;

// Windows anchored at k = m, m + stride, ... while k + N <= K - 1.
TrajectoryBatch make_trajectories(const Dataset& data, const StateSpec& spec, int rollout, int stride);
std::size_t count_windows(std::size_t size, const StateSpec& spec, int rollout, int stride);

struct SynthOptions {
  double noise_std = 0.05;
  double input_amplitude = 0.5;
  int min_hold = 10;  // samples an input level is held
  int max_hold = 50;
  double dt = 0.1;
  double position0 = 0.0;
  double velocity0 = 0.0;
};

// Damped pendulum-like oscillator s1' = s2, s2' = -0.3 s2 - sin(s1) + u,
// explicit Euler at dt, y = s1 + N(0, noise_std^2), u piecewise-constant.
Dataset synth_generate(std::uint64_t seed, std::size_t samples, const SynthOptions& options = {});

}  // namespace xfode
