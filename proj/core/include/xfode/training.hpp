#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xfode/data.hpp"
#include "xfode/model.hpp"

namespace xfode {

struct TrainConfig {
  int rollout = 20;  // N
  int rules = 5;     // P
  int batch_size = 32;
  int epochs = 100;
  int order = 1;  // m
  Representation representation = Representation::sr1;
  double delta = 0.99;  // target coverage
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  Variant variant = Variant::it2;
  PartitionKind partition = PartitionKind::ps1;
  int stride = 1;
  double intercept_init_std = 0.01;

  double tau_lower() const { return (1.0 - delta) / 2.0; }
  double tau_upper() const { return 1.0 - (1.0 - delta) / 2.0; }
  Architecture architecture(int n_y, int n_u) const;
  void validate() const;
};

struct LossBreakdown {
  double accuracy = 0.0;     // L_A
  double uncertainty = 0.0;  // L_UQ
  double composite = 0.0;    // L_C = L_A + L_UQ
};

// Tilted loss max(tau e, (tau - 1) e); the tau branch is taken at e = 0.
template <class T>
T pinball(const T& e, double tau) {
  return value(e) >= 0.0 ? tau * e : (tau - 1.0) * e;
}

// |e| with zero slope at the origin.
template <class T>
T abs_l1(const T& e) {
  const double v = value(e);
  if (v > 0.0) return e;
  if (v < 0.0) return -e;
  return 0.0 * e;
}

// Per-window loss terms summed over steps and state channels.
template <class T>
std::pair<T, T> window_loss(const BasicModel<T>& model, const Trajectory& window, double tau_lower, double tau_upper) {
  const auto steps = rollout_steps<T>(model, window.x0, window.inputs);
  T accuracy(0.0), uncertainty(0.0);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    for (std::size_t c = 0; c < window.targets.cols(); ++c) {
      const double target = window.targets(k, c);
      accuracy += abs_l1(target - steps[k].point[c]);
      uncertainty += pinball(target - steps[k].lower[c], tau_lower) + pinball(target - steps[k].upper[c], tau_upper);
    }
  }
  return {accuracy, uncertainty};
}

// Mean over windows of the summed loss terms.
LossBreakdown composite_loss(const AdditiveModel& model, std::span<const Trajectory> batch, double delta);
LossBreakdown composite_loss(const Architecture& arch, std::span<const double> theta, std::span<const Trajectory> batch,
                             double delta);

struct GradientResult {
  LossBreakdown loss;
  std::vector<double> gradient;  // d L_C / d theta (raw parameters)
};

// Reverse-mode gradient through the parameter constraints, memberships, type
// reduction and the unrolled roll-out. KM switch points and segment choices
// are fixed by the forward pass.
GradientResult gradient(const Architecture& arch, std::span<const double> theta, std::span<const Trajectory> batch,
                        double delta);

struct AdamState {
  std::vector<double> first;
  std::vector<double> second;
  long step = 0;
};

// Bias-corrected Adam update; advances state.step.
void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state, const TrainConfig& config);

// Uniform partitions over the observed range of every z_i, h' = 2, zero
// slopes and intercepts ~ N(0, intercept_init_std^2).
std::vector<double> initialize_params(const Architecture& arch, std::span<const Trajectory> windows,
                                      const TrainConfig& config, std::mt19937_64& rng);

struct EpochLoss {
  int epoch = 0;
  LossBreakdown loss;
};

struct TrainResult {
  Architecture arch;
  std::vector<double> theta;  // parameters with the lowest training L_C seen
  std::vector<double> initial_theta;
  std::vector<EpochLoss> history;  // epoch 0 is the initialization
  int best_epoch = 0;
  LossBreakdown best_loss;
};

using EpochObserver = std::function<void(const EpochLoss&)>;

// Trains on an already normalized dataset. L_C over all training windows is
// evaluated after every epoch; the best parameters are returned.
TrainResult train(const Dataset& normalized_train, const TrainConfig& config, const EpochObserver& observer = {});

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  // One-sided slope disagreement (relative to max(1, |slope|)) above which a
  // coordinate is probed at step / 10 for a kink.
  double kink_threshold = 1e-4;
  double floor = 1e-8;
  // Test hook: added to the analytic gradient at corrupt_index.
  double corrupt_amount = 0.0;
  std::size_t corrupt_index = 0;
};

struct GradCheckEntry {
  std::size_t index = 0;
  std::string label;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  bool kink = false;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  std::size_t excluded = 0;
  bool passed = false;

  // Entries sorted by decreasing relative error, kinks excluded.
  std::vector<GradCheckEntry> worst(std::size_t count) const;
};

GradCheckReport gradient_check(const Architecture& arch, std::span<const double> theta,
                               std::span<const Trajectory> batch, double delta, const GradCheckOptions& options = {});

// "z2.width[3]"-style name of a parameter index.
std::string param_label(const Architecture& arch, std::size_t index);
// Block part of the label ("z2.width").
std::string param_block(const Architecture& arch, std::size_t index);

}  // namespace xfode
