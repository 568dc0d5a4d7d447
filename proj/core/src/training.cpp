#include "xfode/training.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace xfode {

Architecture TrainConfig::architecture(int n_y, int n_u) const {
  Architecture arch;
  arch.state.representation = representation;
  arch.state.order = representation == Representation::sr1 ? order : 0;
  arch.state.n_y = n_y;
  arch.state.n_u = n_u;
  arch.variant = variant;
  arch.partition = partition;
  arch.rules = rules;
  arch.validate();
  return arch;
}

void TrainConfig::validate() const {
  if (rollout < 1) throw ConfigError("roll-out length N must be >= 1");
  if (batch_size < 1) throw ConfigError("mini-batch size must be >= 1");
  if (epochs < 0) throw ConfigError("epoch count must be >= 0");
  if (stride < 1) throw ConfigError("stride must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("target coverage delta must lie in (0, 1)");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("Adam betas must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
  if (!(intercept_init_std >= 0.0)) throw ConfigError("intercept init std must be nonnegative");
  if (representation == Representation::sr1 && order < 1) throw ConfigError("SR1 needs m >= 1");
  validate_combination(variant, partition);
  if (rules < 2) throw ConfigError("at least two rules are required");
  if (partition == PartitionKind::ps3 && rules % 2 == 0) throw ConfigError("ps3 requires an odd rule count");
}

LossBreakdown composite_loss(const AdditiveModel& model, std::span<const Trajectory> batch, double delta) {
  if (batch.empty()) throw DataError("loss over an empty batch");
  const double tau_lo = (1.0 - delta) / 2.0;
  const double tau_hi = 1.0 - tau_lo;
  const std::size_t n_x = static_cast<std::size_t>(model.arch.state.n_x());
  LossBreakdown out;
  for (const Trajectory& w : batch) {
    if (w.targets.cols() != n_x || w.x0.size() != n_x) throw DataError("trajectory shape differs from the model state");
    const auto [a, u] = window_loss<double>(model, w, tau_lo, tau_hi);
    out.accuracy += a;
    out.uncertainty += u;
  }
  const double B = static_cast<double>(batch.size());
  out.accuracy /= B;
  out.uncertainty /= B;
  out.composite = out.accuracy + out.uncertainty;
  return out;
}

LossBreakdown composite_loss(const Architecture& arch, std::span<const double> theta, std::span<const Trajectory> batch,
                             double delta) {
  return composite_loss(materialize<double>(arch, theta), batch, delta);
}

GradientResult gradient(const Architecture& arch, std::span<const double> theta, std::span<const Trajectory> batch,
                        double delta) {
  if (batch.empty()) throw DataError("gradient over an empty batch");
  const double tau_lo = (1.0 - delta) / 2.0;
  const double tau_hi = 1.0 - tau_lo;
  const std::size_t n_x = static_cast<std::size_t>(arch.state.n_x());

  ad::Tape tape;
  tape.reserve(1u << 16);
  std::vector<ad::Var> params;
  params.reserve(theta.size());
  for (double v : theta) params.push_back(ad::Var::independent(tape, v));
  const BasicModel<ad::Var> model = materialize<ad::Var>(arch, params);

  ad::Var accuracy(0.0), uncertainty(0.0);
  for (const Trajectory& w : batch) {
    if (w.targets.cols() != n_x || w.x0.size() != n_x) throw DataError("trajectory shape differs from the model state");
    const auto [a, u] = window_loss<ad::Var>(model, w, tau_lo, tau_hi);
    accuracy += a;
    uncertainty += u;
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const ad::Var total = (accuracy + uncertainty) * inv_b;

  GradientResult out;
  out.loss.accuracy = accuracy.value() * inv_b;
  out.loss.uncertainty = uncertainty.value() * inv_b;
  out.loss.composite = out.loss.accuracy + out.loss.uncertainty;
  out.gradient.assign(theta.size(), 0.0);
  if (!total.is_constant()) {
    const std::vector<double> adj = tape.adjoints(total.index());
    for (std::size_t i = 0; i < params.size(); ++i) out.gradient[i] = adj[params[i].index()];
  }
  return out;
}

void adam_step(std::vector<double>& theta, std::span<const double> grad, AdamState& state, const TrainConfig& config) {
  if (grad.size() != theta.size()) throw ConfigError("gradient length differs from parameter length");
  if (state.first.size() != theta.size()) {
    state.first.assign(theta.size(), 0.0);
    state.second.assign(theta.size(), 0.0);
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < theta.size(); ++i) {
    state.first[i] = config.beta1 * state.first[i] + (1.0 - config.beta1) * grad[i];
    state.second[i] = config.beta2 * state.second[i] + (1.0 - config.beta2) * grad[i] * grad[i];
    const double m_hat = state.first[i] / c1;
    const double v_hat = state.second[i] / c2;
    theta[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

std::vector<double> initialize_params(const Architecture& arch, std::span<const Trajectory> windows,
                                      const TrainConfig& config, std::mt19937_64& rng) {
  if (windows.empty()) throw DataError("cannot initialize from zero windows");
  const int n_x = arch.state.n_x();
  const int n_z = arch.state.n_z();
  std::vector<double> lo(n_z, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n_z, -std::numeric_limits<double>::infinity());
  for (const Trajectory& w : windows) {
    for (int c = 0; c < n_x; ++c) {
      lo[c] = std::min(lo[c], w.x0[c]);
      hi[c] = std::max(hi[c], w.x0[c]);
      for (std::size_t k = 0; k < w.targets.rows(); ++k) {
        lo[c] = std::min(lo[c], w.targets(k, c));
        hi[c] = std::max(hi[c], w.targets(k, c));
      }
    }
    for (std::size_t k = 0; k < w.inputs.rows(); ++k)
      for (int c = 0; c < arch.state.n_u; ++c) {
        lo[n_x + c] = std::min(lo[n_x + c], w.inputs(k, c));
        hi[n_x + c] = std::max(hi[n_x + c], w.inputs(k, c));
      }
  }

  const int P = arch.rules;
  const bool heights = !arch.fixed_heights();
  std::normal_distribution<double> intercept(0.0, 1.0);
  std::vector<double> theta(static_cast<std::size_t>(arch.total_params()), 0.0);
  for (int i = 0; i < n_z; ++i) {
    double range = hi[i] - lo[i];
    if (!(range > 0.0)) range = 1.0;
    double* block = theta.data() + arch.offset(i);
    std::size_t h_off = 0;
    switch (arch.partition) {
      case PartitionKind::ps1: {
        const double w = ad::softplus_inverse(range / (P - 1));
        block[0] = lo[i];
        for (int p = 0; p <= P; ++p) block[1 + p] = w;
        h_off = 2 + P;
        break;
      }
      case PartitionKind::ps2:
      case PartitionKind::ps3: {
        // ps3 chains (P + 1) / 2 gaps of 4 sigma, ps2 chains P - 1.
        const int gaps = arch.partition == PartitionKind::ps2 ? P - 1 : (P + 1) / 2;
        const double s = ad::softplus_inverse(range / (4.0 * gaps));
        block[0] = lo[i];
        for (int p = 0; p <= P; ++p) block[1 + p] = s;
        h_off = 2 + P;
        break;
      }
      case PartitionKind::gauss: {
        const double s = ad::softplus_inverse(0.5 * range / (P - 1));
        for (int p = 0; p < P; ++p) {
          block[p] = lo[i] + range * p / (P - 1);
          block[P + p] = s;
        }
        h_off = 2 * P;
        break;
      }
    }
    if (heights)
      for (int p = 0; p < P; ++p) block[h_off + p] = 2.0;
    double* cons = block + arch.antecedent_params();
    for (int p = 0; p < P; ++p)
      for (int o = 0; o < n_x; ++o) {
        cons[(p * n_x + o) * 2] = 0.0;
        cons[(p * n_x + o) * 2 + 1] = config.intercept_init_std * intercept(rng);
      }
  }
  return theta;
}

TrainResult train(const Dataset& normalized_train, const TrainConfig& config, const EpochObserver& observer) {
  config.validate();
  TrainResult result;
  result.arch = config.architecture(normalized_train.n_y(), normalized_train.n_u());
  const TrajectoryBatch windows =
      make_trajectories(normalized_train, result.arch.state, config.rollout, config.stride);
  if (windows.empty()) throw DataError("no training windows");

  std::mt19937_64 rng(config.seed);
  std::vector<double> theta = initialize_params(result.arch, windows, config, rng);
  result.initial_theta = theta;

  auto record = [&](int epoch) {
    const LossBreakdown loss = composite_loss(result.arch, theta, windows, config.delta);
    if (!std::isfinite(loss.composite))
      throw NumericError("non-finite training loss after epoch " + std::to_string(epoch));
    result.history.push_back({epoch, loss});
    if (observer) observer(result.history.back());
    if (epoch == 0 || loss.composite < result.best_loss.composite) {
      result.best_loss = loss;
      result.best_epoch = epoch;
      result.theta = theta;
    }
  };
  record(0);

  std::vector<std::size_t> order(windows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  AdamState adam;
  const std::size_t mbs = static_cast<std::size_t>(config.batch_size);
  std::vector<Trajectory> batch;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0, b = 0; start < order.size(); start += mbs, ++b) {
      batch.clear();
      for (std::size_t j = start; j < std::min(order.size(), start + mbs); ++j) batch.push_back(windows[order[j]]);
      const GradientResult g = gradient(result.arch, theta, batch, config.delta);
      const bool finite = std::isfinite(g.loss.composite) &&
                          std::all_of(g.gradient.begin(), g.gradient.end(), [](double v) { return std::isfinite(v); });
      if (!finite)
        throw NumericError("non-finite loss or gradient at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(b));
      adam_step(theta, g.gradient, adam, config);
    }
    record(epoch);
  }
  return result;
}

std::string param_block(const Architecture& arch, std::size_t index) {
  const std::size_t per = static_cast<std::size_t>(arch.subsystem_params());
  const std::size_t sub = index / per;
  const int local = static_cast<int>(index % per);
  const int P = arch.rules;
  const int ante = arch.antecedent_params();
  std::string name = "z" + std::to_string(sub + 1) + ".";
  if (local >= ante) return name + "consequent";
  if (arch.partition == PartitionKind::gauss) {
    if (local < P) return name + "center";
    if (local < 2 * P) return name + "width";
    return name + "height";
  }
  if (local == 0) return name + "center";
  if (local < 2 + P) return name + "width";
  return name + "height";
}

std::string param_label(const Architecture& arch, std::size_t index) {
  const std::size_t per = static_cast<std::size_t>(arch.subsystem_params());
  const int local = static_cast<int>(index % per);
  const int P = arch.rules;
  const int ante = arch.antecedent_params();
  int start = ante;
  if (local < ante) {
    if (arch.partition == PartitionKind::gauss)
      start = local < P ? 0 : local < 2 * P ? P : 2 * P;
    else
      start = local == 0 ? 0 : local < 2 + P ? 1 : 2 + P;
  }
  return param_block(arch, index) + "[" + std::to_string(local - start) + "]";
}

std::vector<GradCheckEntry> GradCheckReport::worst(std::size_t count) const {
  std::vector<GradCheckEntry> sorted;
  for (const auto& e : entries)
    if (!e.kink) sorted.push_back(e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const GradCheckEntry& a, const GradCheckEntry& b) { return a.rel_error > b.rel_error; });
  if (sorted.size() > count) sorted.resize(count);
  return sorted;
}

GradCheckReport gradient_check(const Architecture& arch, std::span<const double> theta,
                               std::span<const Trajectory> batch, double delta, const GradCheckOptions& options) {
  GradientResult analytic = gradient(arch, theta, batch, delta);
  if (options.corrupt_amount != 0.0 && options.corrupt_index < analytic.gradient.size())
    analytic.gradient[options.corrupt_index] += options.corrupt_amount;

  std::vector<double> probe(theta.begin(), theta.end());
  const double h = options.step;
  auto loss_at = [&](std::size_t i, double x) {
    probe[i] = x;
    const double l = composite_loss(arch, probe, batch, delta).composite;
    probe[i] = theta[i];
    return l;
  };
  const double base = composite_loss(arch, theta, batch, delta).composite;

  GradCheckReport report;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double plus = loss_at(i, theta[i] + h);
    const double minus = loss_at(i, theta[i] - h);
    GradCheckEntry e;
    e.index = i;
    e.label = param_label(arch, i);
    e.analytic = analytic.gradient[i];
    e.numeric = (plus - minus) / (2.0 * h);
    // One-sided slopes of a smooth loss differ by about h * f''; a slope jump
    // inside the probe interval does not shrink with the step.
    const double wide = std::abs((plus - base) / h - (base - minus) / h);
    const double hs = h / 10.0;
    const double narrow =
        std::abs((loss_at(i, theta[i] + hs) - base) / hs - (base - loss_at(i, theta[i] - hs)) / hs);
    const bool visible = wide > options.kink_threshold * std::max(1.0, std::abs(e.numeric));
    e.kink = visible && (narrow > 0.5 * wide || narrow < 0.02 * wide);
    e.rel_error = std::abs(e.analytic - e.numeric) /
                  std::max({std::abs(e.analytic), std::abs(e.numeric), options.floor});
    if (e.kink)
      ++report.excluded;
    else
      report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
    report.entries.push_back(std::move(e));
  }
  // A check that excludes most coordinates proves nothing.
  const bool enough = report.excluded * 10 <= theta.size();
  report.passed = enough && report.max_rel_error < options.tolerance;
  return report;
}

}  // namespace xfode
