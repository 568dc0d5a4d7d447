#pragma once

// The additive model: one single-input IT2 system per entry of z = [x; u],
// each producing an n_x-dimensional contribution to the state increment.

#include <span>
#include <string>
#include <vector>

#include "xfode/it2fls.hpp"
#include "xfode/series.hpp"
#include "xfode/types.hpp"

namespace xfode {

enum class Representation { sr0, sr1 };

std::string_view to_string(Representation rep);
Representation parse_representation(std::string_view name);

struct StateSpec {
  Representation representation = Representation::sr1;
  int order = 2;  // difference order m, SR1 only
  int n_y = 1;
  int n_u = 1;

  // History rows needed before the current sample.
  int history() const { return representation == Representation::sr1 ? order : 0; }
  int n_x() const { return n_y * (history() + 1); }
  int n_z() const { return n_x() + n_u; }
  void validate() const;
  bool operator==(const StateSpec&) const = default;
};

// State at the last row of `window`, built from history() + 1 consecutive
// output rows (oldest first). Layout [y, dy, ..., d^m y], each n_y wide.
std::vector<double> build_state(const StateSpec& spec, const Series& y, std::size_t last_row);

// Everything that fixes the shape of the parameter vector.
//
// Parameter layout: subsystem blocks in z order; each block is the raw
// antecedent block (see constrain) followed by 2 P n_x consequent entries
// ordered (rule, output, {slope, intercept}).
struct Architecture {
  StateSpec state;
  Variant variant = Variant::it2;
  PartitionKind partition = PartitionKind::ps1;
  int rules = 5;

  bool fixed_heights() const { return variant == Variant::t1; }
  int antecedent_params() const { return mf_param_count(partition, rules, fixed_heights()); }
  int consequent_params() const { return 2 * rules * state.n_x(); }
  int subsystem_params() const { return antecedent_params() + consequent_params(); }
  int total_params() const { return state.n_z() * subsystem_params(); }
  std::size_t offset(int subsystem) const { return static_cast<std::size_t>(subsystem * subsystem_params()); }
  void validate() const;
  bool operator==(const Architecture&) const = default;
};

template <class T>
struct BasicModel {
  Architecture arch;
  std::vector<BasicFls<T>> fls;
};

using AdditiveModel = BasicModel<double>;

template <class T>
BasicModel<T> materialize(const Architecture& arch, std::span<const T> theta) {
  if (static_cast<int>(theta.size()) != arch.total_params())
    throw ConfigError("parameter vector has " + std::to_string(theta.size()) + " entries, architecture needs " +
                      std::to_string(arch.total_params()));
  BasicModel<T> model;
  model.arch = arch;
  const int n_x = arch.state.n_x();
  const std::size_t ante = static_cast<std::size_t>(arch.antecedent_params());
  const std::size_t cons = static_cast<std::size_t>(arch.consequent_params());
  for (int i = 0; i < arch.state.n_z(); ++i) {
    const auto block = theta.subspan(arch.offset(i), ante + cons);
    BasicFls<T> fls;
    fls.partition = constrain<T>(arch.partition, arch.rules, arch.fixed_heights(), block.subspan(0, ante));
    fls.outputs = n_x;
    fls.consequents.assign(block.begin() + ante, block.end());
    model.fls.push_back(std::move(fls));
  }
  return model;
}

template <class T>
struct BasicStep {
  std::vector<T> point;
  std::vector<T> lower;
  std::vector<T> upper;
  int degenerate = 0;  // subsystems that used the AFODE+ fallback
};

// One Euler step (unit sample time): x + sum_i f_i(z_i).
template <class T>
BasicStep<T> step(const BasicModel<T>& model, std::span<const T> x, std::span<const double> u) {
  const int n_x = model.arch.state.n_x();
  const int n_z = model.arch.state.n_z();
  std::vector<T> sum_point(n_x, T(0.0)), sum_lower(n_x, T(0.0)), sum_upper(n_x, T(0.0));
  BasicStep<T> out;
  for (int i = 0; i < n_z; ++i) {
    const T z = i < n_x ? x[i] : T(u[i - n_x]);
    const BasicTrs<T> trs = infer(model.fls[i], z);
    out.degenerate += trs.degenerate ? 1 : 0;
    for (int o = 0; o < n_x; ++o) {
      sum_point[o] += trs.crisp[o];
      sum_lower[o] += trs.lower[o];
      sum_upper[o] += trs.upper[o];
    }
  }
  out.point.resize(n_x);
  out.lower.resize(n_x);
  out.upper.resize(n_x);
  for (int o = 0; o < n_x; ++o) {
    out.point[o] = x[o] + sum_point[o];
    out.lower[o] = x[o] + sum_lower[o];
    out.upper[o] = x[o] + sum_upper[o];
  }
  return out;
}

// Closed-loop simulation: the point prediction is fed back, the band at each
// step is the one-step interval around the previous point prediction.
template <class T>
std::vector<BasicStep<T>> rollout_steps(const BasicModel<T>& model, std::span<const double> x0, const Series& inputs) {
  std::vector<T> x(x0.begin(), x0.end());
  std::vector<BasicStep<T>> steps;
  steps.reserve(inputs.rows());
  for (std::size_t k = 0; k < inputs.rows(); ++k) {
    steps.push_back(step<T>(model, x, inputs.row(k)));
    x = steps.back().point;
  }
  return steps;
}

struct PredictionBand {
  Series point;  // N x n_x
  Series lower;
  Series upper;
  int n_y = 1;
  int degenerate = 0;

  std::size_t steps() const { return point.rows(); }
  // Output map: the first n_y state channels.
  double output_point(std::size_t k, int j) const { return point(k, j); }
  double output_lower(std::size_t k, int j) const { return lower(k, j); }
  double output_upper(std::size_t k, int j) const { return upper(k, j); }
};

PredictionBand rollout(const AdditiveModel& model, std::span<const double> x0, const Series& inputs);

}  // namespace xfode
