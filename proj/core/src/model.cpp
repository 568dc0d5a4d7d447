#include "xfode/model.hpp"

namespace xfode {

std::string_view to_string(Representation rep) { return rep == Representation::sr0 ? "sr0" : "sr1"; }

Representation parse_representation(std::string_view name) {
  if (name == "sr0") return Representation::sr0;
  if (name == "sr1") return Representation::sr1;
  throw ConfigError("unknown state representation '" + std::string(name) + "'");
}

void StateSpec::validate() const {
  if (n_y < 1) throw ConfigError("n_y must be at least 1");
  if (n_u < 0) throw ConfigError("n_u must be nonnegative");
  if (representation == Representation::sr1 && order < 1) throw ConfigError("SR1 needs difference order m >= 1");
}

void Architecture::validate() const {
  state.validate();
  validate_combination(variant, partition);
  if (rules < 2) throw ConfigError("at least two rules are required");
  if (partition == PartitionKind::ps3 && rules % 2 == 0) throw ConfigError("ps3 requires an odd rule count");
}

std::vector<double> build_state(const StateSpec& spec, const Series& y, std::size_t last_row) {
  const std::size_t h = static_cast<std::size_t>(spec.history());
  if (last_row < h || last_row >= y.rows())
    throw DataError("insufficient output history to build the state at row " + std::to_string(last_row));
  if (static_cast<int>(y.cols()) != spec.n_y) throw DataError("output width differs from n_y");
  const int n_y = spec.n_y;
  std::vector<double> x(static_cast<std::size_t>(spec.n_x()));
  // level[t] holds the j-th difference at row last_row - h + t.
  std::vector<double> level(h + 1);
  for (int c = 0; c < n_y; ++c) {
    for (std::size_t t = 0; t <= h; ++t) level[t] = y(last_row - h + t, c);
    x[c] = level[h];
    for (std::size_t j = 1; j <= h; ++j) {
      for (std::size_t t = h; t >= j; --t) level[t] = level[t] - level[t - 1];
      x[j * n_y + c] = level[h];
    }
  }
  return x;
}

PredictionBand rollout(const AdditiveModel& model, std::span<const double> x0, const Series& inputs) {
  const int n_x = model.arch.state.n_x();
  if (static_cast<int>(x0.size()) != n_x) throw DataError("initial state has the wrong width");
  if (static_cast<int>(inputs.cols()) != model.arch.state.n_u && !inputs.empty())
    throw DataError("input width differs from n_u");
  if (inputs.rows() < 1) throw DataError("rollout needs at least one step");
  const auto steps = rollout_steps<double>(model, x0, inputs);
  PredictionBand band;
  band.n_y = model.arch.state.n_y;
  band.point = Series(steps.size(), n_x);
  band.lower = Series(steps.size(), n_x);
  band.upper = Series(steps.size(), n_x);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    band.degenerate += steps[k].degenerate;
    for (int o = 0; o < n_x; ++o) {
      band.point(k, o) = steps[k].point[o];
      band.lower(k, o) = steps[k].lower[o];
      band.upper(k, o) = steps[k].upper[o];
    }
  }
  return band;
}

}  // namespace xfode
