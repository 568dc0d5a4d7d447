#include "xfode/evaluate.hpp"

#include <iomanip>
#include <ostream>

namespace xfode {

Simulation simulate(const AdditiveModel& model, const NormStats& stats, const Dataset& normalized, int horizon,
                    int stride) {
  const StateSpec& spec = model.arch.state;
  if (normalized.n_y() != spec.n_y || normalized.n_u() != spec.n_u)
    throw DataError("dataset has " + std::to_string(normalized.n_u()) + " inputs / " +
                    std::to_string(normalized.n_y()) + " outputs, model expects " + std::to_string(spec.n_u) + " / " +
                    std::to_string(spec.n_y));
  Simulation sim;
  sim.windows = make_trajectories(normalized, spec, horizon, stride);
  sim.report.variant = std::string(to_string(model.arch.variant));
  sim.report.partition = std::string(to_string(model.arch.partition));
  sim.report.params = model.arch.total_params();
  sim.report.windows = sim.windows.size();

  const int n_y = spec.n_y;
  std::vector<std::vector<double>> truth(n_y), point(n_y), lower(n_y), upper(n_y), persist(n_y);
  for (const Trajectory& w : sim.windows) {
    PredictionBand band = rollout(model, w.x0, w.inputs);
    for (std::size_t k = 0; k < band.steps(); ++k)
      for (int j = 0; j < n_y; ++j) {
        truth[j].push_back(denormalize_output(w.targets(k, j), stats, j));
        point[j].push_back(denormalize_output(band.output_point(k, j), stats, j));
        lower[j].push_back(denormalize_output(band.output_lower(k, j), stats, j));
        upper[j].push_back(denormalize_output(band.output_upper(k, j), stats, j));
        persist[j].push_back(denormalize_output(w.x0[j], stats, j));
      }
    sim.bands.push_back(std::move(band));
  }
  for (int j = 0; j < n_y; ++j) {
    ChannelMetrics m;
    m.rmse = rmse(truth[j], point[j]);
    m.picp = picp(truth[j], lower[j], upper[j]);
    m.pinaw = pinaw(truth[j], lower[j], upper[j]);
    sim.report.channels.push_back(m);
    sim.baseline_rmse.push_back(rmse(truth[j], persist[j]));
  }
  return sim;
}

void write_band_csv(std::ostream& out, const Simulation& sim, const NormStats& stats) {
  const std::size_t n_u = stats.u_mean.size();
  const std::size_t n_y = stats.y_mean.size();
  out << "window,step,row";
  for (std::size_t j = 1; j <= n_u; ++j) out << ",u" << j;
  for (std::size_t j = 1; j <= n_y; ++j) out << ",y" << j << "_true,y" << j << "_hat,y" << j << "_lower,y" << j << "_upper";
  out << '\n' << std::setprecision(17);
  for (std::size_t w = 0; w < sim.windows.size(); ++w) {
    const Trajectory& t = sim.windows[w];
    const PredictionBand& band = sim.bands[w];
    for (std::size_t k = 0; k < band.steps(); ++k) {
      // The prediction for step k + 1 is driven by u at row anchor + k.
      out << w << ',' << k + 1 << ',' << t.anchor + k + 1;
      for (std::size_t j = 0; j < n_u; ++j) out << ',' << t.inputs(k, j) * stats.u_std[j] + stats.u_mean[j];
      for (std::size_t j = 0; j < n_y; ++j) {
        const int c = static_cast<int>(j);
        out << ',' << denormalize_output(t.targets(k, j), stats, c) << ','
            << denormalize_output(band.output_point(k, c), stats, c) << ','
            << denormalize_output(band.output_lower(k, c), stats, c) << ','
            << denormalize_output(band.output_upper(k, c), stats, c);
      }
      out << '\n';
    }
  }
}

}  // namespace xfode
