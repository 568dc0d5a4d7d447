#pragma once

#include <iosfwd>
#include <vector>

#include "xfode/data.hpp"
#include "xfode/metrics.hpp"
#include "xfode/model.hpp"

namespace xfode {

// Closed-loop simulation of every window of a (normalized) dataset.
struct Simulation {
  TrajectoryBatch windows;
  std::vector<PredictionBand> bands;
  EvalReport report;          // denormalized output metrics over all windows
  std::vector<double> baseline_rmse;  // zero-dynamics roll-out (x_k = x_0) per output
};

Simulation simulate(const AdditiveModel& model, const NormStats& stats, const Dataset& normalized, int rollout,
                    int stride);

// Columns: window, step, row, u1.., then y<j>_true, y<j>_hat, y<j>_lower,
// y<j>_upper per output, all in physical units.
void write_band_csv(std::ostream& out, const Simulation& sim, const NormStats& stats);

}  // namespace xfode
