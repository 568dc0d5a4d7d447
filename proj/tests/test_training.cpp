#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "xfode/training.hpp"

using namespace xfode;

namespace {

Trajectory single_step_window(double x0, double target) {
  Trajectory w;
  w.x0 = {x0};
  w.inputs = Series(1, 1, 0.0);
  w.targets = Series(1, 1, target);
  return w;
}

Dataset linear_system(std::size_t K, std::uint64_t seed) {
  // y_{k+1} = 0.9 y_k + 0.2 u_k with piecewise-constant input.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> level(-1.0, 1.0);
  Dataset d;
  d.u = Series(K, 1);
  d.y = Series(K, 1);
  double y = 0.0, u = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    if (k % 15 == 0) u = level(rng);
    d.u(k, 0) = u;
    d.y(k, 0) = y;
    y = 0.9 * y + 0.2 * u;
  }
  return d;
}

struct SmallProblem {
  Architecture arch;
  TrajectoryBatch windows;
  std::vector<double> theta;
};

SmallProblem small_problem(Variant v, PartitionKind k, Representation r, int m, std::uint64_t seed) {
  TrainConfig cfg;
  cfg.variant = v;
  cfg.partition = k;
  cfg.representation = r;
  cfg.order = m;
  cfg.rules = 3;
  cfg.rollout = 5;
  SmallProblem p;
  p.arch = cfg.architecture(1, 1);
  const Dataset raw = synth_generate(seed, 200);
  const Dataset n = normalize(raw, compute_stats(raw));
  p.windows = make_trajectories(n, p.arch.state, 5, 17);
  p.windows.resize(3);
  std::mt19937_64 rng(seed);
  p.theta = initialize_params(p.arch, p.windows, cfg, rng);
  std::normal_distribution<double> jitter(0.0, 0.3);
  for (double& t : p.theta) t += jitter(rng);
  return p;
}

}  // namespace

TEST(Pinball, Branches) {
  EXPECT_DOUBLE_EQ(pinball(1.0, 0.995), 0.995);
  EXPECT_NEAR(pinball(-1.0, 0.995), 0.005, 1e-15);
  EXPECT_DOUBLE_EQ(pinball(0.0, 0.3), 0.0);
  EXPECT_DOUBLE_EQ(abs_l1(-2.5), 2.5);
}

TEST(Quantiles, SumToOne) {
  TrainConfig cfg;
  for (double d : {0.5, 0.9, 0.95, 0.99, 0.999}) {
    cfg.delta = d;
    EXPECT_NEAR(cfg.tau_lower() + cfg.tau_upper(), 1.0, 1e-15);
  }
  cfg.delta = 0.99;
  EXPECT_NEAR(cfg.tau_lower(), 0.005, 1e-15);
}

TEST(Loss, SingleStepExample) {
  // Two-rule single-input model evaluated for one step.
  Architecture a;
  a.state = {Representation::sr0, 1, 1, 0};
  a.rules = 2;
  a.variant = Variant::it2;
  AdditiveModel m;
  m.arch = a;
  It2Fls f;
  const std::vector<double> dr{1.0, 1.0}, h{0.5, 0.5};
  f.partition = build_ps1<double>(0.0, 1.0, dr, h);
  f.outputs = 1;
  // At z = 0.5 both rules fire at 0.5 with lower grade 0.25.
  f.consequents = {0.0, 0.0, 0.0, 2.0};
  m.fls = {f};
  const auto [lo, hi] = oracle::corner_extremes({0.25, 0.25}, {0.5, 0.5}, {0.0, 2.0});
  const Trs t = infer(f, 0.5);
  ASSERT_NEAR(t.lower[0], lo, 1e-15);
  ASSERT_NEAR(t.upper[0], hi, 1e-15);
  ASSERT_NEAR(t.crisp[0], 1.0, 1e-15);

  // Worked example evaluated directly: x = 1, x_hat = 0.5, band [0, 2].
  const double tl = 0.005, tu = 0.995;
  EXPECT_DOUBLE_EQ(std::abs(1.0 - 0.5), 0.5);
  EXPECT_NEAR(oracle::pinball(1.0 - 0.0, tl) + oracle::pinball(1.0 - 2.0, tu), 0.01, 1e-15);
  EXPECT_NEAR(pinball(1.0 - 0.0, tl) + pinball(1.0 - 2.0, tu), 0.01, 1e-15);

  // Through the model: x0 = 0.5, target 1, x_hat = 1.5.
  const std::vector<Trajectory> batch{single_step_window(0.5, 1.0)};
  const LossBreakdown l = composite_loss(m, batch, 0.99);
  EXPECT_NEAR(l.accuracy, 0.5, 1e-15);
  EXPECT_NEAR(l.uncertainty, oracle::pinball(1.0 - (0.5 + lo), tl) + oracle::pinball(1.0 - (0.5 + hi), tu), 1e-15);
  EXPECT_NEAR(l.composite, l.accuracy + l.uncertainty, 1e-15);
}

TEST(Loss, PerfectBandGivesZero) {
  Architecture a;
  a.state = {Representation::sr0, 1, 1, 0};
  a.rules = 2;
  AdditiveModel m;
  m.arch = a;
  It2Fls f;
  const std::vector<double> dr{1.0, 1.0}, h{0.5, 0.5};
  f.partition = build_ps1<double>(0.0, 1.0, dr, h);
  f.outputs = 1;
  f.consequents = {0.0, 0.25, 0.0, 0.25};
  m.fls = {f};
  const std::vector<Trajectory> batch{single_step_window(0.3, 0.55)};
  const LossBreakdown l = composite_loss(m, batch, 0.99);
  EXPECT_NEAR(l.accuracy, 0.0, 1e-15);
  EXPECT_NEAR(l.uncertainty, 0.0, 1e-15);
}

TEST(Gradient, MatchesIndependentFiniteDifferences) {
  const struct {
    Variant v;
    PartitionKind k;
    Representation r;
    int m;
  } cases[] = {{Variant::it2, PartitionKind::ps1, Representation::sr0, 1},
               {Variant::it2, PartitionKind::ps2, Representation::sr1, 1},
               {Variant::it2, PartitionKind::ps3, Representation::sr1, 2},
               {Variant::afode, PartitionKind::gauss, Representation::sr1, 1},
               {Variant::t1, PartitionKind::ps1, Representation::sr1, 2}};
  std::uint64_t seed = 40;
  for (const auto& c : cases) {
    const SmallProblem p = small_problem(c.v, c.k, c.r, c.m, ++seed);
    const GradientResult g = gradient(p.arch, p.theta, p.windows, 0.99);
    const auto f = [&](const std::vector<double>& th) { return composite_loss(p.arch, th, p.windows, 0.99).composite; };
    EXPECT_NEAR(g.loss.composite, f(p.theta), 1e-12 * (1 + std::abs(g.loss.composite)));
    double worst = 0.0;
    int skipped = 0;
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
      const double coarse = oracle::central_difference(f, p.theta, i, 1e-5);
      const double fine = oracle::central_difference(f, p.theta, i, 1e-6);
      // Skip coordinates whose two step sizes disagree: a kink sits nearby.
      if (std::abs(coarse - fine) > 1e-5 * std::max(1.0, std::abs(coarse))) {
        ++skipped;
        continue;
      }
      const double denom = std::max({std::abs(coarse), std::abs(g.gradient[i]), 1e-8});
      worst = std::max(worst, std::abs(coarse - g.gradient[i]) / denom);
    }
    EXPECT_LT(worst, 1e-4) << to_string(c.v) << "/" << to_string(c.k);
    EXPECT_LE(skipped * 10, static_cast<int>(p.theta.size()));
  }
}

TEST(Gradient, DuplicatedBatchLeavesGradientUnchanged) {
  const SmallProblem p = small_problem(Variant::it2, PartitionKind::ps1, Representation::sr1, 1, 3);
  TrajectoryBatch twice = p.windows;
  twice.insert(twice.end(), p.windows.begin(), p.windows.end());
  const GradientResult a = gradient(p.arch, p.theta, p.windows, 0.99);
  const GradientResult b = gradient(p.arch, p.theta, twice, 0.99);
  for (std::size_t i = 0; i < a.gradient.size(); ++i)
    EXPECT_NEAR(a.gradient[i], b.gradient[i], 1e-12 * (1 + std::abs(a.gradient[i])));
}

TEST(Gradient, DeadParametersHaveZeroGradient) {
  const SmallProblem p = small_problem(Variant::it2, PartitionKind::ps1, Representation::sr1, 1, 5);
  const GradientResult g = gradient(p.arch, p.theta, p.windows, 0.99);
  for (int i = 0; i < p.arch.state.n_z(); ++i) {
    EXPECT_EQ(g.gradient[p.arch.offset(i) + 1], 0.0);                   // leftmost width
    EXPECT_EQ(g.gradient[p.arch.offset(i) + 1 + p.arch.rules], 0.0);    // last right width
  }
}

TEST(Gradient, InterceptsDecoupledAtZeroResidual) {
  // Zero consequents and targets equal to x0: every residual is zero, the
  // accuracy term contributes nothing and the pinball terms use the tau
  // branch. Shifting all intercepts of one subsystem moves both bounds by the
  // same amount, so their gradients sum to -(tau_l + tau_u) = -1.
  TrainConfig cfg;
  cfg.representation = Representation::sr0;
  cfg.rules = 3;
  const Architecture a = cfg.architecture(1, 1);
  std::vector<double> theta(static_cast<std::size_t>(a.total_params()), 0.0);
  Trajectory w;
  w.x0 = {0.4};
  w.inputs = Series(1, 1, 0.2);
  w.targets = Series(1, 1, 0.4);
  const std::vector<Trajectory> batch{w};
  const GradientResult g = gradient(a, theta, batch, 0.99);
  EXPECT_DOUBLE_EQ(g.loss.composite, 0.0);
  for (int i = 0; i < a.state.n_z(); ++i) {
    double sum = 0.0;
    for (int p = 0; p < 3; ++p) {
      const double gi = g.gradient[a.offset(i) + a.antecedent_params() + 2 * p + 1];
      EXPECT_LE(gi, 0.0);
      sum += gi;
    }
    EXPECT_NEAR(sum, -1.0, 1e-12);
  }
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  std::vector<double> theta{1.0, -2.0, 0.5};
  const std::vector<double> g{3.0, -1e-3, 0.0};
  AdamState s;
  adam_step(theta, g, s, cfg);
  EXPECT_NEAR(theta[0], 1.0 - 0.01, 1e-9);
  EXPECT_NEAR(theta[1], -2.0 + 0.01, 1e-7);
  EXPECT_EQ(theta[2], 0.5);
  EXPECT_EQ(s.step, 1);

  std::vector<double> same{1.0, -2.0, 0.5};
  AdamState s2;
  adam_step(same, g, s2, cfg);
  std::vector<double> again{1.0, -2.0, 0.5};
  AdamState s3;
  adam_step(again, g, s3, cfg);
  EXPECT_EQ(same, again);

  std::vector<double> still{4.0, 5.0};
  const std::vector<double> zero{0.0, 0.0};
  AdamState s4;
  for (int i = 0; i < 5; ++i) adam_step(still, zero, s4, cfg);
  EXPECT_EQ(still, (std::vector<double>{4.0, 5.0}));
}

TEST(Adam, ConstraintsHoldAfterManySteps) {
  const SmallProblem p = small_problem(Variant::it2, PartitionKind::ps3, Representation::sr1, 1, 9);
  TrainConfig cfg;
  cfg.learning_rate = 0.2;  // aggressive steps stress the reparameterization
  std::vector<double> theta = p.theta;
  AdamState s;
  for (int it = 0; it < 60; ++it) {
    const GradientResult g = gradient(p.arch, theta, p.windows, 0.99);
    adam_step(theta, g.gradient, s, cfg);
    const AdditiveModel m = materialize<double>(p.arch, theta);
    for (const auto& f : m.fls) {
      ASSERT_NO_THROW(validate_partition(f.partition));
      for (double h : f.partition.height) {
        ASSERT_GE(h, kMinHeight);
        ASSERT_LE(h, 1.0);
      }
    }
  }
}

TEST(Train, ZeroEpochsReturnsInitialization) {
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.rules = 3;
  cfg.rollout = 5;
  const Dataset raw = synth_generate(2, 200);
  const TrainResult r = train(normalize(raw, compute_stats(raw)), cfg);
  EXPECT_EQ(r.theta, r.initial_theta);
  EXPECT_EQ(r.best_epoch, 0);
  ASSERT_EQ(r.history.size(), 1u);
}

TEST(Train, SameSeedSameTrajectory) {
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.rules = 3;
  cfg.rollout = 5;
  const Dataset raw = synth_generate(2, 300);
  const Dataset n = normalize(raw, compute_stats(raw));
  const TrainResult a = train(n, cfg);
  const TrainResult b = train(n, cfg);
  EXPECT_EQ(a.theta, b.theta);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e) EXPECT_EQ(a.history[e].loss.composite, b.history[e].loss.composite);
  cfg.seed = 2;
  EXPECT_NE(train(n, cfg).initial_theta, a.initial_theta);
}

TEST(Train, BestParametersHaveLowestRecordedLoss) {
  TrainConfig cfg;
  cfg.epochs = 8;
  cfg.rules = 3;
  cfg.rollout = 10;
  const Dataset raw = synth_generate(3, 400);
  const Dataset n = normalize(raw, compute_stats(raw));
  const TrainResult r = train(n, cfg);
  for (const auto& h : r.history) EXPECT_GE(h.loss.composite, r.best_loss.composite);
  const auto windows = make_trajectories(n, r.arch.state, cfg.rollout, cfg.stride);
  EXPECT_DOUBLE_EQ(composite_loss(r.arch, r.theta, windows, cfg.delta).composite, r.best_loss.composite);
}

TEST(Train, TypeOneFitsLinearSystem) {
  TrainConfig cfg;
  cfg.variant = Variant::t1;
  cfg.epochs = 200;
  cfg.rules = 3;
  cfg.rollout = 10;
  cfg.stride = 2;
  const Dataset raw = linear_system(400, 6);
  const Dataset n = normalize(raw, compute_stats(raw));
  const TrainResult r = train(n, cfg);
  EXPECT_LT(r.history.back().loss.accuracy, 0.1 * r.history.front().loss.accuracy);
}

TEST(Train, CompositeLossFallsOverFirstTwentyEpochs) {
  TrainConfig cfg;
  cfg.epochs = 20;
  const Dataset raw = synth_generate(1, 2000);
  const auto [tr, te] = split(raw, 0.5);
  const TrainResult r = train(normalize(tr, compute_stats(tr)), cfg);
  int rises = 0;
  for (std::size_t e = 1; e < r.history.size(); ++e) rises += r.history[e].loss.composite > r.history[e - 1].loss.composite;
  EXPECT_LE(rises, 3);
  EXPECT_LT(r.history.back().loss.composite, r.history.front().loss.composite);
}

TEST(Train, RejectsEmptyWindowsAndBadConfig) {
  TrainConfig cfg;
  const Dataset raw = synth_generate(2, 60);
  cfg.rollout = 60;
  EXPECT_THROW(train(normalize(raw, compute_stats(raw)), cfg), DataError);
  cfg.delta = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(GradCheck, PassesAndCatchesCorruption) {
  const SmallProblem p = small_problem(Variant::it2, PartitionKind::ps2, Representation::sr1, 1, 12);
  const GradCheckReport ok = gradient_check(p.arch, p.theta, p.windows, 0.99);
  EXPECT_TRUE(ok.passed) << ok.max_rel_error;
  GradCheckOptions bad;
  bad.corrupt_amount = 1e-2;
  bad.corrupt_index = 7;
  const GradCheckReport fail = gradient_check(p.arch, p.theta, p.windows, 0.99, bad);
  EXPECT_FALSE(fail.passed);
  ASSERT_FALSE(fail.worst(1).empty());
  EXPECT_EQ(fail.worst(1)[0].index, 7u);
  EXPECT_EQ(param_label(p.arch, 0), "z1.center[0]");
  EXPECT_EQ(param_label(p.arch, 2), "z1.width[1]");
  EXPECT_EQ(param_label(p.arch, static_cast<std::size_t>(p.arch.subsystem_params())), "z2.center[0]");
}
