#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "xfode/xfode.hpp"

using namespace xfode;

namespace {

struct Instance {
  FiringInterval firing;
  std::vector<double> d;
};

std::vector<Instance> instances(int P, std::size_t count) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Instance> out(count);
  for (Instance& in : out)
    for (int p = 0; p < P; ++p) {
      const double hi = u(rng);
      in.firing.upper.push_back(hi);
      in.firing.lower.push_back(hi * u(rng));
      in.d.push_back(4.0 * u(rng) - 2.0);
    }
  return out;
}

void BM_KarnikMendel(benchmark::State& state) {
  const auto set = instances(static_cast<int>(state.range(0)), 256);
  std::size_t i = 0;
  for (auto _ : state) {
    const Instance& in = set[i++ % set.size()];
    benchmark::DoNotOptimize(km_type_reduce(in.firing, in.d));
  }
}
BENCHMARK(BM_KarnikMendel)->DenseRange(2, 8, 2)->Arg(16);

void BM_VertexEnumeration(benchmark::State& state) {
  const auto set = instances(static_cast<int>(state.range(0)), 256);
  std::size_t i = 0;
  for (auto _ : state) {
    const Instance& in = set[i++ % set.size()];
    benchmark::DoNotOptimize(vertex_oracle(in.firing, in.d));
  }
}
BENCHMARK(BM_VertexEnumeration)->DenseRange(2, 8, 2)->Arg(16);

void BM_TwoRuleClosedForm(benchmark::State& state) {
  const auto set = instances(2, 256);
  std::size_t i = 0;
  for (auto _ : state) {
    const Instance& in = set[i++ % set.size()];
    const auto& f = in.firing;
    benchmark::DoNotOptimize(two_rule_type_reduce(f.lower[0], f.upper[0], std::min(in.d[0], in.d[1]), f.lower[1],
                                                  f.upper[1], std::max(in.d[0], in.d[1])));
  }
}
BENCHMARK(BM_TwoRuleClosedForm);

struct Setup {
  Architecture arch;
  TrajectoryBatch windows;
  std::vector<double> theta;
};

Setup setup(PartitionKind kind, Variant variant, int rollout) {
  Setup s;
  s.arch.state = {Representation::sr1, 1, 1, 1};
  s.arch.variant = variant;
  s.arch.partition = kind;
  s.arch.rules = 5;
  const Dataset raw = synth_generate(1, 400);
  const Dataset data = normalize(raw, compute_stats(raw));
  s.windows = make_trajectories(data, s.arch.state, rollout, 7);
  s.windows.resize(std::min<std::size_t>(s.windows.size(), 32));
  TrainConfig cfg;
  std::mt19937_64 rng(3);
  s.theta = initialize_params(s.arch, s.windows, cfg, rng);
  return s;
}

void BM_RolloutGradient(benchmark::State& state) {
  const auto kind = static_cast<PartitionKind>(state.range(0));
  const Variant variant = kind == PartitionKind::gauss ? Variant::afode : Variant::it2;
  const Setup s = setup(kind, variant, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient(s.arch, s.theta, s.windows, 0.99));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.windows.size()));
}
BENCHMARK(BM_RolloutGradient)
    ->ArgsProduct({{static_cast<long>(PartitionKind::ps1), static_cast<long>(PartitionKind::ps2),
                    static_cast<long>(PartitionKind::ps3), static_cast<long>(PartitionKind::gauss)},
                   {5, 20}})
    ->Unit(benchmark::kMillisecond);

void BM_RolloutForward(benchmark::State& state) {
  const Setup s = setup(PartitionKind::ps1, Variant::it2, static_cast<int>(state.range(0)));
  const AdditiveModel model = materialize<double>(s.arch, s.theta);
  for (auto _ : state)
    for (const Trajectory& w : s.windows) benchmark::DoNotOptimize(rollout(model, w.x0, w.inputs));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(s.windows.size()));
}
BENCHMARK(BM_RolloutForward)->Arg(5)->Arg(20)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
