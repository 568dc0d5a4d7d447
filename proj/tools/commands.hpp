#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xfode/training.hpp"

namespace xfode::cli {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3, kGradcheck = 4 };

struct TrainArgs {
  std::string data;
  std::string model = "model.json";
  std::string history;
  std::string report;
  std::string seeds;  // "a..b" or comma list; empty means config.seed
  double split = 0.5;
  TrainConfig config;
  std::string variant = "xfode+";
  std::string partition = "ps1";
  std::string representation = "sr1";
};

struct SimulateArgs {
  std::string model;
  std::string data;
  std::string out = "band.csv";
  std::string report;
  double split = 0.5;  // simulate on rows after this training prefix; 0 uses all rows
  int rollout = 0;     // 0: the roll-out used for training
  int stride = 0;      // 0: equal to the roll-out
};

struct GradcheckArgs {
  std::string variant = "xfode+";
  std::string partition = "ps1";
  std::string representation = "sr1";
  int order = 1;
  int rules = 3;
  int rollout = 5;
  int windows = 3;
  std::uint64_t seed = 7;
  double delta = 0.99;
  double tolerance = 1e-4;
  double corrupt = 0.0;
  std::size_t corrupt_index = 0;
  int show = 5;
};

struct ExportArgs {
  std::string model;
  std::string prefix = "mfs";
  int grid = 201;
  double lo = 0.0;
  double hi = 0.0;  // lo == hi: derive from the partition
};

struct SynthArgs {
  std::uint64_t seed = 1;
  std::size_t samples = 2000;
  double noise = 0.05;
  double amplitude = 0.5;
  std::string out = "synth.csv";
};

struct KmBenchArgs {
  int rules = 5;
  int instances = 20000;
  std::uint64_t seed = 1;
};

std::vector<std::uint64_t> parse_seeds(const std::string& text);

int run_train(TrainArgs args, const std::string& manifest);
int run_simulate(const SimulateArgs& args, const std::string& manifest);
int run_gradcheck(const GradcheckArgs& args);
int run_export_mfs(const ExportArgs& args);
int run_synth(const SynthArgs& args);
int run_km_bench(const KmBenchArgs& args);

}  // namespace xfode::cli
