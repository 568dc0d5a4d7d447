#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "xfode/data.hpp"
#include "xfode/model.hpp"
#include "xfode/training.hpp"

namespace xfode {

inline constexpr int kModelSchemaVersion = 1;

struct Provenance {
  std::uint64_t seed = 0;
  int epochs = 0;
  int best_epoch = 0;
  int rollout = 20;
  int stride = 1;
  int batch_size = 32;
  double delta = 0.99;
  double learning_rate = 1e-2;
  double train_fraction = 0.5;
  LossBreakdown final_loss;

  bool operator==(const Provenance&) const = default;
};

struct ModelFile {
  int schema_version = kModelSchemaVersion;
  Architecture arch;
  NormStats stats;
  std::vector<double> theta;  // raw parameters
  Provenance provenance;

  AdditiveModel model() const { return materialize<double>(arch, theta); }
};

// JSON text; doubles are written in shortest round-trip form so a reload
// reproduces every parameter bit for bit.
std::string to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace xfode
