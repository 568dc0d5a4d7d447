#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "xfode/xfode.hpp"

namespace xfode::cli {

namespace fs = std::filesystem;

namespace {

std::string with_seed(const std::string& path, std::uint64_t seed) {
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + ".seed" + std::to_string(seed) + p.extension().string())).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
}

void write_history(const std::string& path, const std::vector<EpochLoss>& history) {
  std::ostringstream out;
  out << "epoch,L_A,L_UQ,L_C\n" << std::setprecision(17);
  for (const auto& h : history)
    out << h.epoch << ',' << h.loss.accuracy << ',' << h.loss.uncertainty << ',' << h.loss.composite << '\n';
  write_text(path, out.str());
}

Dataset test_rows(const Dataset& raw, double split) {
  if (split <= 0.0) return raw;
  const std::size_t cut = split_index(raw.size(), split);
  return raw.slice(cut, raw.size() - cut);
}

}  // namespace

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError("invalid seed '" + s + "'");
    return static_cast<std::uint64_t>(v);
  };
  const auto range = text.find("..");
  if (range != std::string::npos) {
    const std::uint64_t a = number(text.substr(0, range));
    const std::uint64_t b = number(text.substr(range + 2));
    if (b < a) throw ConfigError("empty seed range '" + text + "'");
    for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
    return seeds;
  }
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) seeds.push_back(number(item));
  if (seeds.empty()) throw ConfigError("no seeds given");
  return seeds;
}

int run_train(TrainArgs args, const std::string& manifest) {
  args.config.variant = parse_variant(args.variant);
  args.config.partition = parse_partition(args.partition);
  args.config.representation = parse_representation(args.representation);
  args.config.validate();
  const std::vector<std::uint64_t> seeds =
      args.seeds.empty() ? std::vector<std::uint64_t>{args.config.seed} : parse_seeds(args.seeds);
  const bool many = seeds.size() > 1 || !args.seeds.empty();

  const Dataset raw = load_csv(args.data);
  const auto [train_raw, test_raw] = split(raw, args.split);
  const NormStats stats = compute_stats(train_raw);
  const Dataset train_norm = normalize(train_raw, stats);
  const bool evaluate = !args.report.empty() || many;

  std::ostringstream report;
  write_report_csv_header(report, static_cast<std::size_t>(raw.n_y()));
  for (std::uint64_t seed : seeds) {
    TrainConfig cfg = args.config;
    cfg.seed = seed;
    const TrainResult result = train(train_norm, cfg, [&](const EpochLoss& e) {
      if (e.epoch % 10 == 0 || e.epoch == cfg.epochs)
        std::cerr << "seed " << seed << " epoch " << e.epoch << "  L_A " << e.loss.accuracy << "  L_UQ "
                  << e.loss.uncertainty << "  L_C " << e.loss.composite << '\n';
    });

    ModelFile file;
    file.arch = result.arch;
    file.stats = stats;
    file.theta = result.theta;
    file.provenance = {seed,           cfg.epochs,     result.best_epoch,    cfg.rollout, cfg.stride,
                       cfg.batch_size, cfg.delta,      cfg.learning_rate,    args.split,  result.best_loss};
    const std::string model_path = many ? with_seed(args.model, seed) : args.model;
    save_model(model_path, file);
    if (!args.history.empty()) write_history(many ? with_seed(args.history, seed) : args.history, result.history);

    if (evaluate) {
      const Dataset test = normalize(test_rows(raw, args.split), stats);
      Simulation sim = simulate(file.model(), stats, test, cfg.rollout, cfg.rollout);
      sim.report.seed = seed;
      write_report_csv_row(report, sim.report);
      write_report_text(std::cout, sim.report);
    }
    std::cout << "wrote " << model_path << " (#LP " << result.arch.total_params() << ", best epoch "
              << result.best_epoch << ", L_C " << result.best_loss.composite << ")\n";
  }
  if (!args.report.empty()) write_text(args.report, report.str());
  write_text(args.model + ".manifest.ini", manifest);
  return kOk;
}

int run_simulate(const SimulateArgs& args, const std::string& manifest) {
  const ModelFile file = load_model(args.model);
  const Dataset raw = load_csv(args.data);
  if (raw.n_y() != file.arch.state.n_y || raw.n_u() != file.arch.state.n_u)
    throw DataError("dataset channels (" + std::to_string(raw.n_u()) + " inputs, " + std::to_string(raw.n_y()) +
                    " outputs) do not match the model");
  const int rollout = args.rollout > 0 ? args.rollout : file.provenance.rollout;
  const int stride = args.stride > 0 ? args.stride : rollout;
  const Dataset test = normalize(test_rows(raw, args.split), file.stats);
  Simulation sim = simulate(file.model(), file.stats, test, rollout, stride);
  sim.report.seed = file.provenance.seed;

  std::ostringstream band;
  write_band_csv(band, sim, file.stats);
  write_text(args.out, band.str());
  if (!args.report.empty()) {
    std::ostringstream rep;
    write_report_csv_header(rep, sim.report.channels.size());
    write_report_csv_row(rep, sim.report);
    write_text(args.report, rep.str());
  }
  write_report_text(std::cout, sim.report);
  for (std::size_t j = 0; j < sim.baseline_rmse.size(); ++j)
    std::cout << "y" << j + 1 << "       zero-dynamics baseline RMSE " << sim.baseline_rmse[j] << '\n';
  int degenerate = 0;
  for (const auto& b : sim.bands) degenerate += b.degenerate;
  if (degenerate > 0) std::cout << "note: " << degenerate << " degenerate-firing fallbacks during simulation\n";
  write_text(args.out + ".manifest.ini", manifest);
  return kOk;
}

int run_gradcheck(const GradcheckArgs& args) {
  TrainConfig cfg;
  cfg.variant = parse_variant(args.variant);
  cfg.partition = parse_partition(args.partition);
  cfg.representation = parse_representation(args.representation);
  cfg.order = args.order;
  cfg.rules = args.rules;
  cfg.rollout = args.rollout;
  cfg.delta = args.delta;
  cfg.seed = args.seed;
  cfg.validate();
  if (args.windows < 1) throw ConfigError("gradcheck needs at least one window");

  const Dataset raw = synth_generate(args.seed, 300);
  const Dataset norm = normalize(raw, compute_stats(raw));
  const Architecture arch = cfg.architecture(1, 1);
  TrajectoryBatch all = make_trajectories(norm, arch.state, cfg.rollout, 13);
  if (all.size() > static_cast<std::size_t>(args.windows)) all.resize(static_cast<std::size_t>(args.windows));

  std::mt19937_64 rng(args.seed);
  std::vector<double> theta = initialize_params(arch, all, cfg, rng);
  std::normal_distribution<double> jitter(0.0, 0.3);
  for (double& v : theta) v += jitter(rng);

  GradCheckOptions opt;
  opt.tolerance = args.tolerance;
  opt.corrupt_amount = args.corrupt;
  opt.corrupt_index = args.corrupt_index;
  const GradCheckReport report = gradient_check(arch, theta, all, cfg.delta, opt);

  std::cout << "gradcheck " << to_string(arch.variant) << " (" << to_string(arch.partition) << "), P=" << arch.rules
            << ", n_z=" << arch.state.n_z() << ", N=" << cfg.rollout << ", windows=" << all.size() << ", #LP "
            << arch.total_params() << '\n';
  std::vector<std::pair<std::string, double>> blocks;
  for (const auto& e : report.entries) {
    if (e.kink) continue;
    const std::string block = param_block(arch, e.index);
    if (blocks.empty() || blocks.back().first != block) blocks.emplace_back(block, 0.0);
    blocks.back().second = std::max(blocks.back().second, e.rel_error);
  }
  std::cout << std::scientific << std::setprecision(3);
  for (const auto& [name, err] : blocks) std::cout << "  " << std::left << std::setw(16) << name << err << '\n';
  std::cout << "max relative error " << report.max_rel_error << " (tolerance " << args.tolerance << "), "
            << report.excluded << " kink coordinate(s) excluded\n";
  for (const auto& e : report.entries)
    if (e.kink) std::cout << "  kink: " << e.label << '\n';
  if (report.passed) {
    std::cout << "PASS\n";
    return kOk;
  }
  std::cout << "FAIL; worst coordinates:\n";
  for (const auto& e : report.worst(static_cast<std::size_t>(args.show)))
    std::cout << "  " << e.label << " (index " << e.index << ")  analytic " << e.analytic << "  numeric " << e.numeric
              << "  rel " << e.rel_error << '\n';
  return kGradcheck;
}

int run_export_mfs(const ExportArgs& args) {
  if (args.grid < 1) throw ConfigError("grid needs at least one point");
  const ModelFile file = load_model(args.model);
  const AdditiveModel model = file.model();
  for (std::size_t i = 0; i < model.fls.size(); ++i) {
    const PartitionSpec& part = model.fls[i].partition;
    std::vector<double> grid;
    if (args.lo == args.hi) {
      grid = default_grid(part, args.grid);
    } else if (args.grid == 1) {
      grid = {0.5 * (args.lo + args.hi)};
    } else {
      for (int g = 0; g < args.grid; ++g) grid.push_back(args.lo + (args.hi - args.lo) * g / (args.grid - 1));
    }
    std::ostringstream out;
    write_mf_csv(out, part, grid);
    const std::string path = args.prefix + "_z" + std::to_string(i + 1) + ".csv";
    write_text(path, out.str());
    std::cout << "wrote " << path << '\n';
  }
  return kOk;
}

int run_synth(const SynthArgs& args) {
  SynthOptions opt;
  opt.noise_std = args.noise;
  opt.input_amplitude = args.amplitude;
  save_csv(args.out, synth_generate(args.seed, args.samples, opt));
  std::cout << "wrote " << args.out << " (" << args.samples << " samples)\n";
  return kOk;
}

int run_km_bench(const KmBenchArgs& args) {
  if (args.rules < 2 || args.rules > 20) throw ConfigError("km-bench supports 2..20 rules");
  if (args.instances < 1) throw ConfigError("km-bench needs at least one instance");
  std::mt19937_64 rng(args.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int P = args.rules;
  std::vector<FiringInterval> firings(args.instances);
  std::vector<std::vector<double>> cols(args.instances);
  for (int n = 0; n < args.instances; ++n) {
    for (int p = 0; p < P; ++p) {
      const double up = 0.05 + 0.95 * unit(rng);
      firings[n].upper.push_back(up);
      firings[n].lower.push_back(up * (0.1 + 0.9 * unit(rng)));
      cols[n].push_back(4.0 * unit(rng) - 2.0);
    }
  }
  using clock = std::chrono::steady_clock;
  auto time = [&](auto&& fn) {
    double sink = 0.0;
    const auto t0 = clock::now();
    for (int n = 0; n < args.instances; ++n) sink += fn(n);
    const double ns = std::chrono::duration<double, std::nano>(clock::now() - t0).count() / args.instances;
    return std::make_pair(ns, sink);
  };
  const auto km = time([&](int n) { return km_type_reduce(firings[n], cols[n]).lower; });
  const auto oracle = time([&](int n) { return vertex_oracle(firings[n], cols[n]).lower; });
  const auto pair = time([&](int n) {
    const auto& f = firings[n];
    const auto& d = cols[n];
    const bool ordered = d[0] <= d[1];
    const int a = ordered ? 0 : 1;
    const int b = 1 - a;
    return two_rule_type_reduce(f.lower[a], f.upper[a], d[a], f.lower[b], f.upper[b], d[b]).lower;
  });
  std::cout << std::fixed << std::setprecision(1) << "P=" << P << ", " << args.instances << " instances\n"
            << "  km_type_reduce   " << km.first << " ns/call\n"
            << "  vertex_oracle    " << oracle.first << " ns/call\n"
            << "  two-rule (P=2)   " << pair.first << " ns/call\n"
            << std::setprecision(6) << "  checksum " << km.second + oracle.second + pair.second << '\n';
  return kOk;
}

}  // namespace xfode::cli
