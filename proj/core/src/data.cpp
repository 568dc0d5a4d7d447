#include "xfode/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace xfode {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// "u3" -> ('u', 3); anything else -> nullopt
std::optional<std::pair<char, int>> channel_name(std::string_view name) {
  if (name.size() < 2 || (name[0] != 'u' && name[0] != 'y')) return std::nullopt;
  int index = 0;
  const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
  if (ec != std::errc() || ptr != name.data() + name.size() || index < 1) return std::nullopt;
  return std::make_pair(name[0], index);
}

}  // namespace

Dataset Dataset::slice(std::size_t first, std::size_t count) const {
  Dataset out;
  out.u = u.slice(first, count);
  out.y = y.slice(first, count);
  out.sample_period = sample_period;
  return out;
}

Dataset read_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  std::vector<std::string> header;
  for (const auto f : split_fields(line)) header.emplace_back(f);
  std::map<int, std::size_t> u_cols, y_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto name = channel_name(header[c]);
    if (!name) throw DataError(source + ": unknown column '" + std::string(header[c]) + "' (expected u<i> or y<j>)");
    auto& cols = name->first == 'u' ? u_cols : y_cols;
    if (!cols.emplace(name->second, c).second)
      throw DataError(source + ": duplicate column '" + std::string(header[c]) + "'");
  }
  auto check_contiguous = [&](const std::map<int, std::size_t>& cols, char prefix) {
    int expected = 1;
    for (const auto& [index, col] : cols) {
      if (index != expected)
        throw DataError(source + ": missing column " + std::string(1, prefix) + std::to_string(expected));
      ++expected;
    }
  };
  check_contiguous(u_cols, 'u');
  check_contiguous(y_cols, 'y');
  if (y_cols.empty()) throw DataError(source + ": no output columns y1..");

  Dataset data;
  data.u = Series(0, u_cols.size());
  data.y = Series(0, y_cols.size());
  std::vector<double> row(header.size()), u_row(u_cols.size()), y_row(y_cols.size());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw DataError(source + ": row " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[c]);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(row[c]))
        throw DataError(source + ": row " + std::to_string(line_no) + ", column '" + std::string(header[c]) +
                        "': not a finite number '" + std::string(f) + "'");
    }
    for (const auto& [index, col] : u_cols) u_row[index - 1] = row[col];
    for (const auto& [index, col] : y_cols) y_row[index - 1] = row[col];
    data.u.push_row(u_row);
    data.y.push_row(y_row);
  }
  if (data.y.rows() == 0) throw DataError(source + ": no data rows");
  return data;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  return read_csv(in, path.string());
}

void write_csv(std::ostream& out, const Dataset& data) {
  const int n_u = data.n_u();
  const int n_y = data.n_y();
  for (int j = 0; j < n_u; ++j) out << (j ? "," : "") << 'u' << j + 1;
  for (int j = 0; j < n_y; ++j) out << (n_u + j ? "," : "") << 'y' << j + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t k = 0; k < data.size(); ++k) {
    for (int j = 0; j < n_u; ++j) out << (j ? "," : "") << data.u(k, j);
    for (int j = 0; j < n_y; ++j) out << (n_u + j ? "," : "") << data.y(k, j);
    out << '\n';
  }
}

void save_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  write_csv(out, data);
}

NormStats compute_stats(const Dataset& train) {
  auto moments = [](const Series& s, std::vector<double>& mean, std::vector<double>& sd, char prefix) {
    const std::size_t n = s.rows();
    mean.assign(s.cols(), 0.0);
    sd.assign(s.cols(), 0.0);
    for (std::size_t c = 0; c < s.cols(); ++c) {
      double m = 0.0;
      for (std::size_t r = 0; r < n; ++r) m += s(r, c);
      m /= static_cast<double>(n);
      double v = 0.0;
      for (std::size_t r = 0; r < n; ++r) v += (s(r, c) - m) * (s(r, c) - m);
      v /= static_cast<double>(n);
      if (!(v > 0.0))
        throw DataError(std::string("channel ") + prefix + std::to_string(c + 1) + " is constant on the training split");
      mean[c] = m;
      sd[c] = std::sqrt(v);
    }
  };
  if (train.size() == 0) throw DataError("cannot compute statistics of an empty split");
  NormStats stats;
  moments(train.u, stats.u_mean, stats.u_std, 'u');
  moments(train.y, stats.y_mean, stats.y_std, 'y');
  return stats;
}

namespace {

Dataset transform(const Dataset& data, const NormStats& s, bool forward) {
  if (s.u_mean.size() != data.u.cols() || s.y_mean.size() != data.y.cols())
    throw DataError("normalization statistics do not match dataset channels");
  Dataset out = data;
  auto apply = [forward](Series& t, const std::vector<double>& mean, const std::vector<double>& sd) {
    for (std::size_t r = 0; r < t.rows(); ++r)
      for (std::size_t c = 0; c < t.cols(); ++c)
        t(r, c) = forward ? (t(r, c) - mean[c]) / sd[c] : t(r, c) * sd[c] + mean[c];
  };
  apply(out.u, s.u_mean, s.u_std);
  apply(out.y, s.y_mean, s.y_std);
  return out;
}

}  // namespace

Dataset normalize(const Dataset& data, const NormStats& stats) { return transform(data, stats, true); }
Dataset denormalize(const Dataset& data, const NormStats& stats) { return transform(data, stats, false); }

std::size_t split_index(std::size_t size, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) throw ConfigError("train fraction must lie in (0, 1]");
  return static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(size)));
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction) {
  const std::size_t cut = split_index(data.size(), train_fraction);
  return {data.slice(0, cut), data.slice(cut, data.size() - cut)};
}

std::size_t count_windows(std::size_t size, const StateSpec& spec, int rollout, int stride) {
  if (rollout < 1 || stride < 1) throw ConfigError("rollout length and stride must be positive");
  const std::size_t first = static_cast<std::size_t>(spec.history());
  const std::size_t N = static_cast<std::size_t>(rollout);
  if (size < first + N + 1) return 0;
  const std::size_t last = size - 1 - N;
  return (last - first) / static_cast<std::size_t>(stride) + 1;
}

TrajectoryBatch make_trajectories(const Dataset& data, const StateSpec& spec, int rollout, int stride) {
  if (data.n_y() != spec.n_y || data.n_u() != spec.n_u) throw DataError("dataset channels differ from the state spec");
  const std::size_t B = count_windows(data.size(), spec, rollout, stride);
  if (B == 0)
    throw DataError("dataset of " + std::to_string(data.size()) + " samples is too short for roll-out " +
                    std::to_string(rollout) + " with " + std::to_string(spec.history()) + " history rows");
  const std::size_t N = static_cast<std::size_t>(rollout);
  const std::size_t n_x = static_cast<std::size_t>(spec.n_x());
  TrajectoryBatch batch;
  batch.reserve(B);
  for (std::size_t w = 0; w < B; ++w) {
    Trajectory t;
    t.anchor = static_cast<std::size_t>(spec.history()) + w * static_cast<std::size_t>(stride);
    t.x0 = build_state(spec, data.y, t.anchor);
    t.inputs = data.u.slice(t.anchor, N);
    t.targets = Series(N, n_x);
    for (std::size_t k = 0; k < N; ++k) {
      const auto x = build_state(spec, data.y, t.anchor + k + 1);
      std::copy(x.begin(), x.end(), t.targets.row(k).begin());
    }
    batch.push_back(std::move(t));
  }
  return batch;
}

Dataset synth_generate(std::uint64_t seed, std::size_t samples, const SynthOptions& options) {
  if (samples < 50) throw ConfigError("synthetic datasets need at least 50 samples");
  if (options.min_hold < 1 || options.max_hold < options.min_hold) throw ConfigError("invalid input hold range");
  std::mt19937_64 input_rng(seed);
  std::mt19937_64 noise_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> hold_dist(options.min_hold, options.max_hold);
  std::uniform_real_distribution<double> level_dist(-1.0, 1.0);
  std::normal_distribution<double> noise_dist(0.0, 1.0);

  Dataset data;
  data.u = Series(samples, 1);
  data.y = Series(samples, 1);
  data.sample_period = options.dt;
  double s1 = options.position0;
  double s2 = options.velocity0;
  double level = 0.0;
  int remaining = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    if (remaining == 0) {
      level = options.input_amplitude * level_dist(input_rng);
      remaining = hold_dist(input_rng);
    }
    --remaining;
    const double noise = options.noise_std > 0.0 ? options.noise_std * noise_dist(noise_rng) : 0.0;
    data.u(k, 0) = level;
    data.y(k, 0) = s1 + noise;
    const double ds1 = s2;
    const double ds2 = -0.3 * s2 - std::sin(s1) + level;
    s1 += options.dt * ds1;
    s2 += options.dt * ds2;
  }
  return data;
}

}  // namespace xfode
