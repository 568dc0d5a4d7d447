#include "xfode/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace xfode {

using nlohmann::json;

namespace {

json loss_json(const LossBreakdown& l) {
  return {{"accuracy", l.accuracy}, {"uncertainty", l.uncertainty}, {"composite", l.composite}};
}

LossBreakdown loss_from(const json& j) {
  return {j.at("accuracy").get<double>(), j.at("uncertainty").get<double>(), j.at("composite").get<double>()};
}

}  // namespace

std::string to_json(const ModelFile& f) {
  json j;
  j["schema_version"] = f.schema_version;
  j["state"] = {{"representation", std::string(to_string(f.arch.state.representation))},
                {"order", f.arch.state.order},
                {"n_y", f.arch.state.n_y},
                {"n_u", f.arch.state.n_u}};
  j["variant"] = std::string(to_string(f.arch.variant));
  j["partition"] = std::string(to_string(f.arch.partition));
  j["rules"] = f.arch.rules;
  j["normalization"] = {{"u_mean", f.stats.u_mean},
                        {"u_std", f.stats.u_std},
                        {"y_mean", f.stats.y_mean},
                        {"y_std", f.stats.y_std}};
  j["params"] = f.theta;
  const Provenance& p = f.provenance;
  j["provenance"] = {{"seed", p.seed},
                     {"epochs", p.epochs},
                     {"best_epoch", p.best_epoch},
                     {"rollout", p.rollout},
                     {"stride", p.stride},
                     {"batch_size", p.batch_size},
                     {"delta", p.delta},
                     {"learning_rate", p.learning_rate},
                     {"train_fraction", p.train_fraction},
                     {"final_loss", loss_json(p.final_loss)}};
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  ModelFile f;
  try {
    const json j = json::parse(text);
    f.schema_version = j.at("schema_version").get<int>();
    if (f.schema_version != kModelSchemaVersion)
      throw ConfigError("unsupported model schema version " + std::to_string(f.schema_version));
    const json& s = j.at("state");
    f.arch.state.representation = parse_representation(s.at("representation").get<std::string>());
    f.arch.state.order = s.at("order").get<int>();
    f.arch.state.n_y = s.at("n_y").get<int>();
    f.arch.state.n_u = s.at("n_u").get<int>();
    f.arch.variant = parse_variant(j.at("variant").get<std::string>());
    f.arch.partition = parse_partition(j.at("partition").get<std::string>());
    f.arch.rules = j.at("rules").get<int>();
    const json& n = j.at("normalization");
    f.stats.u_mean = n.at("u_mean").get<std::vector<double>>();
    f.stats.u_std = n.at("u_std").get<std::vector<double>>();
    f.stats.y_mean = n.at("y_mean").get<std::vector<double>>();
    f.stats.y_std = n.at("y_std").get<std::vector<double>>();
    f.theta = j.at("params").get<std::vector<double>>();
    const json& p = j.at("provenance");
    f.provenance.seed = p.at("seed").get<std::uint64_t>();
    f.provenance.epochs = p.at("epochs").get<int>();
    f.provenance.best_epoch = p.at("best_epoch").get<int>();
    f.provenance.rollout = p.at("rollout").get<int>();
    f.provenance.stride = p.at("stride").get<int>();
    f.provenance.batch_size = p.at("batch_size").get<int>();
    f.provenance.delta = p.at("delta").get<double>();
    f.provenance.learning_rate = p.at("learning_rate").get<double>();
    f.provenance.train_fraction = p.at("train_fraction").get<double>();
    f.provenance.final_loss = loss_from(p.at("final_loss"));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
  f.arch.validate();
  if (static_cast<int>(f.theta.size()) != f.arch.total_params())
    throw ConfigError("model file parameter count does not match its architecture");
  if (static_cast<int>(f.stats.y_mean.size()) != f.arch.state.n_y ||
      static_cast<int>(f.stats.u_mean.size()) != f.arch.state.n_u)
    throw ConfigError("model file normalization does not match its architecture");
  return f;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file '" + path.string() + "'");
  out << to_json(file);
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

}  // namespace xfode
