// Command-line front end for the xfode library.

#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "xfode/error.hpp"

namespace {

std::string resolved_config(const CLI::App& app, const CLI::App* sub) {
  std::string text = "# resolved configuration; rerun with: xfode --config <this file> " + sub->get_name() + "\n";
  std::istringstream all(app.config_to_str(true, false));
  const std::string prefix = sub->get_name() + ".";
  for (std::string line; std::getline(all, line);)
    if (line.rfind(prefix, 0) == 0) text += line + "\n";
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace xfode::cli;
  CLI::App app{"Additive interval type-2 fuzzy ODE models for system identification"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value configuration file; [train]-style sections per subcommand");
  app.allow_config_extras(CLI::config_extras_mode::error);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "fit a model on roll-out windows with Adam");
  train_cmd->add_option("--data", train.data, "dataset CSV (u1.., y1..)")->required();
  train_cmd->add_option("--model", train.model, "output checkpoint (JSON)")->capture_default_str();
  train_cmd->add_option("--history", train.history, "loss history CSV (epoch,L_A,L_UQ,L_C)");
  train_cmd->add_option("--report", train.report, "evaluate on the test split and write an EvalReport CSV");
  train_cmd->add_option("--seeds", train.seeds, "seed range a..b or list a,b,c; one model and report row per seed");
  train_cmd->add_option("--split", train.split, "training prefix fraction")->capture_default_str();
  train_cmd->add_option("--variant", train.variant, "xfode+ | xfode | afode+")->capture_default_str();
  train_cmd->add_option("--partition", train.partition, "ps1 | ps2 | ps3 | gauss")->capture_default_str();
  train_cmd->add_option("--repr", train.representation, "state representation sr0 | sr1")->capture_default_str();
  train_cmd->add_option("--order", train.config.order, "difference order m (sr1)")->capture_default_str();
  train_cmd->add_option("--rules", train.config.rules, "rules per input P")->capture_default_str();
  train_cmd->add_option("--rollout", train.config.rollout, "roll-out length N")->capture_default_str();
  train_cmd->add_option("--batch", train.config.batch_size, "mini-batch size")->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs, "epochs E")->capture_default_str();
  train_cmd->add_option("--delta", train.config.delta, "target coverage")->capture_default_str();
  train_cmd->add_option("--lr", train.config.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--beta1", train.config.beta1, "Adam beta1")->capture_default_str();
  train_cmd->add_option("--beta2", train.config.beta2, "Adam beta2")->capture_default_str();
  train_cmd->add_option("--eps", train.config.epsilon, "Adam epsilon")->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed, "random seed")->capture_default_str();
  train_cmd->add_option("--stride", train.config.stride, "window stride")->capture_default_str();
  train_cmd->add_option("--init-std", train.config.intercept_init_std, "std of initial intercepts")
      ->capture_default_str();

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "closed-loop simulation with prediction intervals");
  sim_cmd->add_option("--model", sim.model, "checkpoint (JSON)")->required();
  sim_cmd->add_option("--data", sim.data, "dataset CSV")->required();
  sim_cmd->add_option("--out", sim.out, "band CSV")->capture_default_str();
  sim_cmd->add_option("--report", sim.report, "EvalReport CSV");
  sim_cmd->add_option("--split", sim.split, "simulate rows after this training prefix; 0 = all rows")
      ->capture_default_str();
  sim_cmd->add_option("--rollout", sim.rollout, "roll-out length; 0 = training value")->capture_default_str();
  sim_cmd->add_option("--stride", sim.stride, "window stride; 0 = roll-out length")->capture_default_str();

  GradcheckArgs gc;
  auto* gc_cmd = app.add_subcommand("gradcheck", "compare analytic and finite-difference gradients");
  gc_cmd->add_option("--variant", gc.variant)->capture_default_str();
  gc_cmd->add_option("--partition", gc.partition)->capture_default_str();
  gc_cmd->add_option("--repr", gc.representation)->capture_default_str();
  gc_cmd->add_option("--order", gc.order)->capture_default_str();
  gc_cmd->add_option("--rules", gc.rules, "rules per input P")->capture_default_str();
  gc_cmd->add_option("--rollout", gc.rollout, "roll-out length N")->capture_default_str();
  gc_cmd->add_option("--windows", gc.windows, "training windows in the check batch")->capture_default_str();
  gc_cmd->add_option("--seed", gc.seed, "seed for data, initialization and jitter")->capture_default_str();
  gc_cmd->add_option("--delta", gc.delta)->capture_default_str();
  gc_cmd->add_option("--tolerance", gc.tolerance, "maximum accepted relative error")->capture_default_str();
  gc_cmd->add_option("--corrupt", gc.corrupt, "test hook: add this to one analytic gradient entry");
  gc_cmd->add_option("--corrupt-index", gc.corrupt_index, "entry perturbed by --corrupt");
  gc_cmd->add_option("--show", gc.show, "worst coordinates listed on failure")->capture_default_str();

  ExportArgs ex;
  auto* ex_cmd = app.add_subcommand("export-mfs", "write UMF/LMF curves per input as CSV");
  ex_cmd->add_option("--model", ex.model)->required();
  ex_cmd->add_option("--out-prefix", ex.prefix, "files are <prefix>_z<i>.csv")->capture_default_str();
  ex_cmd->add_option("--grid", ex.grid, "grid points")->capture_default_str();
  ex_cmd->add_option("--lo", ex.lo, "grid start (normalized units)");
  ex_cmd->add_option("--hi", ex.hi, "grid end (normalized units)");

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "generate the synthetic damped-oscillator dataset");
  sy_cmd->add_option("--seed", sy.seed)->capture_default_str();
  sy_cmd->add_option("--samples", sy.samples)->capture_default_str();
  sy_cmd->add_option("--noise", sy.noise, "output noise std")->capture_default_str();
  sy_cmd->add_option("--amplitude", sy.amplitude, "input step amplitude")->capture_default_str();
  sy_cmd->add_option("--out", sy.out)->capture_default_str();

  KmBenchArgs kb;
  auto* kb_cmd = app.add_subcommand("km-bench", "type-reduction microbenchmark");
  kb_cmd->add_option("--rules", kb.rules)->capture_default_str();
  kb_cmd->add_option("--instances", kb.instances, "random firing intervals per timing")->capture_default_str();
  kb_cmd->add_option("--seed", kb.seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return run_train(train, resolved_config(app, train_cmd));
    if (*sim_cmd) return run_simulate(sim, resolved_config(app, sim_cmd));
    if (*gc_cmd) return run_gradcheck(gc);
    if (*ex_cmd) return run_export_mfs(ex);
    if (*sy_cmd) return run_synth(sy);
    if (*kb_cmd) return run_km_bench(kb);
  } catch (const xfode::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
