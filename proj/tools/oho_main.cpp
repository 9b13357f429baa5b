#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oho/config.hpp"
#include "oho/errors.hpp"
#include "oho/sweep.hpp"

namespace {

// Exit codes: 0 success, 1 config error, 2 numerical halt, 3 I/O error.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericalHalt = 2;
constexpr int kIoError = 3;

int default_workers() {
  if (const char* env = std::getenv("OHO_NUM_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

std::string companion_path(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out + "_frozen";
  return out.substr(0, dot) + "_frozen" + out.substr(dot);
}

int report_halt(const oho::RunTrace& trace) {
  if (!trace.halt) return kOk;
  std::cerr << "numerical instability at step " << trace.halt->step << ": "
            << trace.halt->message << "\n"
            << "partial trace written (" << trace.records.size() << " steps)\n";
  return kNumericalHalt;
}

struct TrainOpts {
  std::string config_path;
  std::string out_path;
  std::int64_t seed = -1;
  bool seed_given = false;
};

int cmd_train(const TrainOpts& opts) {
  oho::RunConfig cfg = oho::load_run_config(opts.config_path);
  if (opts.seed_given) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  oho::RunTrace trace = oho::run(cfg);
  oho::write_trace_csv_file(trace, opts.out_path);
  return report_halt(trace);
}

struct SweepOpts {
  std::string config_path;
  std::string out_path;
  int trials = 0;
  int workers = 1;
  double alpha_min = 0.0001, alpha_max = 0.2;
  double lambda_min = 0.0, lambda_max = 0.0001;
  double target = 0.3;
  std::int64_t seed = -1;
  bool seed_given = false;
};

int cmd_sweep(const SweepOpts& opts) {
  oho::RunConfig cfg = oho::load_run_config(opts.config_path);
  const std::uint64_t master =
      opts.seed_given ? static_cast<std::uint64_t>(opts.seed) : cfg.seed;
  oho::SweepReport report =
      oho::sweep_random(cfg, opts.trials, {opts.alpha_min, opts.alpha_max},
                        {opts.lambda_min, opts.lambda_max}, opts.target, master, opts.workers);
  oho::write_sweep_csv_file(report, opts.out_path);
  for (const auto& t : report.trials)
    std::cerr << "trial " << t.trial << ": alpha0=" << t.alpha0 << " lambda0=" << t.lambda0
              << " final_val_loss=" << t.final_val_loss << " wallclock=" << t.wallclock_s
              << "s\n";
  return kOk;
}

struct PerturbOpts {
  std::string config_path;
  std::string out_path;
  std::string target = "alpha";
  double value = 0.0;
  std::vector<int> at;
  std::int64_t seed = -1;
  bool seed_given = false;
};

int cmd_perturb(const PerturbOpts& opts) {
  oho::RunConfig cfg = oho::load_run_config(opts.config_path);
  if (opts.seed_given) cfg.seed = static_cast<std::uint64_t>(opts.seed);
  if (!cfg.oho_mode())
    throw oho::ConfigError("perturb requires an oho config", "scheduler");
  if (!opts.at.empty()) {
    oho::PerturbationSchedule p;
    p.target = opts.target == "lambda" ? oho::HyperKind::lambda : oho::HyperKind::alpha;
    p.value = opts.value;
    p.epochs = opts.at;
    cfg.perturbations.push_back(std::move(p));
    cfg.validate();
  }
  auto [main_trace, frozen_trace] = oho::run_with_frozen_companion(cfg);
  oho::write_trace_csv_file(main_trace, opts.out_path);
  oho::write_trace_csv_file(frozen_trace, companion_path(opts.out_path));
  const int main_code = report_halt(main_trace);
  const int frozen_code = report_halt(frozen_trace);
  return main_code != kOk ? main_code : frozen_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint optimization of network parameters and optimizer hyperparameters"};
  app.require_subcommand(1);

  TrainOpts train;
  CLI::App* t = app.add_subcommand("train", "Run one training configuration, write a trace CSV");
  t->add_option("--config", train.config_path, "JSON run configuration")->required();
  t->add_option("--out", train.out_path, "Output trace CSV path")->required();
  t->add_option("--seed", train.seed, "Override the config seed");

  SweepOpts sweep;
  CLI::App* s = app.add_subcommand("sweep", "Random search over initial hyperparameters");
  s->add_option("--config", sweep.config_path, "JSON run configuration template")->required();
  s->add_option("--out", sweep.out_path, "Output summary CSV path")->required();
  s->add_option("--trials", sweep.trials, "Number of trials")->required();
  s->add_option("--workers", sweep.workers, "Worker threads (default OHO_NUM_WORKERS or 1)")
      ->default_val(default_workers());
  s->add_option("--alpha-min", sweep.alpha_min, "Learning-rate range lower bound");
  s->add_option("--alpha-max", sweep.alpha_max, "Learning-rate range upper bound");
  s->add_option("--lambda-min", sweep.lambda_min, "Weight-decay range lower bound");
  s->add_option("--lambda-max", sweep.lambda_max, "Weight-decay range upper bound");
  s->add_option("--target", sweep.target, "Validation loss target for hit_step");
  s->add_option("--seed", sweep.seed, "Master seed (default: config seed)");

  PerturbOpts perturb;
  CLI::App* p = app.add_subcommand(
      "perturb", "Training run with forced hyperparameter re-initializations, plus the "
                 "frozen-phi companion run");
  p->add_option("--config", perturb.config_path, "JSON run configuration")->required();
  p->add_option("--out", perturb.out_path, "Output trace CSV path")->required();
  p->add_option("--target", perturb.target, "alpha or lambda")
      ->check(CLI::IsMember({"alpha", "lambda"}));
  p->add_option("--value", perturb.value, "Re-initialization value");
  p->add_option("--at", perturb.at, "Epochs at which to apply the value")->delimiter(',');
  p->add_option("--seed", perturb.seed, "Override the config seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  train.seed_given = t->count("--seed") > 0;
  sweep.seed_given = s->count("--seed") > 0;
  perturb.seed_given = p->count("--seed") > 0;

  try {
    if (t->parsed()) return cmd_train(train);
    if (s->parsed()) return cmd_sweep(sweep);
    if (p->parsed()) return cmd_perturb(perturb);
  } catch (const oho::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const oho::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kIoError;
  } catch (const oho::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
