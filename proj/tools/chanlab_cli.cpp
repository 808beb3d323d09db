// chanlab command-line driver: one subcommand per experiment.
//
// Exit codes: 0 success, 1 invalid configuration, 2 budget / optimizer /
// sampling failure, 3 I/O error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chanlab/errors.hpp"
#include "chanlab/harness/config.hpp"
#include "chanlab/harness/experiments.hpp"
#include "chanlab/harness/report.hpp"

namespace {

using chanlab::harness::ExperimentConfig;

struct Flags {
  std::string config_path;
  std::string k, d, m, eps, objective, out, format;
  int trials = 0, subspace_trials = 0, starts = 0, max_iters = 0, samples = 0, probes = 0,
      center_trials = 0, workers = 0;
  std::uint64_t seed = 0, optimizer_seed = 0;
  double budget = 0, initial_step = 0, step_shrink = 0, grad_tol = 0, rel_tol = 0;
  std::vector<std::string> constants;
  bool bits = false;
};

struct Options {
  CLI::Option *k, *d, *m, *eps, *objective, *out, *format, *trials, *subspace_trials, *starts,
      *max_iters, *samples, *probes, *center_trials, *workers, *seed, *optimizer_seed, *budget,
      *initial_step, *step_shrink, *grad_tol, *rel_tol, *constants, *bits;
};

Options add_flags(CLI::App* sub, Flags& f) {
  Options o{};
  sub->add_option("--config", f.config_path,
                  "JSON config (keys mirror the flags) or a previous report to replay");
  o.k = sub->add_option("--k", f.k, "comma-separated k grid");
  o.d = sub->add_option("--d", f.d, "comma-separated d grid; entries like 16k2 mean 16*k^2");
  o.m = sub->add_option("--m", f.m, "comma-separated m grid; entries like d/8 or kd allowed");
  o.trials = sub->add_option("--trials", f.trials, "trials per grid point");
  o.subspace_trials = sub->add_option("--subspace-trials", f.subspace_trials,
                                      "random subspaces per grid point");
  o.seed = sub->add_option("--seed", f.seed, "master seed");
  o.starts = sub->add_option("--starts", f.starts, "optimizer starts");
  o.max_iters = sub->add_option("--max-iters", f.max_iters, "optimizer iterations per start");
  o.initial_step = sub->add_option("--initial-step", f.initial_step, "optimizer initial step");
  o.step_shrink = sub->add_option("--step-shrink", f.step_shrink, "backtracking factor");
  o.grad_tol = sub->add_option("--grad-tol", f.grad_tol, "stop when |grad| falls below");
  o.rel_tol = sub->add_option("--rel-tol", f.rel_tol, "stop on relative improvement below");
  o.optimizer_seed = sub->add_option("--optimizer-seed", f.optimizer_seed,
                                     "salt for optimizer start streams");
  o.out = sub->add_option("--out", f.out, "output path (stdout when omitted)");
  o.format = sub->add_option("--format", f.format, "json or csv");
  o.bits = sub->add_flag("--bits", f.bits, "report entropies in bits");
  o.budget = sub->add_option("--budget", f.budget, "scalar-operation budget");
  o.constants = sub->add_option("--constant", f.constants, "name=value, repeatable");
  o.objective = sub->add_option("--objective", f.objective, "g_tilde, opnorm or schatten4");
  o.eps = sub->add_option("--eps", f.eps, "comma-separated tail grid");
  o.samples = sub->add_option("--samples", f.samples, "point-cloud size for net commands");
  o.probes = sub->add_option("--probes", f.probes, "random probes per section");
  o.center_trials = sub->add_option("--center-trials", f.center_trials,
                                    "samples for the ambient central value");
  o.workers = sub->add_option("--workers", f.workers, "worker threads");
  return o;
}

void apply(const Options& o, const Flags& f, ExperimentConfig& cfg) {
  using namespace chanlab::harness;
  if (o.k->count()) cfg.k = parse_int_list(f.k);
  if (o.d->count()) cfg.d = parse_token_list(f.d);
  if (o.m->count()) cfg.m = parse_token_list(f.m);
  if (o.eps->count()) cfg.eps = parse_double_list(f.eps);
  if (o.objective->count()) cfg.objective = f.objective;
  if (o.out->count()) cfg.out = f.out;
  if (o.format->count()) cfg.format = f.format;
  if (o.trials->count()) cfg.trials = f.trials;
  if (o.subspace_trials->count()) cfg.subspace_trials = f.subspace_trials;
  if (o.starts->count()) cfg.optimizer.starts = f.starts;
  if (o.max_iters->count()) cfg.optimizer.max_iters = f.max_iters;
  if (o.initial_step->count()) cfg.optimizer.initial_step = f.initial_step;
  if (o.step_shrink->count()) cfg.optimizer.step_shrink = f.step_shrink;
  if (o.grad_tol->count()) cfg.optimizer.grad_tol = f.grad_tol;
  if (o.rel_tol->count()) cfg.optimizer.rel_tol = f.rel_tol;
  if (o.optimizer_seed->count()) cfg.optimizer.seed = f.optimizer_seed;
  if (o.samples->count()) cfg.samples = f.samples;
  if (o.probes->count()) cfg.probes = f.probes;
  if (o.center_trials->count()) cfg.center_trials = f.center_trials;
  if (o.workers->count()) cfg.workers = f.workers;
  if (o.seed->count()) cfg.seed = f.seed;
  if (o.budget->count()) cfg.budget = f.budget;
  if (o.bits->count()) cfg.bits = true;
  for (const std::string& c : f.constants) {
    const auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw chanlab::DomainError("--constant expects name=value, got '" + c + "'");
    }
    const std::vector<double> v = parse_double_list(c.substr(eq + 1));
    if (v.size() != 1) throw chanlab::DomainError("--constant expects a single value");
    cfg.constants[c.substr(0, eq)] = v.front();
  }
}

int run(const std::string& command, const Options& o, const Flags& f) {
  using namespace chanlab::harness;
  ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = load_config(f.config_path);
  apply(o, f, cfg);
  cfg.command = command;
  const ExperimentReport report = run_named_experiment(cfg);
  if (cfg.out.empty()) {
    std::cout << render_report(report, cfg.format);
    if (cfg.format == "csv" && !report.plot_data.empty()) {
      std::cout << "\n" << plot_csv_text(cfg.bits ? to_bits(report) : report);
    }
  } else {
    emit_report(report, cfg.out, cfg.format);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chanlab: random-channel entropy experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", chanlab::harness::library_version());
  Flags flags;
  std::vector<std::pair<CLI::App*, Options>> subs;
  for (const std::string& name : chanlab::harness::known_commands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    subs.emplace_back(sub, add_flags(sub, flags));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    for (const auto& [sub, opts] : subs) {
      if (sub->parsed()) return run(sub->get_name(), opts, flags);
    }
    return 1;
  } catch (const chanlab::DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 1;
  } catch (const chanlab::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const chanlab::BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 2;
  } catch (const chanlab::OptimizerError& e) {
    std::cerr << "optimizer failure: " << e.what() << "\n";
    return 2;
  } catch (const chanlab::SamplingError& e) {
    std::cerr << "sampling failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
