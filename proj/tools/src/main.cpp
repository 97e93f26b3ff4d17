#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dpstream/error.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kInit = 2, kParse = 3, kNoLabels = 4 };

void add_engine_flags(CLI::App* cmd, dpstream::cli::EngineFlags& f) {
  cmd->add_option("--objective", f.objective, "separation objective: reciprocal or printed")->capture_default_str();
  cmd->add_option("--root-delta", f.root_delta, "root in the objective: max-distance or exclude")
      ->capture_default_str();
  cmd->add_option("--index", f.index, "seed lookup: linear or grid")->capture_default_str();
  cmd->add_option("--order", f.order, "late points: reject or clamp")->capture_default_str();
  cmd->add_option("--ties", f.ties, "equidistant seeds: smallest-id or random")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dpstream::cli;
  CLI::App app{"density-peak stream clustering"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a planted stream");
  gen_cmd->add_option("--scenario", gen.scenario, "sds or hds")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--out,-o", gen.out, "output CSV (default stdout)");

  InitOptions init;
  double init_tau0 = 0.0;
  auto* init_cmd = app.add_subcommand("init", "initialise an engine and export the decision graph");
  init_cmd->add_option("--input,-i", init.input)->required();
  init_cmd->add_option("--config,-c", init.config);
  auto* tau_opt = init_cmd->add_option("--tau0", init_tau0, "initial separation threshold")->required();
  init_cmd->add_option("--emit-decision-graph", init.decision_graph, "cell_id,rho,delta CSV");
  init_cmd->add_option("--state", init.state, "engine state to write")->required();
  init_cmd->add_option("--init-points", init.init_points)->capture_default_str();
  add_engine_flags(init_cmd, init.flags);

  RunOptions run;
  double run_tau0 = 0.0;
  auto* run_cmd = app.add_subcommand("run", "stream points through an engine");
  run_cmd->add_option("--input,-i", run.input)->required();
  run_cmd->add_option("--state", run.state, "state written by init; its buffered rows are skipped");
  run_cmd->add_option("--config,-c", run.config, "initialise from the first --init-points rows instead");
  auto* run_tau_opt = run_cmd->add_option("--tau0", run_tau0);
  run_cmd->add_option("--init-points", run.init_points)->capture_default_str();
  run_cmd->add_option("--events", run.events, "event log, one JSON record per line");
  run_cmd->add_option("--snapshots", run.snapshots, "directory for per-sweep snapshot CSVs");
  run_cmd->add_option("--counters", run.counters, "instrumentation counters CSV");
  run_cmd->add_option("--save-state", run.save_state);
  add_engine_flags(run_cmd, run.flags);

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "freshness-weighted purity per snapshot");
  eval_cmd->add_option("--snapshots", eval.snapshots)->required();
  eval_cmd->add_option("--input,-i", eval.input, "labelled stream")->required();
  eval_cmd->add_option("--out,-o", eval.out, "metric CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kFailure;
  }

  try {
    if (*gen_cmd) run_gen(gen);
    if (*init_cmd) {
      if (*tau_opt) init.tau0 = init_tau0;
      run_init(init);
    }
    if (*run_cmd) {
      if (*run_tau_opt) run.tau0 = run_tau0;
      run_run(run);
    }
    if (*eval_cmd) run_eval(eval);
  } catch (const dpstream::InitializationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInit;
  } catch (const dpstream::NoConsistentAlpha& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInit;
  } catch (const dpstream::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const dpstream::UndefinedMetric& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNoLabels;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
