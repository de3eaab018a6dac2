#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "riskquad/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Weighted-ES portfolio toolkit: scenario-weighted risk measures, "
               "their LP reformulation, and the backtesting pipeline"};
  app.require_subcommand(1);

  riskquad::CommandOptions opts;
  std::uint64_t verify_seed = 1;
  std::size_t verify_trials = 1000;

  const auto add_common = [&](CLI::App* cmd, bool with_fetch) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file")->required();
    cmd->add_option("--out", opts.output_dir, "output directory (overrides the config)");
    cmd->add_option("--seed", opts.seed, "seed override");
    if (with_fetch)
      cmd->add_flag("--fetch", opts.fetch, "retrieve prices over HTTP per data.fetch");
  };

  CLI::App* optimize = app.add_subcommand("optimize", "solve the portfolio programs and write "
                                                      "weights, objectives and MPS models");
  add_common(optimize, true);

  CLI::App* backtest = app.add_subcommand("backtest", "train/test evaluation with report CSV, "
                                                      "JSON and a daily-return chart");
  add_common(backtest, true);
  backtest->add_flag("--no-chart", opts.no_chart, "skip the SVG chart");

  CLI::App* sensitivity =
      app.add_subcommand("sensitivity", "run the parameter grid and write the combined report");
  add_common(sensitivity, true);

  CLI::App* export_lp =
      app.add_subcommand("export-lp", "write the portfolio MPS models without solving");
  add_common(export_lp, false);

  CLI::App* verify = app.add_subcommand(
      "verify", "run the axiom catalog, weight-recovery and quadrangle identity suites");
  verify->add_option("--seed", verify_seed, "randomization seed");
  verify->add_option("--trials", verify_trials, "trials per axiom");

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) return riskquad::cmd_optimize(opts);
    if (backtest->parsed()) return riskquad::cmd_backtest(opts);
    if (sensitivity->parsed()) return riskquad::cmd_sensitivity(opts);
    if (export_lp->parsed()) return riskquad::cmd_export_lp(opts);
    if (verify->parsed()) return riskquad::cmd_verify(verify_seed, verify_trials);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
