#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "wardtrans/config.hpp"
#include "wardtrans/run.hpp"
#include "wardtrans/types.hpp"

using namespace wardtrans;

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inference for ward-level pathogen transmission models"};
  app.require_subcommand(1);

  std::string config_path, runs_dir, out_dir;
  int jobs = 1;

  auto* fit = app.add_subcommand("fit", "run one MCMC chain per (ward, model)");
  fit->add_option("--config", config_path, "run configuration file")->required();
  fit->add_option("--jobs", jobs, "parallel (ward, model) jobs");

  auto* assess = app.add_subcommand(
      "assess", "model comparison and fit diagnostics from fitted chains");
  assess->add_option("--config", config_path, "run configuration file")->required();
  assess->add_option("--runs", runs_dir, "directory with fit outputs "
                                         "(default: output_dir)");
  assess->add_option("--jobs", jobs, "parallel (ward, model) jobs");

  auto* simulate = app.add_subcommand(
      "simulate", "generate synthetic ward data with known ground truth");
  simulate->add_option("--config", config_path, "run configuration file")->required();
  simulate->add_option("--out", out_dir, "output directory (default: output_dir)");

  auto* recover = app.add_subcommand(
      "recover", "simulate, fit and compare to the known truth in one pass");
  recover->add_option("--config", config_path, "run configuration file")->required();
  recover->add_option("--jobs", jobs, "parallel ward fits");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig config = load_run_config(config_path);
    if (fit->parsed()) return cmd_fit(config, jobs);
    if (assess->parsed()) return cmd_assess(config, runs_dir, jobs);
    if (simulate->parsed()) return cmd_simulate(config, out_dir);
    if (recover->parsed()) return cmd_recover(config, jobs);
  } catch (const ValidationError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return kExitValidation;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "runtime failure: %s\n", err.what());
    return kExitRuntime;
  }
  return kExitOk;
}
