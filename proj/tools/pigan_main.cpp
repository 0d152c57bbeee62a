#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pigan/cli.hpp"
#include "pigan/gan.hpp"

namespace cli = pigan::cli;

int main(int argc, char** argv) {
  CLI::App app{"adversarial PDE surrogate for Burgers uncertainty propagation"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, summary_path, dataset_path;
  std::string out_dir, study;
  std::uint64_t seed = 0;
  std::size_t jobs = 1, trials = 1;

  CLI::App* train = app.add_subcommand(
      "train", "train a model; writes config.json, dataset.csv, history.csv, "
               "checkpoint.json");
  train->add_option("--config", config_path, "experiment config JSON");
  CLI::Option* train_out =
      train->add_option("--out-dir", out_dir, "output directory");
  CLI::Option* train_seed =
      train->add_option("--seed", seed, "master seed override");

  CLI::App* eval = app.add_subcommand(
      "eval", "evaluate a checkpoint; writes summary.csv, report.json");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint JSON path")
      ->required();
  eval->add_option("--config", config_path, "experiment config JSON");
  CLI::Option* eval_out =
      eval->add_option("--out-dir", out_dir, "output directory");
  CLI::Option* eval_seed =
      eval->add_option("--seed", seed, "posterior sampling seed override");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a hyperparameter sweep; writes sweep.csv, "
               "sweep_summary.json, sweep_heatmap.svg for 2-axis sweeps");
  CLI::Option* sweep_cfg =
      sweep->add_option("--config", config_path, "sweep config JSON");
  CLI::Option* sweep_study = sweep->add_option(
      "--study", study, "built-in study: seeds15, nu_nr, arch, kg_kd");
  sweep_study->excludes(sweep_cfg);
  CLI::Option* sweep_trials =
      sweep->add_option("--trials", trials, "trials per cell");
  CLI::Option* sweep_jobs =
      sweep->add_option("--jobs", jobs, "worker threads");
  CLI::Option* sweep_seed =
      sweep->add_option("--seed", seed, "master seed override");
  CLI::Option* sweep_out =
      sweep->add_option("--out-dir", out_dir, "output directory");

  CLI::App* plot = app.add_subcommand(
      "plot", "render SVG figures from a posterior summary CSV");
  plot->add_option("--summary", summary_path, "summary.csv path")->required();
  plot->add_option("--dataset", dataset_path,
                   "dataset.csv for training-point markers");
  CLI::Option* plot_out =
      plot->add_option("--out-dir", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train) {
      cli::ExperimentConfig cfg = config_path.empty()
                                      ? cli::ExperimentConfig{}
                                      : cli::parse_config(config_path);
      if (*train_out) cfg.out_dir = out_dir;
      if (*train_seed) cfg.train.seed = seed;
      cfg.validate();
      return cli::cmd_train(cfg);
    }
    if (*eval) {
      cli::ExperimentConfig cfg = config_path.empty()
                                      ? cli::ExperimentConfig{}
                                      : cli::parse_config(config_path);
      if (*eval_out) cfg.out_dir = out_dir;
      if (*eval_seed) cfg.train.seed = seed;
      cfg.validate();
      return cli::cmd_eval(cfg, checkpoint_path);
    }
    if (*sweep) {
      cli::SweepConfig cfg;
      if (*sweep_cfg) {
        cfg = cli::parse_sweep_config(config_path);
      } else if (*sweep_study) {
        cfg.study = study;
        cfg.spec = cli::built_in_study(study);
      } else {
        std::cerr << "sweep needs --config or --study\n";
        return 2;
      }
      if (*sweep_trials) cfg.spec.trials_per_cell = trials;
      if (*sweep_jobs) cfg.spec.jobs = jobs;
      if (*sweep_seed) cfg.spec.master_seed = seed;
      if (*sweep_out) cfg.out_dir = out_dir;
      cfg.spec.validate();
      return cli::cmd_sweep(cfg);
    }
    if (*plot) {
      return cli::cmd_plot(summary_path, dataset_path,
                           *plot_out ? out_dir : "out");
    }
  } catch (const pigan::gan::TrainingDiverged& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
