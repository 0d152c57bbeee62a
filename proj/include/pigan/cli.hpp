#pragma once

#include <cstddef>
#include <string>

#include "pigan/eval.hpp"
#include "pigan/gan.hpp"

namespace pigan::cli {

// One experiment = training setup + dataset variant + evaluation grid.
// Defaults reproduce the noisy shock-uncertainty experiment; the JSON schema
// is the TrainConfig keys plus noisy, grid_nx, grid_nt, n_samples, out_dir.
struct ExperimentConfig {
  gan::TrainConfig train;
  bool noisy = true;
  std::size_t grid_nx = 256;
  std::size_t grid_nt = 100;
  std::size_t n_samples = 2000;
  std::string out_dir = "out";

  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

// Empty or whitespace-only text yields the defaults. Unknown keys, malformed
// syntax, and out-of-range values throw with the offending key in the
// message.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config(const std::string& path);

// Full key set, round-trips through parse_config_text exactly.
std::string config_to_json(const ExperimentConfig& cfg);

struct SweepConfig {
  eval::SweepSpec spec;
  std::string study;  // set when a built-in study was named
  std::string out_dir = "out";
};

// Frozen hyperparameter-study grids. All use the noise-free benchmark setup
// (N_u=150, N_r=10000, generator 4x50, discriminator 3x50):
//   seeds15 - 15 repetitions, one seed axis
//   nu_nr   - n_u in {60,90,150} x n_r in {10,100,250,500,1000,5000,10000}
//   arch    - depth in {2,3,4} x width in {20,50,100}
//   kg_kd   - k_g in {1,2,5} x k_d in {1,2,5}
eval::SweepSpec built_in_study(const std::string& name);

// Schema: either "study" or "axes" (array of {name, values}), plus
// trials_per_cell, master_seed, jobs, noisy, test_points, summary_samples,
// out_dir, and any TrainConfig key as a base override.
SweepConfig parse_sweep_config_text(const std::string& text);
SweepConfig parse_sweep_config(const std::string& path);

// Commands return a process exit status: 0 success, 1 training divergence,
// 2 any other failure. They write files under the respective out_dir and
// print the paths they wrote.

// Writes config.json (resolved echo), dataset.csv, history.csv,
// checkpoint.json.
int cmd_train(const ExperimentConfig& cfg);

// Writes summary.csv (x,t,mean,variance) on the config grid and report.json
// with the relative L2 error against the closed-form solution and
// shock-localization checks at t = 0.25, 0.5, 0.75.
int cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path);

// Writes sweep.csv, sweep_summary.json, and sweep_heatmap.svg when the sweep
// has exactly two axes.
int cmd_sweep(const SweepConfig& cfg);

// Reads a summary.csv (and optionally the matching dataset.csv for training
// point markers) and writes mean_heatmap.svg, variance_heatmap.svg,
// slices.svg, profile.svg.
int cmd_plot(const std::string& summary_path, const std::string& dataset_path,
             const std::string& out_dir);

}  // namespace pigan::cli
