#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pigan/data.hpp"
#include "pigan/gan.hpp"
#include "pigan/physics.hpp"

namespace pigan::eval {

// Monte Carlo moments of the generator output over z ~ Normal(0,1), one
// mean/variance pair per grid point. Variance is the population variance
// (divides by n_samples), so a single sample reports exactly zero.
struct PosteriorSummary {
  physics::PointBatch grid;
  std::vector<double> mean;
  std::vector<double> variance;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

// Deterministic given seed; the z stream is derived from it and consumed in
// sample-major order, so results do not depend on grid chunking.
PosteriorSummary posterior_summary(const gan::ModelTriplet& model,
                                   const physics::PointBatch& grid,
                                   std::size_t n_samples = 2000,
                                   std::uint64_t seed = 0);

// ||predicted - exact||_2 / ||exact||_2. Throws std::domain_error when the
// exact field has zero norm.
double relative_l2_error(std::span<const double> predicted,
                         std::span<const double> exact);

// Shock-localization report for one time slice of a summary.
struct ProfileReport {
  double t = 0.0;           // grid slice actually used (nearest to request)
  double x_star = 0.0;      // x of the variance maximum on the slice
  double max_variance = 0.0;
  double center_variance = 0.0;  // at the x closest to 0
  double edge_variance = 0.0;    // mean over the x closest to +0.75 and -0.75
  double ratio = 0.0;            // center_variance / edge_variance
  bool passes = false;           // |x_star| <= 0.1 and ratio > 1
};

// Picks the grid slice nearest the requested t; throws std::domain_error when
// no slice lies within 0.05 of it.
ProfileReport uncertainty_profile_check(const PosteriorSummary& summary,
                                        double t);

// One sweep dimension. Recognized names: seed, n_u, n_r, width, depth, k_g,
// k_d. A seed axis only enumerates repetitions (training seeds are always
// derived from master_seed, cell and trial index); the other axes override
// the corresponding base-config fields. A depth axis sets the generator and
// encoder to that many hidden layers and the discriminator to one fewer
// (floor 1), matching the architecture-study convention.
struct SweepAxis {
  std::string name;
  std::vector<std::int64_t> values;
};

struct SweepSpec {
  gan::TrainConfig base;
  bool noisy = false;
  std::vector<SweepAxis> axes;
  std::size_t trials_per_cell = 1;
  std::uint64_t master_seed = 0;
  // Worker threads; 1 runs everything on the calling thread. Per-trial
  // results are independent of the schedule either way.
  std::size_t jobs = 1;
  // Shared random test set scored against the closed-form solution.
  std::size_t test_points = 25600;
  // z-samples for the predictive mean entering the error metric.
  std::size_t summary_samples = 500;

  void validate() const;
};

struct CellTrial {
  std::size_t cell_index = 0;
  std::size_t trial_index = 0;
  std::vector<std::int64_t> axis_values;
  double error = 0.0;
  double runtime_seconds = 0.0;
  // Training blow-up (error recorded as +inf), non-finite error, or
  // error > 10. Flagged trials stay in the result but leave the summary
  // statistics.
  bool diverged = false;
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::size_t trials_per_cell = 1;
  std::vector<CellTrial> trials;  // ordered by (cell_index, trial_index)
};

// Cells enumerate the Cartesian product of the axes, last axis fastest.
std::size_t cell_count(const SweepSpec& spec);
std::vector<std::int64_t> cell_values(const SweepSpec& spec,
                                      std::size_t cell_index);
gan::TrainConfig cell_config(const SweepSpec& spec,
                             std::span<const std::int64_t> values);

// Builds a dataset, trains, and scores every (cell, trial) pair. The trial
// seed is derive(derive(master_seed, kSweepCell, cell), trial); datasets and
// model initializations branch off it, so cells are fully independent.
// Divergence is recorded, never rethrown.
SweepResult run_sweep(const SweepSpec& spec);

// Long format: one row per trial with the axis values followed by
// error, runtime_seconds, diverged (0/1).
std::string sweep_to_csv(const SweepResult& result);

// Per-cell and overall mean/std (population) over non-flagged trials; cells
// with no surviving trial report null statistics. Runtime is excluded so the
// report is byte-stable across reruns.
std::string sweep_summary_json(const SweepResult& result);

}  // namespace pigan::eval
