#include "pigan/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "pigan/check.hpp"
#include "pigan/io.hpp"
#include "pigan/rng.hpp"

namespace pigan::eval {

PosteriorSummary posterior_summary(const gan::ModelTriplet& model,
                                   const physics::PointBatch& grid,
                                   std::size_t n_samples, std::uint64_t seed) {
  const std::size_t n = grid.x.size();
  PIGAN_CHECK(n >= 1, "posterior summary needs a non-empty grid");
  PIGAN_CHECK(grid.t.size() == n, "grid x/t lengths differ");
  PIGAN_CHECK(n_samples >= 1, "n_samples must be at least 1");

  Matrix x(n, 1, grid.x);
  Matrix t(n, 1, grid.t);
  Matrix z(n, 1);

  PosteriorSummary s;
  s.grid = grid;
  s.n_samples = n_samples;
  s.seed = seed;
  s.mean.assign(n, 0.0);
  s.variance.assign(n, 0.0);

  // Welford accumulation, one full-grid generator pass per sample.
  std::vector<double> m2(n, 0.0);
  Rng rng(Rng::derive(seed, seed_tag::kPosterior));
  for (std::size_t k = 1; k <= n_samples; ++k) {
    for (std::size_t i = 0; i < n; ++i) z.data[i] = rng.normal();
    const Matrix u = gan::generator_sample(model.generator, x, t, z);
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = u.data[i] - s.mean[i];
      s.mean[i] += delta / static_cast<double>(k);
      m2[i] += delta * (u.data[i] - s.mean[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    s.variance[i] = m2[i] / static_cast<double>(n_samples);
  }
  return s;
}

double relative_l2_error(std::span<const double> predicted,
                         std::span<const double> exact) {
  PIGAN_CHECK(predicted.size() == exact.size(),
              "predicted/exact field lengths differ");
  PIGAN_CHECK(!exact.empty(), "relative error of empty fields");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double d = predicted[i] - exact[i];
    num += d * d;
    den += exact[i] * exact[i];
  }
  if (den == 0.0) {
    throw std::domain_error("exact field has zero norm");
  }
  return std::sqrt(num / den);
}

ProfileReport uncertainty_profile_check(const PosteriorSummary& summary,
                                        double t) {
  const std::size_t n = summary.grid.x.size();
  PIGAN_CHECK(n >= 1 && summary.variance.size() == n &&
                  summary.grid.t.size() == n,
              "summary grid/field lengths differ");

  double t_slice = summary.grid.t[0];
  for (const double tv : summary.grid.t) {
    if (std::abs(tv - t) < std::abs(t_slice - t)) t_slice = tv;
  }
  if (!(std::abs(t_slice - t) <= 0.05)) {
    throw std::domain_error("no grid slice within 0.05 of t=" +
                            io::format_double(t));
  }

  ProfileReport rep;
  rep.t = t_slice;
  double best_center = std::numeric_limits<double>::infinity();
  double best_lo = std::numeric_limits<double>::infinity();
  double best_hi = std::numeric_limits<double>::infinity();
  double var_lo = 0.0, var_hi = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (summary.grid.t[i] != t_slice) continue;
    const double xv = summary.grid.x[i];
    const double var = summary.variance[i];
    if (first || var > rep.max_variance) {
      rep.max_variance = var;
      rep.x_star = xv;
    }
    if (std::abs(xv) < best_center) {
      best_center = std::abs(xv);
      rep.center_variance = var;
    }
    if (std::abs(xv - 0.75) < best_hi) {
      best_hi = std::abs(xv - 0.75);
      var_hi = var;
    }
    if (std::abs(xv + 0.75) < best_lo) {
      best_lo = std::abs(xv + 0.75);
      var_lo = var;
    }
    first = false;
  }
  rep.edge_variance = 0.5 * (var_lo + var_hi);
  rep.ratio = rep.center_variance / rep.edge_variance;
  rep.passes = std::abs(rep.x_star) <= 0.1 && rep.ratio > 1.0;
  return rep;
}

namespace {

constexpr const char* kAxisNames[] = {"seed", "n_u",  "n_r", "width",
                                      "depth", "k_g", "k_d"};

bool known_axis(const std::string& name) {
  for (const char* a : kAxisNames) {
    if (name == a) return true;
  }
  return false;
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  PIGAN_CHECK(!axes.empty(), "sweep needs at least one axis");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    PIGAN_CHECK(known_axis(axes[i].name),
                "unknown sweep axis '" + axes[i].name + "'");
    PIGAN_CHECK(!axes[i].values.empty(),
                "sweep axis '" + axes[i].name + "' has no values");
    for (const std::int64_t v : axes[i].values) {
      const std::int64_t lo = axes[i].name == "seed" ? 0 : 1;
      PIGAN_CHECK(v >= lo, "sweep axis '" + axes[i].name +
                               "' value out of range: " + std::to_string(v));
    }
    for (std::size_t j = 0; j < i; ++j) {
      PIGAN_CHECK(axes[j].name != axes[i].name,
                  "duplicate sweep axis '" + axes[i].name + "'");
    }
  }
  PIGAN_CHECK(trials_per_cell >= 1, "trials_per_cell must be at least 1");
  PIGAN_CHECK(jobs >= 1, "jobs must be at least 1");
  PIGAN_CHECK(test_points >= 1, "test_points must be at least 1");
  PIGAN_CHECK(summary_samples >= 1, "summary_samples must be at least 1");
}

std::size_t cell_count(const SweepSpec& spec) {
  std::size_t n = 1;
  for (const SweepAxis& axis : spec.axes) n *= axis.values.size();
  return n;
}

std::vector<std::int64_t> cell_values(const SweepSpec& spec,
                                      std::size_t cell_index) {
  PIGAN_CHECK(cell_index < cell_count(spec), "cell index out of range");
  std::vector<std::int64_t> vals(spec.axes.size());
  std::size_t rest = cell_index;
  for (std::size_t i = spec.axes.size(); i-- > 0;) {
    const std::size_t m = spec.axes[i].values.size();
    vals[i] = spec.axes[i].values[rest % m];
    rest /= m;
  }
  return vals;
}

gan::TrainConfig cell_config(const SweepSpec& spec,
                             std::span<const std::int64_t> values) {
  PIGAN_CHECK(values.size() == spec.axes.size(),
              "axis value count differs from axis count");
  gan::TrainConfig cfg = spec.base;
  for (std::size_t i = 0; i < spec.axes.size(); ++i) {
    const std::string& name = spec.axes[i].name;
    const auto v = static_cast<std::size_t>(values[i]);
    if (name == "seed") {
      // Repetition label; trial seeds come from the derivation chain.
    } else if (name == "n_u") {
      cfg.n_u = v;
    } else if (name == "n_r") {
      cfg.n_r = v;
    } else if (name == "width") {
      cfg.generator_spec.hidden_width = v;
      cfg.encoder_spec.hidden_width = v;
      cfg.discriminator_spec.hidden_width = v;
    } else if (name == "depth") {
      cfg.generator_spec.hidden_layers = v;
      cfg.encoder_spec.hidden_layers = v;
      cfg.discriminator_spec.hidden_layers = v >= 2 ? v - 1 : 1;
    } else if (name == "k_g") {
      cfg.k_g = v;
    } else if (name == "k_d") {
      cfg.k_d = v;
    } else {
      PIGAN_CHECK(false, "unknown sweep axis '" + name + "'");
    }
  }
  return cfg;
}

namespace {

CellTrial run_trial(const SweepSpec& spec, std::size_t cell, std::size_t trial,
                    const physics::PointBatch& test_set,
                    const std::vector<double>& exact_field) {
  CellTrial out;
  out.cell_index = cell;
  out.trial_index = trial;
  out.axis_values = cell_values(spec, cell);

  gan::TrainConfig cfg = cell_config(spec, out.axis_values);
  const std::uint64_t cell_master =
      Rng::derive(spec.master_seed, seed_tag::kSweepCell, cell);
  cfg.seed = Rng::derive(cell_master, trial);

  const data::ObservationSplit split = data::split_observation_budget(cfg.n_u);
  const auto start = std::chrono::steady_clock::now();
  try {
    const data::Dataset ds = data::build_burgers_dataset(
        split.n_initial, split.n_boundary_per_side, cfg.n_r, spec.noisy,
        cfg.seed);
    const gan::TrainResult res = gan::train(cfg, ds);
    const PosteriorSummary summary = posterior_summary(
        res.model, test_set, spec.summary_samples, cfg.seed);
    out.error = relative_l2_error(summary.mean, exact_field);
  } catch (const gan::TrainingDiverged&) {
    out.error = std::numeric_limits<double>::infinity();
  }
  const auto end = std::chrono::steady_clock::now();
  out.runtime_seconds = std::chrono::duration<double>(end - start).count();
  out.diverged = !std::isfinite(out.error) || out.error > 10.0;
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const physics::PointBatch test_set =
      data::random_test_points(spec.test_points, data::kTestPointSeed);
  const std::vector<double> exact_field =
      data::exact_burgers_field(test_set, physics::kBurgersNu);

  SweepResult res;
  res.axes = spec.axes;
  res.trials_per_cell = spec.trials_per_cell;
  const std::size_t total = cell_count(spec) * spec.trials_per_cell;
  res.trials.resize(total);

  const auto run_flat = [&](std::size_t k) {
    res.trials[k] = run_trial(spec, k / spec.trials_per_cell,
                              k % spec.trials_per_cell, test_set, exact_field);
  };

  const std::size_t workers = std::min(spec.jobs, total);
  if (workers <= 1) {
    for (std::size_t k = 0; k < total; ++k) run_flat(k);
    return res;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::exception_ptr failure;
  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total || stop.load()) return;
      try {
        run_flat(k);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return res;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out;
  for (const SweepAxis& axis : result.axes) {
    out += axis.name;
    out += ',';
  }
  out += "error,runtime_seconds,diverged\n";
  for (const CellTrial& trial : result.trials) {
    for (const std::int64_t v : trial.axis_values) {
      out += std::to_string(v);
      out += ',';
    }
    out += io::format_double(trial.error);
    out += ',';
    out += io::format_double(trial.runtime_seconds);
    out += trial.diverged ? ",1\n" : ",0\n";
  }
  return out;
}

std::string sweep_summary_json(const SweepResult& result) {
  nlohmann::json j;
  j["axes"] = nlohmann::json::array();
  for (const SweepAxis& axis : result.axes) {
    j["axes"].push_back({{"name", axis.name}, {"values", axis.values}});
  }
  j["trials_per_cell"] = result.trials_per_cell;

  const auto stats = [](const std::vector<double>& v) {
    nlohmann::json s;
    if (v.empty()) {
      s["mean_error"] = nullptr;
      s["std_error"] = nullptr;
      return s;
    }
    double m = 0.0;
    for (const double e : v) m += e;
    m /= static_cast<double>(v.size());
    double sq = 0.0;
    for (const double e : v) sq += (e - m) * (e - m);
    s["mean_error"] = m;
    s["std_error"] = std::sqrt(sq / static_cast<double>(v.size()));
    return s;
  };

  nlohmann::json cells = nlohmann::json::array();
  std::vector<double> all_ok;
  std::size_t all_diverged = 0;
  for (std::size_t c = 0; c * result.trials_per_cell < result.trials.size();
       ++c) {
    std::vector<double> ok;
    std::size_t diverged = 0;
    for (std::size_t i = 0; i < result.trials_per_cell; ++i) {
      const CellTrial& trial = result.trials[c * result.trials_per_cell + i];
      if (trial.diverged) {
        ++diverged;
      } else {
        ok.push_back(trial.error);
        all_ok.push_back(trial.error);
      }
    }
    all_diverged += diverged;
    nlohmann::json cell = stats(ok);
    cell["axis_values"] =
        result.trials[c * result.trials_per_cell].axis_values;
    cell["n_trials"] = result.trials_per_cell;
    cell["n_diverged"] = diverged;
    cells.push_back(cell);
  }
  j["cells"] = cells;
  j["overall"] = stats(all_ok);
  j["overall"]["n_trials"] = result.trials.size();
  j["overall"]["n_diverged"] = all_diverged;
  return j.dump(2) + "\n";
}

}  // namespace pigan::eval
