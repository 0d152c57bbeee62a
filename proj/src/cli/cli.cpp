#include "pigan/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "pigan/check.hpp"
#include "pigan/checkpoint.hpp"
#include "pigan/data.hpp"
#include "pigan/io.hpp"
#include "pigan/json_io.hpp"
#include "pigan/physics.hpp"
#include "pigan/svg.hpp"

namespace pigan::cli {

using nlohmann::json;

void ExperimentConfig::validate() const {
  train.validate();
  PIGAN_CHECK(grid_nx >= 2 && grid_nt >= 2,
              "evaluation grid needs at least 2 points per axis");
  PIGAN_CHECK(n_samples >= 1, "n_samples must be at least 1");
  PIGAN_CHECK(!out_dir.empty(), "out_dir must not be empty");
}

namespace {

// get<T> with the key name attached to any type error.
template <typename T>
void take_key(const json& j, const char* key, T& out, const char* where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("key '") + key + "' in " + where +
                                ": " + e.what());
  }
}

std::string lab(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return cfg;
  const json j = json::parse(text);
  if (!j.is_object()) {
    throw std::invalid_argument("experiment config must be a JSON object");
  }
  json train_part = json::object();
  for (const auto& [key, value] : j.items()) {
    if (jsonio::is_train_config_key(key)) {
      train_part[key] = value;
    } else if (key != "noisy" && key != "grid_nx" && key != "grid_nt" &&
               key != "n_samples" && key != "out_dir") {
      throw std::invalid_argument("unknown key '" + key +
                                  "' in experiment config");
    }
  }
  take_key(j, "noisy", cfg.noisy, "experiment config");
  take_key(j, "grid_nx", cfg.grid_nx, "experiment config");
  take_key(j, "grid_nt", cfg.grid_nt, "experiment config");
  take_key(j, "n_samples", cfg.n_samples, "experiment config");
  take_key(j, "out_dir", cfg.out_dir, "experiment config");
  cfg.train = jsonio::train_config_from_json(train_part, cfg.train);
  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
  try {
    return parse_config_text(io::read_file(path));
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j = jsonio::train_config_to_json(cfg.train);
  j["noisy"] = cfg.noisy;
  j["grid_nx"] = cfg.grid_nx;
  j["grid_nt"] = cfg.grid_nt;
  j["n_samples"] = cfg.n_samples;
  j["out_dir"] = cfg.out_dir;
  return j.dump(2) + "\n";
}

namespace {

// Noise-free benchmark setup shared by the hyperparameter studies: the
// architecture study fixes the discriminator one layer shallower than the
// generator, and the observation budget at 150.
gan::TrainConfig study_base() {
  gan::TrainConfig cfg;
  cfg.n_u = 150;
  cfg.discriminator_spec.hidden_layers = 3;
  return cfg;
}

}  // namespace

eval::SweepSpec built_in_study(const std::string& name) {
  eval::SweepSpec spec;
  spec.base = study_base();
  spec.noisy = false;
  if (name == "seeds15") {
    eval::SweepAxis seeds{"seed", {}};
    for (std::int64_t s = 0; s < 15; ++s) seeds.values.push_back(s);
    spec.axes = {seeds};
  } else if (name == "nu_nr") {
    spec.axes = {{"n_u", {60, 90, 150}},
                 {"n_r", {10, 100, 250, 500, 1000, 5000, 10000}}};
  } else if (name == "arch") {
    spec.axes = {{"depth", {2, 3, 4}}, {"width", {20, 50, 100}}};
  } else if (name == "kg_kd") {
    spec.axes = {{"k_g", {1, 2, 5}}, {"k_d", {1, 2, 5}}};
  } else {
    throw std::invalid_argument(
        "unknown study '" + name +
        "' (built-ins: seeds15, nu_nr, arch, kg_kd)");
  }
  return spec;
}

SweepConfig parse_sweep_config_text(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) {
    throw std::invalid_argument("sweep config must be a JSON object");
  }

  SweepConfig out;
  json train_part = json::object();
  for (const auto& [key, value] : j.items()) {
    if (jsonio::is_train_config_key(key)) {
      train_part[key] = value;
    } else if (key != "study" && key != "axes" && key != "trials_per_cell" &&
               key != "master_seed" && key != "jobs" && key != "noisy" &&
               key != "test_points" && key != "summary_samples" &&
               key != "out_dir") {
      throw std::invalid_argument("unknown key '" + key + "' in sweep config");
    }
  }

  const bool has_study = j.contains("study");
  const bool has_axes = j.contains("axes");
  if (has_study && has_axes) {
    throw std::invalid_argument("'study' and 'axes' are mutually exclusive");
  }
  if (!has_study && !has_axes) {
    throw std::invalid_argument("sweep config needs 'study' or 'axes'");
  }

  if (has_study) {
    take_key(j, "study", out.study, "sweep config");
    out.spec = built_in_study(out.study);
  } else {
    out.spec.base = study_base();
    out.spec.noisy = false;
    const json& axes = j.at("axes");
    if (!axes.is_array() || axes.empty()) {
      throw std::invalid_argument("key 'axes' must be a non-empty array");
    }
    for (const json& a : axes) {
      for (const auto& [key, value] : a.items()) {
        (void)value;
        if (key != "name" && key != "values") {
          throw std::invalid_argument("unknown key '" + key +
                                      "' in sweep axis");
        }
      }
      eval::SweepAxis axis;
      take_key(a, "name", axis.name, "sweep axis");
      take_key(a, "values", axis.values, "sweep axis");
      out.spec.axes.push_back(axis);
    }
  }

  out.spec.base = jsonio::train_config_from_json(train_part, out.spec.base);
  take_key(j, "trials_per_cell", out.spec.trials_per_cell, "sweep config");
  take_key(j, "master_seed", out.spec.master_seed, "sweep config");
  take_key(j, "jobs", out.spec.jobs, "sweep config");
  take_key(j, "noisy", out.spec.noisy, "sweep config");
  take_key(j, "test_points", out.spec.test_points, "sweep config");
  take_key(j, "summary_samples", out.spec.summary_samples, "sweep config");
  take_key(j, "out_dir", out.out_dir, "sweep config");
  out.spec.validate();
  return out;
}

SweepConfig parse_sweep_config(const std::string& path) {
  try {
    return parse_sweep_config_text(io::read_file(path));
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

std::string summary_to_csv(const eval::PosteriorSummary& s) {
  std::string out = "x,t,mean,variance\n";
  for (std::size_t i = 0; i < s.grid.x.size(); ++i) {
    out += io::format_double(s.grid.x[i]);
    out += ',';
    out += io::format_double(s.grid.t[i]);
    out += ',';
    out += io::format_double(s.mean[i]);
    out += ',';
    out += io::format_double(s.variance[i]);
    out += '\n';
  }
  return out;
}

eval::PosteriorSummary parse_summary_csv(const std::string& text) {
  const std::vector<std::string> lines = [&] {
    std::vector<std::string> raw = io::split(text, '\n');
    while (!raw.empty() && raw.back().empty()) raw.pop_back();
    return raw;
  }();
  PIGAN_CHECK(!lines.empty(), "summary CSV is empty");

  const std::vector<std::string> header = io::split(lines[0], ',');
  std::size_t col[4];
  const char* const names[4] = {"x", "t", "mean", "variance"};
  for (int k = 0; k < 4; ++k) {
    const auto it = std::find(header.begin(), header.end(), names[k]);
    if (it == header.end()) {
      throw std::invalid_argument(std::string("summary CSV missing column '") +
                                  names[k] + "'");
    }
    col[k] = static_cast<std::size_t>(it - header.begin());
  }
  for (const std::string& h : header) {
    if (h != "x" && h != "t" && h != "mean" && h != "variance") {
      throw std::invalid_argument("unknown column '" + h + "' in summary CSV");
    }
  }

  eval::PosteriorSummary s;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = io::split(lines[i], ',');
    if (f.size() != header.size()) {
      throw std::invalid_argument("summary CSV line " + std::to_string(i + 1) +
                                  " has " + std::to_string(f.size()) +
                                  " fields");
    }
    s.grid.x.push_back(io::parse_double(f[col[0]]));
    s.grid.t.push_back(io::parse_double(f[col[1]]));
    s.mean.push_back(io::parse_double(f[col[2]]));
    s.variance.push_back(io::parse_double(f[col[3]]));
  }
  PIGAN_CHECK(!s.grid.x.empty(), "summary CSV has no data rows");
  return s;
}

std::vector<double> sorted_unique(const std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

std::size_t rank_of(const std::vector<double>& sorted, double v) {
  return static_cast<std::size_t>(
      std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

// Pixel frame with a mathematical (y up) value axis.
struct Frame {
  double x0, y0, w, h;
  double xmin, xmax, ymin, ymax;

  double px(double x) const {
    return x0 + (x - xmin) / (xmax - xmin) * w;
  }
  double py(double y) const {
    return y0 + h - (y - ymin) / (ymax - ymin) * h;
  }
};

void frame_axes(svg::Document& doc, const Frame& f, const std::string& xlabel,
                const std::string& ylabel) {
  doc.line(f.x0, f.y0 + f.h, f.x0 + f.w, f.y0 + f.h, "#000000", 1.0);
  doc.line(f.x0, f.y0, f.x0, f.y0 + f.h, "#000000", 1.0);
  doc.text(f.x0, f.y0 + f.h + 16, lab(f.xmin), 11);
  doc.text(f.x0 + f.w, f.y0 + f.h + 16, lab(f.xmax), 11, "end");
  doc.text(f.x0 - 4, f.y0 + f.h, lab(f.ymin), 11, "end");
  doc.text(f.x0 - 4, f.y0 + 10, lab(f.ymax), 11, "end");
  doc.text(f.x0 + f.w / 2, f.y0 + f.h + 30, xlabel, 12, "middle");
  doc.text(f.x0 - 30, f.y0 + f.h / 2, ylabel, 12, "middle");
}

// Field heatmap over the summary grid; optional training-point markers.
std::string field_heatmap(const eval::PosteriorSummary& s,
                          const std::vector<double>& field,
                          const std::string& title,
                          const data::Dataset* markers) {
  const std::vector<double> xs = sorted_unique(s.grid.x);
  const std::vector<double> ts = sorted_unique(s.grid.t);
  const Frame f{56, 34, 480, 320, xs.front(), xs.back(), ts.front(),
                ts.back()};
  svg::Document doc(660, 404);
  doc.rect(0, 0, 660, 404, "#ffffff");
  doc.text(f.x0 + f.w / 2, 20, title, 13, "middle");

  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (const double v : field) {
    if (!std::isfinite(v)) continue;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  const bool flat = !(vmax > vmin);
  const double cw = f.w / static_cast<double>(xs.size());
  const double ch = f.h / static_cast<double>(ts.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double u =
        flat ? 0.5 : (field[i] - vmin) / (vmax - vmin);
    const std::size_t cx = rank_of(xs, s.grid.x[i]);
    const std::size_t cy = rank_of(ts, s.grid.t[i]);
    // +0.5px overlap hides antialiasing seams between cells.
    doc.rect(f.x0 + cw * static_cast<double>(cx),
             f.y0 + f.h - ch * static_cast<double>(cy + 1), cw + 0.5,
             ch + 0.5, svg::heat_color(std::isfinite(field[i]) ? u : field[i]));
  }
  if (markers != nullptr) {
    for (const data::DataPoint& p : markers->data_points) {
      doc.circle(f.px(p.x), f.py(p.t), 2.0, "#ffffff");
    }
  }
  frame_axes(doc, f, "x", "t");

  // Color bar.
  const double bx = f.x0 + f.w + 18;
  for (int k = 0; k < 64; ++k) {
    doc.rect(bx, f.y0 + f.h - (k + 1) * f.h / 64.0, 14, f.h / 64.0 + 0.5,
             svg::heat_color((k + 0.5) / 64.0));
  }
  doc.text(bx + 18, f.y0 + f.h, lab(vmin), 11);
  doc.text(bx + 18, f.y0 + 10, lab(vmax), 11);
  return doc.str();
}

void plot_band_slice(svg::Document& doc, const Frame& f,
                     const std::vector<double>& xs,
                     const std::vector<double>& mean,
                     const std::vector<double>& half_width,
                     const std::vector<double>& oracle) {
  std::vector<double> bx, by;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    bx.push_back(f.px(xs[i]));
    by.push_back(f.py(mean[i] + half_width[i]));
  }
  for (std::size_t i = xs.size(); i-- > 0;) {
    bx.push_back(f.px(xs[i]));
    by.push_back(f.py(mean[i] - half_width[i]));
  }
  doc.polygon(bx, by, "#1f77b4", 0.25);

  std::vector<double> px, pm, po;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    px.push_back(f.px(xs[i]));
    pm.push_back(f.py(mean[i]));
    po.push_back(f.py(oracle[i]));
  }
  doc.polyline(px, po, "#000000", 1.2);
  doc.polyline(px, pm, "#1f77b4", 1.5);
}

// Indices of the grid slice whose t is nearest the request, x ascending.
std::vector<std::size_t> slice_indices(const eval::PosteriorSummary& s,
                                       double t_target, double* t_used) {
  double best = s.grid.t[0];
  for (const double tv : s.grid.t) {
    if (std::abs(tv - t_target) < std::abs(best - t_target)) best = tv;
  }
  *t_used = best;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.grid.t.size(); ++i) {
    if (s.grid.t[i] == best) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return s.grid.x[a] < s.grid.x[b];
  });
  return idx;
}

std::string slice_figure(const eval::PosteriorSummary& s) {
  svg::Document doc(780, 300);
  doc.rect(0, 0, 780, 300, "#ffffff");
  const double targets[3] = {0.25, 0.5, 0.75};
  for (int p = 0; p < 3; ++p) {
    double t_used = 0.0;
    const std::vector<std::size_t> idx = slice_indices(s, targets[p], &t_used);
    std::vector<double> xs, mean, half, oracle;
    for (const std::size_t i : idx) {
      xs.push_back(s.grid.x[i]);
      mean.push_back(s.mean[i]);
      half.push_back(2.0 * std::sqrt(std::max(0.0, s.variance[i])));
      oracle.push_back(data::exact_burgers_solution(s.grid.x[i], t_used,
                                                    physics::kBurgersNu));
    }
    double lo = -1.0, hi = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      lo = std::min({lo, mean[i] - half[i], oracle[i]});
      hi = std::max({hi, mean[i] + half[i], oracle[i]});
    }
    const Frame f{46.0 + 250.0 * p, 40, 210, 210,
                  xs.front(), xs.back(), lo - 0.05, hi + 0.05};
    doc.text(f.x0 + f.w / 2, 26, "t = " + lab(t_used), 12, "middle");
    plot_band_slice(doc, f, xs, mean, half, oracle);
    frame_axes(doc, f, "x", p == 0 ? "u" : "");
  }
  return doc.str();
}

std::string profile_figure(const eval::PosteriorSummary& s) {
  svg::Document doc(560, 330);
  doc.rect(0, 0, 560, 330, "#ffffff");
  doc.text(280, 20, "predictive variance by position", 13, "middle");

  double vmax = 0.0;
  const double targets[2] = {0.5, 0.75};
  std::vector<double> xs_all[2], var_all[2];
  double used[2];
  for (int p = 0; p < 2; ++p) {
    const std::vector<std::size_t> idx = slice_indices(s, targets[p], &used[p]);
    for (const std::size_t i : idx) {
      xs_all[p].push_back(s.grid.x[i]);
      var_all[p].push_back(s.variance[i]);
      vmax = std::max(vmax, s.variance[i]);
    }
  }
  if (vmax <= 0.0) vmax = 1.0;
  const Frame f{60, 40, 440, 240, xs_all[0].front(), xs_all[0].back(), 0.0,
                vmax * 1.05};
  const char* const colors[2] = {"#1f77b4", "#ff7f0e"};
  for (int p = 0; p < 2; ++p) {
    std::vector<double> px, pv;
    double x_star = xs_all[p][0];
    double v_star = var_all[p][0];
    for (std::size_t i = 0; i < xs_all[p].size(); ++i) {
      px.push_back(f.px(xs_all[p][i]));
      pv.push_back(f.py(var_all[p][i]));
      if (var_all[p][i] > v_star) {
        v_star = var_all[p][i];
        x_star = xs_all[p][i];
      }
    }
    doc.polyline(px, pv, colors[p], 1.5);
    doc.line(f.px(x_star), f.y0, f.px(x_star), f.y0 + f.h, colors[p], 0.6);
    doc.text(f.x0 + f.w - 4, f.y0 + 14 + 16 * p,
             "t = " + lab(used[p]) + ", peak at x = " + lab(x_star), 11,
             "end");
  }
  frame_axes(doc, f, "x", "var");
  return doc.str();
}

std::string sweep_heatmap(const eval::SweepResult& res) {
  PIGAN_CHECK(res.axes.size() == 2, "heatmap needs exactly two axes");
  const std::size_t rows = res.axes[0].values.size();
  const std::size_t cols = res.axes[1].values.size();

  // Cell means over non-flagged trials; NaN marks empty cells.
  std::vector<double> means(rows * cols,
                            std::numeric_limits<double>::quiet_NaN());
  double lmin = std::numeric_limits<double>::infinity();
  double lmax = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < rows * cols; ++c) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < res.trials_per_cell; ++k) {
      const eval::CellTrial& trial = res.trials[c * res.trials_per_cell + k];
      if (!trial.diverged) {
        sum += trial.error;
        ++n;
      }
    }
    if (n > 0) {
      means[c] = sum / static_cast<double>(n);
      const double l = std::log10(std::max(means[c], 1e-12));
      lmin = std::min(lmin, l);
      lmax = std::max(lmax, l);
    }
  }
  const bool flat = !(lmax > lmin);

  const double cw = 86, ch = 48, x0 = 110, y0 = 58;
  svg::Document doc(x0 + cw * static_cast<double>(cols) + 24,
                    y0 + ch * static_cast<double>(rows) + 30);
  doc.rect(0, 0, x0 + cw * static_cast<double>(cols) + 24,
           y0 + ch * static_cast<double>(rows) + 30, "#ffffff");
  doc.text(x0 + cw * static_cast<double>(cols) / 2, 22,
           "mean relative L2 error", 13, "middle");
  for (std::size_t j = 0; j < cols; ++j) {
    doc.text(x0 + cw * (static_cast<double>(j) + 0.5), y0 - 10,
             res.axes[1].name + "=" + std::to_string(res.axes[1].values[j]),
             11, "middle");
  }
  for (std::size_t i = 0; i < rows; ++i) {
    doc.text(x0 - 8, y0 + ch * (static_cast<double>(i) + 0.6),
             res.axes[0].name + "=" + std::to_string(res.axes[0].values[i]),
             11, "end");
    for (std::size_t j = 0; j < cols; ++j) {
      const double m = means[i * cols + j];
      const double u = std::isfinite(m)
                           ? (flat ? 0.5
                                   : (std::log10(std::max(m, 1e-12)) - lmin) /
                                         (lmax - lmin))
                           : m;
      const double px = x0 + cw * static_cast<double>(j);
      const double py = y0 + ch * static_cast<double>(i);
      doc.rect(px, py, cw - 2, ch - 2, svg::heat_color(u));
      char txt[32];
      if (std::isfinite(m)) {
        std::snprintf(txt, sizeof txt, "%.1e", m);
      } else {
        std::snprintf(txt, sizeof txt, "diverged");
      }
      doc.text(px + (cw - 2) / 2, py + ch / 2 + 4, txt, 11, "middle");
    }
  }
  return doc.str();
}

}  // namespace

int cmd_train(const ExperimentConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  io::write_file(join(cfg.out_dir, "config.json"), config_to_json(cfg));

  const data::ObservationSplit split =
      data::split_observation_budget(cfg.train.n_u);
  const data::Dataset ds = data::build_burgers_dataset(
      split.n_initial, split.n_boundary_per_side, cfg.train.n_r, cfg.noisy,
      cfg.train.seed);
  data::write_dataset_csv(ds, join(cfg.out_dir, "dataset.csv"));

  try {
    const gan::TrainResult res = gan::train(cfg.train, ds);
    io::write_file(join(cfg.out_dir, "history.csv"),
                   gan::history_to_csv(res.history));
    gan::save_checkpoint({res.model, cfg.train, res.final_loss_d,
                          res.final_loss_g, res.final_loss_pde},
                         join(cfg.out_dir, "checkpoint.json"));
  } catch (const gan::TrainingDiverged& e) {
    std::cerr << "training diverged: " << e.what() << "\n";
    return 1;
  }
  std::cout << "train: wrote " << join(cfg.out_dir, "checkpoint.json")
            << ", history.csv, dataset.csv, config.json\n";
  return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& checkpoint_path) {
  const gan::Checkpoint ck = gan::load_checkpoint(checkpoint_path);
  fs::create_directories(cfg.out_dir);

  const physics::PointBatch grid =
      data::evaluation_grid(cfg.grid_nx, cfg.grid_nt);
  const eval::PosteriorSummary summary =
      eval::posterior_summary(ck.model, grid, cfg.n_samples, cfg.train.seed);
  io::write_file(join(cfg.out_dir, "summary.csv"), summary_to_csv(summary));

  const std::vector<double> exact =
      data::exact_burgers_field(grid, physics::kBurgersNu);
  json rep;
  rep["rel_l2_error"] = eval::relative_l2_error(summary.mean, exact);
  rep["grid_nx"] = cfg.grid_nx;
  rep["grid_nt"] = cfg.grid_nt;
  rep["n_samples"] = cfg.n_samples;
  rep["seed"] = cfg.train.seed;
  rep["profile_checks"] = json::array();
  for (const double t : {0.25, 0.5, 0.75}) {
    const eval::ProfileReport pr = eval::uncertainty_profile_check(summary, t);
    rep["profile_checks"].push_back({{"t_requested", t},
                                     {"t_used", pr.t},
                                     {"x_star", pr.x_star},
                                     {"max_variance", pr.max_variance},
                                     {"center_variance", pr.center_variance},
                                     {"edge_variance", pr.edge_variance},
                                     {"ratio", pr.ratio},
                                     {"passes", pr.passes}});
  }
  io::write_file(join(cfg.out_dir, "report.json"), rep.dump(2) + "\n");
  std::cout << "eval: wrote " << join(cfg.out_dir, "summary.csv")
            << ", report.json (rel_l2_error="
            << io::format_double(rep["rel_l2_error"].get<double>()) << ")\n";
  return 0;
}

int cmd_sweep(const SweepConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const eval::SweepResult res = eval::run_sweep(cfg.spec);
  io::write_file(join(cfg.out_dir, "sweep.csv"), eval::sweep_to_csv(res));
  io::write_file(join(cfg.out_dir, "sweep_summary.json"),
                 eval::sweep_summary_json(res));
  std::cout << "sweep: wrote " << join(cfg.out_dir, "sweep.csv")
            << ", sweep_summary.json";
  if (res.axes.size() == 2) {
    io::write_file(join(cfg.out_dir, "sweep_heatmap.svg"), sweep_heatmap(res));
    std::cout << ", sweep_heatmap.svg";
  }
  std::cout << "\n";
  return 0;
}

int cmd_plot(const std::string& summary_path, const std::string& dataset_path,
             const std::string& out_dir) {
  const eval::PosteriorSummary summary =
      parse_summary_csv(io::read_file(summary_path));
  data::Dataset markers;
  const bool have_markers = !dataset_path.empty();
  if (have_markers) {
    markers = data::read_dataset_csv(dataset_path);
  }
  fs::create_directories(out_dir);

  io::write_file(join(out_dir, "mean_heatmap.svg"),
                 field_heatmap(summary, summary.mean, "predictive mean",
                               have_markers ? &markers : nullptr));
  io::write_file(join(out_dir, "variance_heatmap.svg"),
                 field_heatmap(summary, summary.variance,
                               "predictive variance",
                               have_markers ? &markers : nullptr));
  io::write_file(join(out_dir, "slices.svg"), slice_figure(summary));
  io::write_file(join(out_dir, "profile.svg"), profile_figure(summary));

  for (const double t : {0.25, 0.5, 0.75}) {
    double used = 0.0;
    slice_indices(summary, t, &used);
    if (used != t) {
      std::cout << "plot: slice t=" << lab(t) << " uses nearest grid value t="
                << io::format_double(used) << "\n";
    }
  }
  std::cout << "plot: wrote " << join(out_dir, "mean_heatmap.svg")
            << ", variance_heatmap.svg, slices.svg, profile.svg\n";
  return 0;
}

}  // namespace pigan::cli
