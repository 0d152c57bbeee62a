#include "pigan/gan.hpp"

#include <cmath>
#include <string>

#include "pigan/check.hpp"
#include "pigan/io.hpp"
#include "pigan/physics.hpp"
#include "pigan/rng.hpp"

namespace pigan::gan {

void TrainConfig::validate() const {
  PIGAN_CHECK(learning_rate > 0.0, "learning_rate must be positive");
  PIGAN_CHECK(adam_beta1 >= 0.0 && adam_beta1 < 1.0, "adam_beta1 outside [0,1)");
  PIGAN_CHECK(adam_beta2 >= 0.0 && adam_beta2 < 1.0, "adam_beta2 outside [0,1)");
  PIGAN_CHECK(adam_eps > 0.0, "adam_eps must be positive");
  PIGAN_CHECK(k_g >= 1, "k_g must be at least 1");
  PIGAN_CHECK(k_d >= 1, "k_d must be at least 1");
  PIGAN_CHECK(n_u >= 1, "n_u must be at least 1");
  PIGAN_CHECK(collocation_batch >= 1, "collocation_batch must be at least 1");
  PIGAN_CHECK(log_every >= 1, "log_every must be at least 1");
  generator_spec.validate();
  encoder_spec.validate();
  discriminator_spec.validate();
  PIGAN_CHECK(generator_spec.input_dim == 3 && generator_spec.output_dim == 1,
              "generator must map (x,t,z) to u");
  PIGAN_CHECK(encoder_spec.input_dim == 3 && encoder_spec.output_dim == 2,
              "encoder must map (x,t,u) to (mu, log sigma)");
  PIGAN_CHECK(
      discriminator_spec.input_dim == 3 && discriminator_spec.output_dim == 1,
      "discriminator must map (x,t,u) to a logit");
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, const TrainConfig& cfg) {
  PIGAN_CHECK(state.m.size() == params.size() &&
                  state.v.size() == params.size() &&
                  grads.size() == params.size(),
              "adam: state/param/grad lengths differ");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw TrainingDiverged(
          "non-finite gradient at coordinate " + std::to_string(i) +
              " (adam step " + std::to_string(state.step + 1) + ")",
          state.step + 1);
    }
  }
  state.step += 1;
  const double c1 =
      1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
  const double c2 =
      1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * g;
    state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.adam_eps);
  }
}

ad::Value generator_sample(ad::Tape& tape, const nn::StagedParams& gen,
                           ad::Value x, ad::Value t, ad::Value z) {
  const ad::Value in = tape.concat_cols(tape.concat_cols(x, t), z);
  return nn::forward(tape, gen, in);
}

Matrix generator_sample(const nn::NetworkParams& gen, const Matrix& x,
                        const Matrix& t, const Matrix& z) {
  PIGAN_CHECK(x.cols == 1 && t.cols == 1 && z.cols == 1,
              "generator inputs must be column vectors");
  PIGAN_CHECK(x.rows == t.rows && x.rows == z.rows,
              "generator input lengths differ");
  Matrix in(x.rows, 3);
  for (std::size_t i = 0; i < x.rows; ++i) {
    in.at(i, 0) = x.data[i];
    in.at(i, 1) = t.data[i];
    in.at(i, 2) = z.data[i];
  }
  Matrix out;
  nn::forward_eval(gen, in, out);
  return out;
}

Matrix encoder_moments(const nn::NetworkParams& enc, const Matrix& x,
                       const Matrix& t, const Matrix& u) {
  PIGAN_CHECK(x.rows == t.rows && x.rows == u.rows,
              "encoder input lengths differ");
  Matrix in(x.rows, 3);
  for (std::size_t i = 0; i < x.rows; ++i) {
    in.at(i, 0) = x.data[i];
    in.at(i, 1) = t.data[i];
    in.at(i, 2) = u.data[i];
  }
  Matrix out;
  nn::forward_eval(enc, in, out);
  return out;
}

ad::Value discriminator_logit(ad::Tape& tape, const nn::StagedParams& disc,
                              ad::Value x, ad::Value t, ad::Value u) {
  const ad::Value in = tape.concat_cols(tape.concat_cols(x, t), u);
  return nn::forward(tape, disc, in);
}

ad::Value encoder_log_density(ad::Tape& tape, const nn::StagedParams& enc,
                              ad::Value x, ad::Value t, ad::Value u,
                              ad::Value z) {
  const ad::Value in = tape.concat_cols(tape.concat_cols(x, t), u);
  const ad::Value out = nn::forward(tape, enc, in);
  // Column picks via constant selectors; matmul carries the adjoints.
  const ad::Value pick_mu = tape.leaf(Matrix(2, 1, {1.0, 0.0}));
  const ad::Value pick_ls = tape.leaf(Matrix(2, 1, {0.0, 1.0}));
  const ad::Value mu = tape.matmul(out, pick_mu);
  const ad::Value log_sigma = tape.clamp(tape.matmul(out, pick_ls), -10.0, 10.0);
  const ad::Value sigma = ad::exp(log_sigma);
  constexpr double kHalfLogTwoPi = 0.91893853320467274178;
  const ad::Value resid = ad::square(z - mu) / (2.0 * ad::square(sigma));
  return (0.0 - kHalfLogTwoPi) - log_sigma - resid;
}

ad::Value discriminator_loss(ad::Tape& tape, const nn::StagedParams& disc,
                             const nn::StagedParams& gen, const Matrix& fake_x,
                             const Matrix& fake_t, const Matrix& fake_z,
                             const Matrix& real_x, const Matrix& real_t,
                             const Matrix& real_u) {
  PIGAN_CHECK(fake_x.rows >= 1 && real_x.rows >= 1,
              "discriminator loss needs non-empty fake and real batches");
  const ad::Value fx = tape.leaf(fake_x);
  const ad::Value ft = tape.leaf(fake_t);
  const ad::Value fz = tape.leaf(fake_z);
  const ad::Value fu = generator_sample(tape, gen, fx, ft, fz);
  const ad::Value t_fake = discriminator_logit(tape, disc, fx, ft, fu);

  const ad::Value rx = tape.leaf(real_x);
  const ad::Value rt = tape.leaf(real_t);
  const ad::Value ru = tape.leaf(real_u);
  const ad::Value t_real = discriminator_logit(tape, disc, rx, rt, ru);

  // log(1 - sigmoid(s)) = log_sigmoid(-s)
  return ad::mean(ad::log_sigmoid(t_fake)) +
         ad::mean(ad::log_sigmoid(-t_real));
}

ad::Value cycle_log_density(ad::Tape& tape, const nn::StagedParams& enc,
                            ad::Value x, ad::Value t, ad::Value u,
                            ad::Value z) {
  const ad::Value in = tape.concat_cols(tape.concat_cols(x, t), u);
  const ad::Value out = nn::forward(tape, enc, in);
  const ad::Value pick_mu = tape.leaf(Matrix(2, 1, {1.0, 0.0}));
  const ad::Value mu = tape.matmul(out, pick_mu);
  constexpr double kHalfLogTwoPi = 0.91893853320467274178;
  return (0.0 - kHalfLogTwoPi) - ad::square(z - mu) / 2.0;
}

ad::Value generator_loss(ad::Tape& tape, const nn::StagedParams& gen,
                         const nn::StagedParams& enc,
                         const nn::StagedParams& disc, const Matrix& x,
                         const Matrix& t, const Matrix& z, double lambda) {
  PIGAN_CHECK(x.rows >= 1, "generator loss needs a non-empty batch");
  const ad::Value xv = tape.leaf(x);
  const ad::Value tv = tape.leaf(t);
  const ad::Value zv = tape.leaf(z);
  const ad::Value u = generator_sample(tape, gen, xv, tv, zv);
  const ad::Value logit = discriminator_logit(tape, disc, xv, tv, u);
  const ad::Value logq = cycle_log_density(tape, enc, xv, tv, u, zv);
  return ad::mean(logit) + (1.0 - lambda) * ad::mean(logq);
}

namespace {

struct Batcher {
  const data::Dataset* ds;
  const TrainConfig* cfg;
  Rng* rng;
  Matrix real_x, real_t, real_u;

  Batcher(const data::Dataset& dataset, const TrainConfig& config, Rng& r)
      : ds(&dataset), cfg(&config), rng(&r) {
    const std::size_t n = dataset.data_points.size();
    real_x = Matrix(n, 1);
    real_t = Matrix(n, 1);
    real_u = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      real_x.data[i] = dataset.data_points[i].x;
      real_t.data[i] = dataset.data_points[i].t;
      real_u.data[i] = dataset.data_points[i].u;
    }
  }

  std::size_t data_batch_size() const {
    const std::size_t n = ds->data_points.size();
    return (cfg->data_batch == 0 || cfg->data_batch >= n) ? n
                                                          : cfg->data_batch;
  }

  // (x,t) drawn uniformly from the training-input locations.
  void draw_fake(Matrix& x, Matrix& t) {
    const std::size_t n = data_batch_size();
    x = Matrix(n, 1);
    t = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = rng->below(ds->data_points.size());
      x.data[i] = ds->data_points[j].x;
      t.data[i] = ds->data_points[j].t;
    }
  }

  void draw_real(Matrix& x, Matrix& t, Matrix& u) {
    const std::size_t n = ds->data_points.size();
    if (data_batch_size() == n) {
      x = real_x;
      t = real_t;
      u = real_u;
      return;
    }
    const std::size_t m = data_batch_size();
    x = Matrix(m, 1);
    t = Matrix(m, 1);
    u = Matrix(m, 1);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = rng->below(n);
      x.data[i] = real_x.data[j];
      t.data[i] = real_t.data[j];
      u.data[i] = real_u.data[j];
    }
  }

  Matrix draw_normal(std::size_t n) {
    Matrix z(n, 1);
    for (std::size_t i = 0; i < n; ++i) z.data[i] = rng->normal();
    return z;
  }

  void draw_collocation(Matrix& x, Matrix& t) {
    const std::size_t m = cfg->collocation_batch;
    x = Matrix(m, 1);
    t = Matrix(m, 1);
    if (cfg->resample_collocation) {
      const physics::PointBatch b =
          physics::sample_collocation(m, ds->domain, rng->next_u64());
      for (std::size_t i = 0; i < m; ++i) {
        x.data[i] = b.x[i];
        t.data[i] = b.t[i];
      }
      return;
    }
    const std::size_t pool = ds->collocation.x.size();
    PIGAN_CHECK(pool >= 1, "dataset has no collocation pool");
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = rng->below(pool);
      x.data[i] = ds->collocation.x[j];
      t.data[i] = ds->collocation.t[j];
    }
  }
};

void check_finite_loss(double v, const char* which, std::size_t step,
                       double ld, double lg, double lpde) {
  if (std::isfinite(v)) return;
  throw TrainingDiverged(
      std::string("non-finite ") + which + " at step " + std::to_string(step) +
          " (loss_D=" + io::format_double(ld) +
          ", loss_G=" + io::format_double(lg) +
          ", loss_PDE=" + io::format_double(lpde) + ")",
      step);
}

}  // namespace

TrainResult train(const TrainConfig& cfg, const data::Dataset& dataset,
                  const StepObserver& observer) {
  cfg.validate();
  PIGAN_CHECK(dataset.data_points.size() == cfg.n_u,
              "dataset observation count differs from config n_u");
  PIGAN_CHECK(dataset.collocation.x.size() == cfg.n_r,
              "dataset collocation count differs from config n_r");
  PIGAN_CHECK(cfg.resample_collocation || cfg.n_r >= 1,
              "fixed-pool mode needs a collocation pool");

  TrainResult res;
  res.model.generator = nn::xavier_init(
      cfg.generator_spec, Rng::derive(cfg.seed, seed_tag::kInitGenerator));
  res.model.encoder = nn::xavier_init(
      cfg.encoder_spec, Rng::derive(cfg.seed, seed_tag::kInitEncoder));
  res.model.discriminator = nn::xavier_init(
      cfg.discriminator_spec,
      Rng::derive(cfg.seed, seed_tag::kInitDiscriminator));

  Rng loop_rng(Rng::derive(cfg.seed, seed_tag::kTrainLoop));
  Batcher batcher(dataset, cfg, loop_rng);

  AdamState adam_g(res.model.generator.flat.size());
  AdamState adam_e(res.model.encoder.flat.size());
  AdamState adam_d(res.model.discriminator.flat.size());

  std::vector<double> grad_g(res.model.generator.flat.size());
  std::vector<double> grad_e(res.model.encoder.flat.size());
  std::vector<double> grad_d(res.model.discriminator.flat.size());

  ad::Tape tape;
  Matrix fx, ft, rx, rt, ru, cx, ct;

  double last_d = 0.0, last_g = 0.0, last_pde = 0.0;

  const auto disc_step = [&](std::size_t step, bool update) {
    tape.reset();
    const nn::StagedParams gen_s = nn::stage(tape, res.model.generator, false);
    const nn::StagedParams disc_s =
        nn::stage(tape, res.model.discriminator, update);
    batcher.draw_fake(fx, ft);
    const Matrix fz = batcher.draw_normal(fx.rows);
    batcher.draw_real(rx, rt, ru);
    const ad::Value ld =
        discriminator_loss(tape, disc_s, gen_s, fx, ft, fz, rx, rt, ru);
    last_d = tape.item(ld);
    check_finite_loss(last_d, "discriminator loss", step, last_d, last_g,
                      last_pde);
    if (!update) return;
    // Ascent on L_D as descent on -L_D.
    tape.backward(tape.neg(ld));
    nn::collect_grad(tape, disc_s, grad_d);
    adam_step(adam_d, res.model.discriminator.flat, grad_d, cfg);
  };

  const auto gen_step = [&](std::size_t step, bool update) {
    tape.reset();
    const nn::StagedParams gen_s = nn::stage(tape, res.model.generator, update);
    const nn::StagedParams enc_s = nn::stage(tape, res.model.encoder, update);
    const nn::StagedParams disc_s =
        nn::stage(tape, res.model.discriminator, false);
    batcher.draw_fake(fx, ft);
    const Matrix fz = batcher.draw_normal(fx.rows);
    const ad::Value lg =
        generator_loss(tape, gen_s, enc_s, disc_s, fx, ft, fz, cfg.lambda);
    batcher.draw_collocation(cx, ct);
    Matrix pz;
    if (cfg.pde_fresh_z) {
      pz = batcher.draw_normal(cx.rows);
    } else {
      pz = Matrix(cx.rows, 1);
      for (std::size_t i = 0; i < cx.rows; ++i) {
        pz.data[i] = fz.data[i % fz.rows];
      }
    }
    const ad::Value lpde = physics::pde_residual_loss(tape, gen_s, cx, ct, pz,
                                                      physics::kBurgersNu);
    const ad::Value total = lg + cfg.beta * lpde;
    last_g = tape.item(lg);
    last_pde = tape.item(lpde);
    check_finite_loss(tape.item(total), "generator objective", step, last_d,
                      last_g, last_pde);
    if (!update) return;
    tape.backward(total);
    nn::collect_grad(tape, gen_s, grad_g);
    nn::collect_grad(tape, enc_s, grad_e);
    adam_step(adam_g, res.model.generator.flat, grad_g, cfg);
    adam_step(adam_e, res.model.encoder.flat, grad_e, cfg);
  };

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    for (std::size_t i = 0; i < cfg.k_d; ++i) {
      disc_step(step, true);
      if (observer) observer({step, Phase::kDiscriminator, i}, res.model);
    }
    for (std::size_t i = 0; i < cfg.k_g; ++i) {
      gen_step(step, true);
      if (observer) observer({step, Phase::kGenerator, i}, res.model);
    }
    if (step % cfg.log_every == 0) {
      res.history.push_back({step, last_d, last_g, last_pde});
    }
  }
  if (cfg.steps == 0) {
    // Report the losses of the initialized model.
    disc_step(0, false);
    gen_step(0, false);
  }
  res.final_loss_d = last_d;
  res.final_loss_g = last_g;
  res.final_loss_pde = last_pde;
  return res;
}

std::string history_to_csv(const std::vector<HistoryRow>& history) {
  std::string out = "step,loss_D,loss_G,loss_PDE\n";
  for (const HistoryRow& row : history) {
    out += std::to_string(row.step);
    out += ',';
    out += io::format_double(row.loss_d);
    out += ',';
    out += io::format_double(row.loss_g);
    out += ',';
    out += io::format_double(row.loss_pde);
    out += '\n';
  }
  return out;
}

}  // namespace pigan::gan
