#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pigan/data.hpp"
#include "pigan/matrix.hpp"
#include "pigan/nn.hpp"
#include "pigan/tape.hpp"

namespace pigan::gan {

// Generator f(x,t,z) -> u, encoder (x,t,u) -> (mu, log sigma) over the
// 1-dimensional latent, discriminator (x,t,u) -> raw logit.
struct ModelTriplet {
  nn::NetworkParams generator;
  nn::NetworkParams encoder;
  nn::NetworkParams discriminator;
};

struct TrainConfig {
  std::size_t steps = 30000;
  double learning_rate = 1e-4;
  double lambda = 1.5;
  double beta = 1.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  // Inner updates per outer iteration: k_d discriminator ascent steps, then
  // k_g generator/encoder descent steps.
  std::size_t k_g = 5;
  std::size_t k_d = 1;
  // Expected dataset shape; train() validates the dataset against these.
  std::size_t n_u = 200;
  std::size_t n_r = 10000;
  // 0 means the full observation set every step.
  std::size_t data_batch = 0;
  std::size_t collocation_batch = 128;
  // false: minibatch from the dataset's fixed collocation pool.
  // true:  fresh Latin hypercube batch every generator step.
  bool resample_collocation = false;
  // true: the residual term draws its own latent batch each step.
  // false: it reuses the generator-loss draws (cycled to batch size).
  bool pde_fresh_z = true;
  std::size_t log_every = 100;
  std::uint64_t seed = 0;
  nn::MlpSpec generator_spec{3, 4, 50, 1, nn::Activation::kTanh};
  nn::MlpSpec encoder_spec{3, 4, 50, 2, nn::Activation::kTanh};
  nn::MlpSpec discriminator_spec{3, 4, 50, 1, nn::Activation::kTanh};

  void validate() const;

  bool operator==(const TrainConfig&) const = default;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::size_t step = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(const std::string& msg, std::size_t step_index)
      : std::runtime_error(msg), step(step_index) {}

  std::size_t step = 0;
};

// Bias-corrected Adam update, in place. Throws TrainingDiverged on a
// non-finite gradient.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads, const TrainConfig& cfg);

ad::Value generator_sample(ad::Tape& tape, const nn::StagedParams& gen,
                           ad::Value x, ad::Value t, ad::Value z);

// Tape-free batch evaluation for sampling loops.
Matrix generator_sample(const nn::NetworkParams& gen, const Matrix& x,
                        const Matrix& t, const Matrix& z);

// Tape-free encoder pass; returns an n x 2 matrix of (mu, log sigma) rows.
Matrix encoder_moments(const nn::NetworkParams& enc, const Matrix& x,
                       const Matrix& t, const Matrix& u);

ad::Value discriminator_logit(ad::Tape& tape, const nn::StagedParams& disc,
                              ad::Value x, ad::Value t, ad::Value u);

// log Normal(z; mu, sigma^2) with (mu, log sigma) produced by the encoder
// net; log sigma is clamped to [-10, 10] before exponentiation.
ad::Value encoder_log_density(ad::Tape& tape, const nn::StagedParams& enc,
                              ad::Value x, ad::Value t, ad::Value u,
                              ad::Value z);

// log Normal(z; mu, 1) using only the encoder's mu head: the variational
// width is pinned during training. Letting the width shrink makes the reward
// per sample scale like 1/sigma^2, and that noise swamps the adversarial
// gradient in Adam's second moment; the generator then never fits the data.
ad::Value cycle_log_density(ad::Tape& tape, const nn::StagedParams& enc,
                            ad::Value x, ad::Value t, ad::Value u, ad::Value z);

// mean log sigmoid(T(fake)) + mean log(1 - sigmoid(T(real))), to be
// maximized in psi. Generated samples use the staged generator.
ad::Value discriminator_loss(ad::Tape& tape, const nn::StagedParams& disc,
                             const nn::StagedParams& gen, const Matrix& fake_x,
                             const Matrix& fake_t, const Matrix& fake_z,
                             const Matrix& real_x, const Matrix& real_t,
                             const Matrix& real_u);

// mean T(x,t,f(x,t,z)) + (1 - lambda) mean log q(z|x,t,f(x,t,z)), to be
// minimized in theta and phi jointly. q is the pinned-width cycle density.
ad::Value generator_loss(ad::Tape& tape, const nn::StagedParams& gen,
                         const nn::StagedParams& enc,
                         const nn::StagedParams& disc, const Matrix& x,
                         const Matrix& t, const Matrix& z, double lambda);

struct HistoryRow {
  std::size_t step = 0;
  double loss_d = 0.0;
  double loss_g = 0.0;
  double loss_pde = 0.0;
};

struct TrainResult {
  ModelTriplet model;
  std::vector<HistoryRow> history;
  double final_loss_d = 0.0;
  double final_loss_g = 0.0;
  double final_loss_pde = 0.0;
};

enum class Phase { kDiscriminator, kGenerator };

struct StepEvent {
  std::size_t outer_step = 0;
  Phase phase = Phase::kDiscriminator;
  std::size_t inner_step = 0;
};

// Called after every inner parameter update with the current parameters.
using StepObserver = std::function<void(const StepEvent&, const ModelTriplet&)>;

// Alternating adversarial training: per outer step, k_d ascent updates of the
// discriminator, then k_g descent updates of generator + encoder against
// loss_G + beta * loss_PDE. Fresh batches and latent draws per inner step.
// Deterministic given cfg.seed. Throws TrainingDiverged when a loss or
// gradient leaves the finite range.
TrainResult train(const TrainConfig& cfg, const data::Dataset& dataset,
                  const StepObserver& observer = {});

std::string history_to_csv(const std::vector<HistoryRow>& history);

}  // namespace pigan::gan
