#include "pigan/json_io.hpp"

#include <stdexcept>

#include "pigan/check.hpp"

namespace pigan::jsonio {

using nlohmann::json;

namespace {

[[noreturn]] void unknown_key(const std::string& where, const std::string& key) {
  throw std::invalid_argument("unknown key '" + key + "' in " + where);
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json spec_to_json(const nn::MlpSpec& spec) {
  return json{{"input_dim", spec.input_dim},
              {"hidden_layers", spec.hidden_layers},
              {"hidden_width", spec.hidden_width},
              {"output_dim", spec.output_dim},
              {"activation", "tanh"}};
}

nn::MlpSpec spec_from_json(const json& j, nn::MlpSpec base) {
  static const char* const keys[] = {"input_dim", "hidden_layers",
                                     "hidden_width", "output_dim",
                                     "activation"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : keys) ok = ok || key == k;
    if (!ok) unknown_key("network spec", key);
  }
  take(j, "input_dim", base.input_dim);
  take(j, "hidden_layers", base.hidden_layers);
  take(j, "hidden_width", base.hidden_width);
  take(j, "output_dim", base.output_dim);
  if (j.contains("activation")) {
    const std::string a = j.at("activation").get<std::string>();
    if (a != "tanh") {
      throw std::invalid_argument("activation '" + a + "' not supported");
    }
  }
  return base;
}

json params_to_json(const nn::NetworkParams& p) {
  return json{{"spec", spec_to_json(p.spec)}, {"flat", p.flat}};
}

nn::NetworkParams params_from_json(const json& j) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "spec" && key != "flat") unknown_key("network params", key);
  }
  nn::NetworkParams p;
  p.spec = spec_from_json(j.at("spec"), nn::MlpSpec{});
  p.flat = j.at("flat").get<std::vector<double>>();
  PIGAN_CHECK(p.flat.size() == p.spec.param_count(),
              "parameter vector length does not match spec");
  return p;
}

namespace {

const char* const kTrainKeys[] = {
    "steps",         "learning_rate", "lambda",
    "beta",          "adam_beta1",    "adam_beta2",
    "adam_eps",      "k_g",           "k_d",
    "n_u",           "n_r",           "data_batch",
    "collocation_batch", "resample_collocation", "pde_fresh_z",
    "log_every",     "seed",          "generator",
    "encoder",       "discriminator"};

}  // namespace

bool is_train_config_key(const std::string& key) {
  for (const char* k : kTrainKeys) {
    if (key == k) return true;
  }
  return false;
}

json train_config_to_json(const gan::TrainConfig& cfg) {
  return json{{"steps", cfg.steps},
              {"learning_rate", cfg.learning_rate},
              {"lambda", cfg.lambda},
              {"beta", cfg.beta},
              {"adam_beta1", cfg.adam_beta1},
              {"adam_beta2", cfg.adam_beta2},
              {"adam_eps", cfg.adam_eps},
              {"k_g", cfg.k_g},
              {"k_d", cfg.k_d},
              {"n_u", cfg.n_u},
              {"n_r", cfg.n_r},
              {"data_batch", cfg.data_batch},
              {"collocation_batch", cfg.collocation_batch},
              {"resample_collocation", cfg.resample_collocation},
              {"pde_fresh_z", cfg.pde_fresh_z},
              {"log_every", cfg.log_every},
              {"seed", cfg.seed},
              {"generator", spec_to_json(cfg.generator_spec)},
              {"encoder", spec_to_json(cfg.encoder_spec)},
              {"discriminator", spec_to_json(cfg.discriminator_spec)}};
}

gan::TrainConfig train_config_from_json(const json& j, gan::TrainConfig base) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!is_train_config_key(key)) unknown_key("train config", key);
  }
  take(j, "steps", base.steps);
  take(j, "learning_rate", base.learning_rate);
  take(j, "lambda", base.lambda);
  take(j, "beta", base.beta);
  take(j, "adam_beta1", base.adam_beta1);
  take(j, "adam_beta2", base.adam_beta2);
  take(j, "adam_eps", base.adam_eps);
  take(j, "k_g", base.k_g);
  take(j, "k_d", base.k_d);
  take(j, "n_u", base.n_u);
  take(j, "n_r", base.n_r);
  take(j, "data_batch", base.data_batch);
  take(j, "collocation_batch", base.collocation_batch);
  take(j, "resample_collocation", base.resample_collocation);
  take(j, "pde_fresh_z", base.pde_fresh_z);
  take(j, "log_every", base.log_every);
  take(j, "seed", base.seed);
  if (j.contains("generator")) {
    base.generator_spec = spec_from_json(j.at("generator"), base.generator_spec);
  }
  if (j.contains("encoder")) {
    base.encoder_spec = spec_from_json(j.at("encoder"), base.encoder_spec);
  }
  if (j.contains("discriminator")) {
    base.discriminator_spec =
        spec_from_json(j.at("discriminator"), base.discriminator_spec);
  }
  return base;
}

}  // namespace pigan::jsonio
