#include "pigan/checkpoint.hpp"

#include <stdexcept>

#include "json.hpp"
#include "pigan/io.hpp"
#include "pigan/json_io.hpp"

namespace pigan::gan {

using nlohmann::json;

namespace {
constexpr const char* kFormatTag = "pigan-checkpoint-v1";
}

std::string checkpoint_to_json(const Checkpoint& ck) {
  const json j{{"format", kFormatTag},
               {"config", jsonio::train_config_to_json(ck.config)},
               {"generator", jsonio::params_to_json(ck.model.generator)},
               {"encoder", jsonio::params_to_json(ck.model.encoder)},
               {"discriminator", jsonio::params_to_json(ck.model.discriminator)},
               {"final_losses",
                json{{"loss_d", ck.final_loss_d},
                     {"loss_g", ck.final_loss_g},
                     {"loss_pde", ck.final_loss_pde}}}};
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("format") || j.at("format") != kFormatTag) {
    throw std::invalid_argument("not a recognized checkpoint file");
  }
  Checkpoint ck;
  ck.config =
      jsonio::train_config_from_json(j.at("config"), gan::TrainConfig{});
  ck.model.generator = jsonio::params_from_json(j.at("generator"));
  ck.model.encoder = jsonio::params_from_json(j.at("encoder"));
  ck.model.discriminator = jsonio::params_from_json(j.at("discriminator"));
  const json& fl = j.at("final_losses");
  ck.final_loss_d = fl.at("loss_d").get<double>();
  ck.final_loss_g = fl.at("loss_g").get<double>();
  ck.final_loss_pde = fl.at("loss_pde").get<double>();
  if (ck.model.generator.spec != ck.config.generator_spec ||
      ck.model.encoder.spec != ck.config.encoder_spec ||
      ck.model.discriminator.spec != ck.config.discriminator_spec) {
    throw std::invalid_argument(
        "checkpoint parameters do not match its config specs");
  }
  return ck;
}

void save_checkpoint(const Checkpoint& ck, const std::string& path) {
  io::write_file(path, checkpoint_to_json(ck));
}

Checkpoint load_checkpoint(const std::string& path) {
  std::string text;
  for (const std::string& line : io::read_lines(path)) {
    text += line;
    text += '\n';
  }
  return checkpoint_from_json(text);
}

}  // namespace pigan::gan
