#pragma once

#include "json.hpp"
#include "pigan/gan.hpp"
#include "pigan/nn.hpp"

namespace pigan::jsonio {

nlohmann::json spec_to_json(const nn::MlpSpec& spec);
// Starts from `base`, overrides keys present in j. Throws
// std::invalid_argument naming any unknown key.
nn::MlpSpec spec_from_json(const nlohmann::json& j, nn::MlpSpec base);

nlohmann::json params_to_json(const nn::NetworkParams& p);
nn::NetworkParams params_from_json(const nlohmann::json& j);

nlohmann::json train_config_to_json(const gan::TrainConfig& cfg);
gan::TrainConfig train_config_from_json(const nlohmann::json& j,
                                        gan::TrainConfig base);

// The TrainConfig keys recognized by train_config_from_json; the CLI layers
// its own keys on top of these.
bool is_train_config_key(const std::string& key);

}  // namespace pigan::jsonio
