#pragma once

#include <string>

#include "pigan/gan.hpp"
#include "pigan/nn.hpp"

namespace pigan::gan {

struct Checkpoint {
  ModelTriplet model;
  TrainConfig config;
  double final_loss_d = 0.0;
  double final_loss_g = 0.0;
  double final_loss_pde = 0.0;
};

// JSON with full-precision parameter vectors; load(save(x)) is bitwise exact.
std::string checkpoint_to_json(const Checkpoint& ck);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace pigan::gan
