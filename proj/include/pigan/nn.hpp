#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pigan/matrix.hpp"
#include "pigan/tape.hpp"

namespace pigan::nn {

enum class Activation { kTanh };

struct MlpSpec {
  std::size_t input_dim = 0;
  std::size_t hidden_layers = 0;
  std::size_t hidden_width = 0;
  std::size_t output_dim = 0;
  Activation activation = Activation::kTanh;

  // Config-level contract: at least one tanh hidden layer. forward() itself
  // also handles the degenerate 0-hidden-layer (pure affine) network, which
  // some tests exercise directly.
  void validate() const;

  std::size_t layer_count() const { return hidden_layers + 1; }
  std::size_t fan_in(std::size_t layer) const;
  std::size_t fan_out(std::size_t layer) const;
  std::size_t param_count() const;

  bool operator==(const MlpSpec&) const = default;
};

// All weights and biases in one flat vector, layer by layer, each layer as
// row-major (out x in) weights followed by the bias. Optimizer state indexes
// into the same layout.
struct NetworkParams {
  MlpSpec spec;
  std::vector<double> flat;

  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;
  std::span<double> weight(std::size_t layer);
  std::span<const double> weight(std::size_t layer) const;
  std::span<double> bias(std::size_t layer);
  std::span<const double> bias(std::size_t layer) const;
};

// W ~ Normal(0, 2 / (fan_in + fan_out)), biases zero.
NetworkParams xavier_init(const MlpSpec& spec, std::uint64_t seed);

// Per-layer tape leaves for one network.
struct StagedParams {
  const MlpSpec* spec = nullptr;
  std::vector<ad::Value> w;
  std::vector<ad::Value> b;
  bool requires_grad = false;
};

StagedParams stage(ad::Tape& tape, const NetworkParams& params, bool requires_grad);

// Copies leaf adjoints into the flat layout. Valid after Tape::backward.
void collect_grad(const ad::Tape& tape, const StagedParams& staged,
                  std::span<double> out);

ad::Value forward(ad::Tape& tape, const StagedParams& staged, ad::Value input);

struct DerivOutputs {
  ad::Value u, ux, ut, uxx;
};

// Forward-sensitivity pass: carries (h, dh/dx, dh/dt, d2h/dx2) through each
// layer so the returned nodes are differentiable w.r.t. parameters. Expects
// spec.input_dim == 3 with columns ordered (x, t, z); z derivatives are not
// propagated. The u component is bitwise equal to forward() on the
// concatenated inputs.
DerivOutputs forward_with_input_derivs(ad::Tape& tape, const StagedParams& staged,
                                       ad::Value x, ad::Value t, ad::Value z);

// Tape-free forward used by sampling loops; runs the same kernel sequence as
// forward() so results match it bitwise.
void forward_eval(const NetworkParams& params, const Matrix& input, Matrix& out,
                  const kernels::Backend& bk = kernels::active());

}  // namespace pigan::nn
