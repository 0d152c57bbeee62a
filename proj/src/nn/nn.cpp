#include "pigan/nn.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "pigan/check.hpp"
#include "pigan/rng.hpp"

namespace pigan::nn {

void MlpSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("MlpSpec: input_dim must be >= 1");
  if (output_dim < 1) throw std::invalid_argument("MlpSpec: output_dim must be >= 1");
  if (hidden_layers < 1)
    throw std::invalid_argument("MlpSpec: hidden_layers must be >= 1");
  if (hidden_width < 1)
    throw std::invalid_argument("MlpSpec: hidden_width must be >= 1");
}

std::size_t MlpSpec::fan_in(std::size_t layer) const {
  return layer == 0 ? input_dim : hidden_width;
}

std::size_t MlpSpec::fan_out(std::size_t layer) const {
  return layer + 1 == layer_count() ? output_dim : hidden_width;
}

std::size_t MlpSpec::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < layer_count(); ++l)
    n += fan_out(l) * (fan_in(l) + 1);
  return n;
}

std::size_t NetworkParams::weight_offset(std::size_t layer) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer; ++l)
    off += spec.fan_out(l) * (spec.fan_in(l) + 1);
  return off;
}

std::size_t NetworkParams::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + spec.fan_out(layer) * spec.fan_in(layer);
}

std::span<double> NetworkParams::weight(std::size_t layer) {
  return {flat.data() + weight_offset(layer), spec.fan_out(layer) * spec.fan_in(layer)};
}
std::span<const double> NetworkParams::weight(std::size_t layer) const {
  return {flat.data() + weight_offset(layer), spec.fan_out(layer) * spec.fan_in(layer)};
}
std::span<double> NetworkParams::bias(std::size_t layer) {
  return {flat.data() + bias_offset(layer), spec.fan_out(layer)};
}
std::span<const double> NetworkParams::bias(std::size_t layer) const {
  return {flat.data() + bias_offset(layer), spec.fan_out(layer)};
}

NetworkParams xavier_init(const MlpSpec& spec, std::uint64_t seed) {
  NetworkParams p;
  p.spec = spec;
  p.flat.assign(spec.param_count(), 0.0);
  Rng rng(seed);
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const double sd = std::sqrt(2.0 / double(spec.fan_in(l) + spec.fan_out(l)));
    for (double& w : p.weight(l)) w = sd * rng.normal();
    // biases stay zero
  }
  return p;
}

StagedParams stage(ad::Tape& tape, const NetworkParams& params, bool requires_grad) {
  StagedParams s;
  s.spec = &params.spec;
  s.requires_grad = requires_grad;
  const auto& sp = params.spec;
  s.w.reserve(sp.layer_count());
  s.b.reserve(sp.layer_count());
  for (std::size_t l = 0; l < sp.layer_count(); ++l) {
    const auto wl = params.weight(l);
    const auto bl = params.bias(l);
    s.w.push_back(tape.leaf(wl.data(), sp.fan_out(l), sp.fan_in(l), requires_grad));
    s.b.push_back(tape.leaf(bl.data(), sp.fan_out(l), 1, requires_grad));
  }
  return s;
}

void collect_grad(const ad::Tape& tape, const StagedParams& staged,
                  std::span<double> out) {
  PIGAN_CHECK(staged.requires_grad, "collect_grad on frozen parameters");
  const auto& sp = *staged.spec;
  PIGAN_CHECK(out.size() == sp.param_count(), "gradient buffer size mismatch");
  std::size_t off = 0;
  for (std::size_t l = 0; l < sp.layer_count(); ++l) {
    const auto gw = tape.grad(staged.w[l]);
    std::memcpy(out.data() + off, gw.data(), gw.size() * sizeof(double));
    off += gw.size();
    const auto gb = tape.grad(staged.b[l]);
    std::memcpy(out.data() + off, gb.data(), gb.size() * sizeof(double));
    off += gb.size();
  }
}

ad::Value forward(ad::Tape& tape, const StagedParams& staged, ad::Value input) {
  const auto& sp = *staged.spec;
  PIGAN_CHECK(input.cols == sp.input_dim, "forward: input width != input_dim");
  ad::Value h = input;
  for (std::size_t l = 0; l < sp.layer_count(); ++l) {
    ad::Value a = tape.affine(h, staged.w[l], staged.b[l]);
    h = (l + 1 < sp.layer_count()) ? tape.tanh(a) : a;
  }
  return h;
}

DerivOutputs forward_with_input_derivs(ad::Tape& tape, const StagedParams& staged,
                                       ad::Value x, ad::Value t, ad::Value z) {
  const auto& sp = *staged.spec;
  PIGAN_CHECK(sp.input_dim == 3, "forward_with_input_derivs needs input_dim == 3");
  PIGAN_CHECK(x.cols == 1 && t.cols == 1 && z.cols == 1 && x.rows == t.rows &&
                  x.rows == z.rows,
              "forward_with_input_derivs: inputs must be equal-length columns");
  const std::size_t m = x.rows;

  ad::Value h = tape.concat_cols(tape.concat_cols(x, t), z);

  Matrix seed_x(m, 3), seed_t(m, 3);
  for (std::size_t i = 0; i < m; ++i) {
    seed_x.at(i, 0) = 1.0;
    seed_t.at(i, 1) = 1.0;
  }
  ad::Value hx = tape.leaf(seed_x);
  ad::Value ht = tape.leaf(seed_t);
  ad::Value hxx = tape.constant(m, 3, 0.0);

  for (std::size_t l = 0; l < sp.layer_count(); ++l) {
    ad::Value zb = tape.constant(sp.fan_out(l), 1, 0.0);
    ad::Value a = tape.affine(h, staged.w[l], staged.b[l]);
    ad::Value ax = tape.affine(hx, staged.w[l], zb);
    ad::Value at = tape.affine(ht, staged.w[l], zb);
    ad::Value axx = tape.affine(hxx, staged.w[l], zb);
    if (l + 1 == sp.layer_count()) {
      return DerivOutputs{a, ax, at, axx};
    }
    // h = tanh(a): h' = (1-h^2) a', h'' = (1-h^2) (a'' - 2 h (a')^2)
    h = tape.tanh(a);
    ad::Value s = 1.0 - ad::square(h);
    hx = s * ax;
    ht = s * at;
    hxx = s * (axx - 2.0 * (h * ad::square(ax)));
  }
  throw std::logic_error("forward_with_input_derivs: empty layer list");
}

void forward_eval(const NetworkParams& params, const Matrix& input, Matrix& out,
                  const kernels::Backend& bk) {
  const auto& sp = params.spec;
  PIGAN_CHECK(input.cols == sp.input_dim, "forward_eval: input width != input_dim");
  const std::size_t m = input.rows;
  Matrix buf_a, buf_b;
  const Matrix* cur = &input;
  for (std::size_t l = 0; l < sp.layer_count(); ++l) {
    const std::size_t width = sp.fan_out(l);
    Matrix& dst = (l % 2 == 0) ? buf_a : buf_b;
    dst.rows = m;
    dst.cols = width;
    dst.data.resize(m * width);
    const double* bias = params.bias(l).data();
    for (std::size_t i = 0; i < m; ++i)
      std::memcpy(dst.data.data() + i * width, bias, width * sizeof(double));
    bk.gemm_nt(cur->data.data(), params.weight(l).data(), dst.data.data(), m,
               sp.fan_in(l), width, true);
    if (l + 1 < sp.layer_count())
      bk.ew_tanh(dst.data.data(), dst.data.data(), m * width);
    cur = &dst;
  }
  out = *cur;
}

}  // namespace pigan::nn
