#include "pigan/physics.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>

#include "pigan/check.hpp"
#include "pigan/rng.hpp"

namespace pigan::physics {

const double kBurgersNu = 0.01 / std::numbers::pi;

void Domain::validate() const {
  PIGAN_CHECK(x_min < x_max, "domain requires x_min < x_max");
  PIGAN_CHECK(t_min < t_max, "domain requires t_min < t_max");
}

ad::Value burgers_residual(ad::Value u, ad::Value ux, ad::Value ut,
                           ad::Value uxx, double nu) {
  PIGAN_CHECK(nu > 0.0, "viscosity must be positive");
  return ut + u * ux - nu * uxx;
}

PdeOperator make_burgers_operator(double nu) {
  PIGAN_CHECK(nu > 0.0, "viscosity must be positive");
  return {[nu](ad::Value u, ad::Value ux, ad::Value ut, ad::Value uxx) {
    return burgers_residual(u, ux, ut, uxx, nu);
  }};
}

ad::Value pde_residual_loss(ad::Tape& tape, const nn::StagedParams& generator,
                            const Matrix& x, const Matrix& t, const Matrix& z,
                            const PdeOperator& op) {
  PIGAN_CHECK(x.rows >= 1, "collocation batch must be non-empty");
  PIGAN_CHECK(x.cols == 1 && t.cols == 1 && z.cols == 1,
              "collocation inputs must be column vectors");
  PIGAN_CHECK(t.rows == x.rows && z.rows == x.rows,
              "collocation inputs must have matching lengths");
  const ad::Value xv = tape.leaf(x, false);
  const ad::Value tv = tape.leaf(t, false);
  const ad::Value zv = tape.leaf(z, false);
  const nn::DerivOutputs d =
      nn::forward_with_input_derivs(tape, generator, xv, tv, zv);
  const ad::Value r = op.residual(d.u, d.ux, d.ut, d.uxx);
  return mean(square(r));
}

ad::Value pde_residual_loss(ad::Tape& tape, const nn::StagedParams& generator,
                            const Matrix& x, const Matrix& t, const Matrix& z,
                            double nu) {
  return pde_residual_loss(tape, generator, x, t, z,
                           make_burgers_operator(nu));
}

namespace {

std::vector<std::size_t> permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(p[i - 1], p[rng.below(i)]);
  }
  return p;
}

double offset01(Rng& rng) {
  const double u = rng.uniform01();
  // uniform01 can return exactly 0, which would land on a bin edge; the
  // domain edges must stay excluded.
  return u > 0.0 ? u : 0x1.0p-53;
}

}  // namespace

PointBatch sample_collocation(std::size_t n, const Domain& domain,
                              std::uint64_t seed) {
  PIGAN_CHECK(n >= 1, "collocation sample size must be at least 1");
  domain.validate();
  Rng rng(seed);
  const std::vector<std::size_t> px = permutation(n, rng);
  const std::vector<std::size_t> pt = permutation(n, rng);
  const double wx = (domain.x_max - domain.x_min) / static_cast<double>(n);
  const double wt = (domain.t_max - domain.t_min) / static_cast<double>(n);
  PointBatch batch;
  batch.x.resize(n);
  batch.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    batch.x[i] =
        domain.x_min + (static_cast<double>(px[i]) + offset01(rng)) * wx;
    batch.t[i] =
        domain.t_min + (static_cast<double>(pt[i]) + offset01(rng)) * wt;
  }
  return batch;
}

}  // namespace pigan::physics
