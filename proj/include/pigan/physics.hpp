#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "pigan/matrix.hpp"
#include "pigan/nn.hpp"
#include "pigan/tape.hpp"

namespace pigan::physics {

struct Domain {
  double x_min = 0.0;
  double x_max = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;

  void validate() const;
};

inline constexpr Domain kBurgersDomain{-1.0, 1.0, 0.0, 1.0};

// Viscosity used throughout: 0.01 / pi.
extern const double kBurgersNu;

// r = u_t + u * u_x - nu * u_xx, elementwise over a column batch.
ad::Value burgers_residual(ad::Value u, ad::Value ux, ad::Value ut,
                           ad::Value uxx, double nu);

// Residual rule mapping the value and its input derivatives to a residual
// node; lets the loss plumbing stay equation-agnostic.
struct PdeOperator {
  std::function<ad::Value(ad::Value u, ad::Value ux, ad::Value ut,
                          ad::Value uxx)>
      residual;
};

PdeOperator make_burgers_operator(double nu);

// Mean squared residual of the generator over a collocation batch, one latent
// draw per point. x, t, z are n x 1.
ad::Value pde_residual_loss(ad::Tape& tape, const nn::StagedParams& generator,
                            const Matrix& x, const Matrix& t, const Matrix& z,
                            const PdeOperator& op);

ad::Value pde_residual_loss(ad::Tape& tape, const nn::StagedParams& generator,
                            const Matrix& x, const Matrix& t, const Matrix& z,
                            double nu);

struct PointBatch {
  std::vector<double> x;
  std::vector<double> t;
};

// Latin hypercube draw: each axis is stratified into n bins, bins paired by
// independent permutations, one uniform offset per bin. Every coordinate is
// strictly inside the domain.
PointBatch sample_collocation(std::size_t n, const Domain& domain,
                              std::uint64_t seed);

}  // namespace pigan::physics
