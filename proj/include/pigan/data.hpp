#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pigan/physics.hpp"

namespace pigan::data {

// Gauss-Hermite rule for weight exp(-s^2): integral ~ sum w_i g(s_i).
// Nodes are symmetric about 0 by construction.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached per node count; safe to call concurrently.
const GaussHermite& gauss_hermite(std::size_t n);

// Cole-Hopf closed form evaluated by Gauss-Hermite quadrature:
//   u(x,t) = -[ int sin(pi(x-eta)) f(x-eta) e^(-eta^2/4vt) deta ]
//           / [ int f(x-eta) e^(-eta^2/4vt) deta ],  f(y) = exp(-cos(pi y)/(2 pi v)).
// At t = 0 returns -sin(pi x) directly; throws std::domain_error for t < 0.
double exact_burgers_solution(double x, double t, double nu,
                              std::size_t quad_nodes = 128);

std::vector<double> exact_burgers_field(const physics::PointBatch& points,
                                        double nu,
                                        std::size_t quad_nodes = 128);

enum class PointKind { kInitial, kBoundary };

// The data corruption applied to initial-condition observations in the noisy
// variant: per point, eps ~ Normal(0, 0.1^2), delta = eps / exp(3|x|),
// u = -sin(pi(x + 2 delta)) + delta. Boundary targets stay exactly zero.
enum class NoiseKind { kNone, kNonAdditive };

struct DataPoint {
  PointKind kind = PointKind::kInitial;
  double x = 0.0;
  double t = 0.0;
  double u = 0.0;
};

struct Dataset {
  std::vector<DataPoint> data_points;
  physics::PointBatch collocation;
  physics::Domain domain;
  NoiseKind noise = NoiseKind::kNone;
  std::uint64_t seed = 0;
};

// Initial-condition points at t=0 with x uniform on the spatial range, then
// boundary points at x_min and x_max with t uniform, then Latin hypercube
// collocation points. Deterministic in the seed.
Dataset build_burgers_dataset(std::size_t n_initial,
                              std::size_t n_boundary_per_side,
                              std::size_t n_collocation, bool noisy,
                              std::uint64_t seed);

// Splits an observation budget the way the experiments allocate it: one
// quarter per boundary side (integer division), remainder to the initial
// condition. 200 -> 100+50+50, 150 -> 76+37+37.
struct ObservationSplit {
  std::size_t n_initial = 0;
  std::size_t n_boundary_per_side = 0;
};

ObservationSplit split_observation_budget(std::size_t n_u);

// CSV with header kind,x,t,u; kind in {ic, bc, colloc}; u empty for colloc.
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(const std::string& text);
void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

// Uniform nx-by-nt grid over the domain including edges, x varying fastest.
physics::PointBatch evaluation_grid(std::size_t nx = 256, std::size_t nt = 100,
                                    const physics::Domain& domain =
                                        physics::kBurgersDomain);

// Shared random test set for error reporting; every configuration is scored
// against the same points.
inline constexpr std::uint64_t kTestPointSeed = 25600;

physics::PointBatch random_test_points(std::size_t n, std::uint64_t seed,
                                       const physics::Domain& domain =
                                           physics::kBurgersDomain);

}  // namespace pigan::data
