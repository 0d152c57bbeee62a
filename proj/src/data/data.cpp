#include "pigan/data.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "pigan/check.hpp"
#include "pigan/io.hpp"
#include "pigan/rng.hpp"

namespace pigan::data {

namespace {

// Christoffel function at x: w = 1 / sum_k p_k(x)^2 over the orthonormal
// Hermite polynomials. Eigenvector-based weights lose all relative accuracy
// once they fall below ~1e-33 (absolute eigensolver error squared); the far
// tail needs ~1e-100, and the solution ratio near the shock leans on it.
double christoffel_weight(double x, std::size_t n) {
  double prev = 0.0;
  double p = 1.0 / std::pow(std::numbers::pi, 0.25);
  double sum = p * p;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double next = (x * p - std::sqrt(static_cast<double>(k) / 2.0) * prev) /
                        std::sqrt(static_cast<double>(k + 1) / 2.0);
    prev = p;
    p = next;
    sum += p * p;
  }
  // The sum reaches ~exp(node^2); overflows around n ~ 350.
  PIGAN_CHECK(std::isfinite(sum), "quadrature order too large for weights");
  return 1.0 / sum;
}

GaussHermite compute_gauss_hermite(std::size_t n) {
  PIGAN_CHECK(n >= 1, "quadrature needs at least one node");
  // Nodes: eigenvalues of the Jacobi matrix for the Hermite recurrence,
  // off-diagonal beta_k = sqrt(k/2).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub(static_cast<Eigen::Index>(n > 1 ? n - 1 : 0));
  for (std::size_t k = 1; k < n; ++k) {
    sub[static_cast<Eigen::Index>(k - 1)] =
        std::sqrt(static_cast<double>(k) / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  PIGAN_CHECK(es.info() == Eigen::Success, "quadrature eigensolve failed");

  GaussHermite gh;
  gh.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gh.nodes[i] = es.eigenvalues()[static_cast<Eigen::Index>(i)];
  }
  // Symmetrize so node pairs are exact negatives; keeps odd integrands at
  // exactly zero.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const std::size_t j = n - 1 - i;
    const double mag = 0.5 * (gh.nodes[j] - gh.nodes[i]);
    gh.nodes[i] = -mag;
    gh.nodes[j] = mag;
  }
  if (n % 2 == 1) {
    gh.nodes[n / 2] = 0.0;
  }
  gh.weights.resize(n);
  for (std::size_t i = 0; i <= (n - 1) / 2; ++i) {
    gh.weights[i] = christoffel_weight(gh.nodes[i], n);
    gh.weights[n - 1 - i] = gh.weights[i];
  }
  return gh;
}

}  // namespace

const GaussHermite& gauss_hermite(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, compute_gauss_hermite(n)).first;
  }
  return it->second;
}

double exact_burgers_solution(double x, double t, double nu,
                              std::size_t quad_nodes) {
  PIGAN_CHECK(nu > 0.0, "viscosity must be positive");
  if (t < 0.0) {
    throw std::domain_error("exact_burgers_solution: t must be >= 0");
  }
  const double pi = std::numbers::pi;
  if (t == 0.0) {
    return -std::sin(pi * x);
  }
  const GaussHermite& gh = gauss_hermite(quad_nodes);
  const std::size_t n = gh.nodes.size();
  const double scale = std::sqrt(4.0 * nu * t);
  const double inv_two_pi_nu = 1.0 / (2.0 * pi * nu);

  // Exponents are ~1/(2 pi nu) = 50/pi^2 * pi ~ big at small nu; subtract the
  // max before exponentiating so the ratio stays in range.
  std::vector<double> g(n), s(n);
  double gmax = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double y = x - scale * gh.nodes[i];
    g[i] = -std::cos(pi * y) * inv_two_pi_nu;
    s[i] = std::sin(pi * y);
    gmax = std::max(gmax, g[i]);
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = gh.weights[i] * std::exp(g[i] - gmax);
    num += s[i] * e;
    den += e;
  }
  return -num / den;
}

std::vector<double> exact_burgers_field(const physics::PointBatch& points,
                                        double nu, std::size_t quad_nodes) {
  PIGAN_CHECK(points.x.size() == points.t.size(),
              "point batch coordinate lengths differ");
  std::vector<double> u(points.x.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = exact_burgers_solution(points.x[i], points.t[i], nu, quad_nodes);
  }
  return u;
}

Dataset build_burgers_dataset(std::size_t n_initial,
                              std::size_t n_boundary_per_side,
                              std::size_t n_collocation, bool noisy,
                              std::uint64_t seed) {
  const physics::Domain dom = physics::kBurgersDomain;
  const double pi = std::numbers::pi;
  Dataset ds;
  ds.domain = dom;
  ds.noise = noisy ? NoiseKind::kNonAdditive : NoiseKind::kNone;
  ds.seed = seed;
  ds.data_points.reserve(n_initial + 2 * n_boundary_per_side);

  Rng rng(Rng::derive(seed, seed_tag::kDataset, 0));
  for (std::size_t i = 0; i < n_initial; ++i) {
    DataPoint p;
    p.kind = PointKind::kInitial;
    p.x = rng.uniform(dom.x_min, dom.x_max);
    p.t = 0.0;
    if (noisy) {
      const double eps = 0.1 * rng.normal();
      const double delta = eps / std::exp(3.0 * std::abs(p.x));
      p.u = -std::sin(pi * (p.x + 2.0 * delta)) + delta;
    } else {
      p.u = -std::sin(pi * p.x);
    }
    ds.data_points.push_back(p);
  }
  for (const double xb : {dom.x_min, dom.x_max}) {
    for (std::size_t i = 0; i < n_boundary_per_side; ++i) {
      DataPoint p;
      p.kind = PointKind::kBoundary;
      p.x = xb;
      p.t = rng.uniform(dom.t_min, dom.t_max);
      p.u = 0.0;
      ds.data_points.push_back(p);
    }
  }
  if (n_collocation > 0) {
    ds.collocation = physics::sample_collocation(
        n_collocation, dom, Rng::derive(seed, seed_tag::kDataset, 1));
  }
  return ds;
}

ObservationSplit split_observation_budget(std::size_t n_u) {
  PIGAN_CHECK(n_u >= 1, "observation budget must be at least 1");
  ObservationSplit s;
  s.n_boundary_per_side = n_u / 4;
  s.n_initial = n_u - 2 * s.n_boundary_per_side;
  return s;
}

namespace {

const char* kind_name(PointKind k) {
  return k == PointKind::kInitial ? "ic" : "bc";
}

}  // namespace

std::string dataset_to_csv(const Dataset& ds) {
  std::string out = "kind,x,t,u\n";
  for (const DataPoint& p : ds.data_points) {
    out += kind_name(p.kind);
    out += ',';
    out += io::format_double(p.x);
    out += ',';
    out += io::format_double(p.t);
    out += ',';
    out += io::format_double(p.u);
    out += '\n';
  }
  for (std::size_t i = 0; i < ds.collocation.x.size(); ++i) {
    out += "colloc,";
    out += io::format_double(ds.collocation.x[i]);
    out += ',';
    out += io::format_double(ds.collocation.t[i]);
    out += ",\n";
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  std::vector<std::string> lines = io::split(text, '\n');
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  PIGAN_CHECK(!lines.empty() && lines[0] == "kind,x,t,u",
              "dataset csv missing kind,x,t,u header");
  Dataset ds;
  ds.domain = physics::kBurgersDomain;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::vector<std::string> f = io::split(lines[li], ',');
    PIGAN_CHECK(f.size() == 4, "dataset csv row must have 4 fields");
    const double x = io::parse_double(f[1]);
    const double t = io::parse_double(f[2]);
    if (f[0] == "colloc") {
      PIGAN_CHECK(f[3].empty(), "colloc rows carry no observation");
      ds.collocation.x.push_back(x);
      ds.collocation.t.push_back(t);
    } else {
      PIGAN_CHECK(f[0] == "ic" || f[0] == "bc", "unknown dataset point kind");
      DataPoint p;
      p.kind = f[0] == "ic" ? PointKind::kInitial : PointKind::kBoundary;
      p.x = x;
      p.t = t;
      p.u = io::parse_double(f[3]);
      ds.data_points.push_back(p);
    }
  }
  return ds;
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  io::write_file(path, dataset_to_csv(ds));
}

Dataset read_dataset_csv(const std::string& path) {
  std::string text;
  for (const std::string& line : io::read_lines(path)) {
    text += line;
    text += '\n';
  }
  return dataset_from_csv(text);
}

physics::PointBatch evaluation_grid(std::size_t nx, std::size_t nt,
                                    const physics::Domain& domain) {
  PIGAN_CHECK(nx >= 2 && nt >= 2, "grid needs at least 2 points per axis");
  physics::PointBatch g;
  g.x.reserve(nx * nt);
  g.t.reserve(nx * nt);
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = domain.t_min + (domain.t_max - domain.t_min) *
                                        static_cast<double>(j) /
                                        static_cast<double>(nt - 1);
    for (std::size_t i = 0; i < nx; ++i) {
      const double x = domain.x_min + (domain.x_max - domain.x_min) *
                                          static_cast<double>(i) /
                                          static_cast<double>(nx - 1);
      g.x.push_back(x);
      g.t.push_back(t);
    }
  }
  return g;
}

physics::PointBatch random_test_points(std::size_t n, std::uint64_t seed,
                                       const physics::Domain& domain) {
  PIGAN_CHECK(n >= 1, "test set must be non-empty");
  Rng rng(seed);
  physics::PointBatch pts;
  pts.x.resize(n);
  pts.t.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    pts.x[i] = rng.uniform(domain.x_min, domain.x_max);
    pts.t[i] = rng.uniform(domain.t_min, domain.t_max);
  }
  return pts;
}

}  // namespace pigan::data
