#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pigan/gradcheck.hpp"
#include "pigan/kernels.hpp"
#include "pigan/matrix.hpp"
#include "pigan/rng.hpp"
#include "pigan/tape.hpp"

using namespace pigan;
using ad::Tape;
using ad::Value;

namespace {

std::vector<double> rand_vec(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(lo, hi);
  return v;
}

struct Built {
  Value loss;
  std::vector<Value> leaves;  // leaves in the order they consumed the point
};

using Builder = std::function<Built(Tape&, const std::vector<double>&)>;

// Max relative error between tape gradients and central differences, where
// `build` consumes the flat point as one or more leaves.
double fd_error(const Builder& build, std::vector<double> point, double h = 1e-5) {
  Tape tape;
  Built b = build(tape, point);
  tape.backward(b.loss);
  std::vector<double> analytic;
  for (Value v : b.leaves) {
    auto g = tape.grad(v);
    analytic.insert(analytic.end(), g.begin(), g.end());
  }
  REQUIRE(analytic.size() == point.size());

  const auto f = [&](std::span<const double> q) {
    Tape t2;
    const std::vector<double> qq(q.begin(), q.end());
    return t2.item(build(t2, qq).loss);
  };
  return ad::finite_diff_check(f, point, analytic, h).max_rel_err;
}

// Fixed pseudo-random linear functional; makes d(loss)/d(op output) generic.
Value head(Tape& t, Value v) {
  Rng local(4242);
  Matrix w(v.rows, v.cols);
  for (auto& x : w.data) x = local.uniform(-1.0, 1.0);
  return t.sum(t.mul(v, t.leaf(w)));
}

Value take(Tape& t, const std::vector<double>& q, std::size_t& off,
           std::size_t r, std::size_t c, std::vector<Value>& leaves) {
  Value v = t.leaf(q.data() + off, r, c, true);
  off += r * c;
  leaves.push_back(v);
  return v;
}

}  // namespace

TEST_SUITE("tape") {

TEST_CASE("leaf carries shape and backward seeds itself") {
  Tape t;
  Value v = t.leaf(Matrix::scalar(5.0), true);
  CHECK(v.rows == 1);
  CHECK(v.cols == 1);
  t.backward(v);
  CHECK(t.grad(v)[0] == 1.0);

  Value m = t.leaf(Matrix(2, 3));
  CHECK(m.rows == 2);
  CHECK(m.cols == 3);
}

TEST_CASE("leaf rejects non-finite values") {
  Tape t;
  CHECK_THROWS_AS(t.leaf(Matrix::scalar(std::nan(""))), std::invalid_argument);
  CHECK_THROWS_AS(t.leaf(Matrix::scalar(HUGE_VAL)), std::invalid_argument);
}

TEST_CASE("simple forward values") {
  Tape t;
  CHECK(t.item(t.tanh(t.scalar(0.0))) == 0.0);
  CHECK(t.item(t.log_sigmoid(t.scalar(0.0))) ==
        doctest::Approx(-0.6931471805599453).epsilon(1e-12));
  const double ls = t.item(t.log_sigmoid(t.scalar(-1000.0)));
  CHECK(std::isfinite(ls));
  CHECK(ls == doctest::Approx(-1000.0).epsilon(1e-12));
}

TEST_CASE("log_sigmoid stays finite over [-1e6, 1e6]") {
  Tape t;
  std::vector<double> xs = {-1e6, -1e3, -50.0, 0.0, 50.0, 1e3, 1e6};
  Rng rng(3);
  for (int i = 0; i < 100; ++i) xs.push_back(rng.uniform(-1e6, 1e6));
  Value v = t.log_sigmoid(t.leaf(xs.data(), xs.size(), 1, false));
  for (double y : t.value(v)) {
    CHECK(std::isfinite(y));
    CHECK(y <= 0.0);
  }
}

TEST_CASE("product rule and composition identities") {
  {
    Tape t;
    Value a = t.leaf(Matrix::scalar(2.0), true);
    Value b = t.leaf(Matrix::scalar(3.0), true);
    t.backward(a * b);
    CHECK(t.grad(a)[0] == 3.0);
    CHECK(t.grad(b)[0] == 2.0);
  }
  {
    Tape t;
    Value a = t.leaf(Matrix::scalar(0.0), true);
    t.backward(t.tanh(a));
    CHECK(t.grad(a)[0] == 1.0);
  }
  {
    Tape t;
    Value a = t.leaf(Matrix::scalar(2.5), true);
    Value y = t.exp(t.log(a));
    CHECK(t.item(y) == doctest::Approx(2.5).epsilon(1e-15));
    t.backward(y);
    CHECK(t.grad(a)[0] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("domain and shape errors") {
  Tape t;
  Value pos = t.leaf(Matrix::scalar(1.0));
  Value zero = t.leaf(Matrix::scalar(0.0));
  Value neg = t.leaf(Matrix::scalar(-1.0));
  CHECK_THROWS_AS(t.div(pos, zero), std::domain_error);
  CHECK_THROWS_AS(t.log(neg), std::domain_error);
  CHECK_THROWS_AS(t.log(zero), std::domain_error);

  Value m23 = t.leaf(Matrix(2, 3));
  Value m32 = t.leaf(Matrix(3, 2));
  CHECK_THROWS(t.add(m23, m32));
  CHECK_THROWS(t.matmul(m23, m23));
  CHECK_THROWS(t.concat_cols(m23, t.leaf(Matrix(4, 2))));

  Value vec = t.leaf(Matrix(3, 1), true);
  CHECK_THROWS(t.backward(vec));  // non-scalar output
}

TEST_CASE("adjoints accumulate when a node is reused") {
  Tape t;
  Value x = t.leaf(Matrix::scalar(3.0), true);
  Value y = x * x + x;  // dy/dx = 2x + 1 = 7
  t.backward(y);
  CHECK(t.grad(x)[0] == 7.0);
}

TEST_CASE("quadratic finite-difference check is near-exact") {
  Rng rng(11);
  auto pt = rand_vec(rng, 8, -2.0, 2.0);
  const double err = fd_error(
      [](Tape& t, const std::vector<double>& q) {
        std::vector<Value> leaves;
        std::size_t off = 0;
        Value p = take(t, q, off, q.size(), 1, leaves);
        return Built{t.mean(t.square(p)), leaves};
      },
      pt, 1e-5);
  CHECK(err < 1e-9);
}

TEST_CASE("every primitive op passes central finite differences") {
  struct OpCase {
    const char* name;
    std::function<std::vector<double>(Rng&)> gen;
    Builder build;
  };

  const auto box = [](std::size_t n, double lo, double hi) {
    return [n, lo, hi](Rng& rng) { return rand_vec(rng, n, lo, hi); };
  };

  const auto unary = [](Value (Tape::*op)(Value)) {
    return [op](Tape& t, const std::vector<double>& q) {
      std::vector<Value> leaves;
      std::size_t off = 0;
      Value a = take(t, q, off, 2, 3, leaves);
      return Built{head(t, (t.*op)(a)), leaves};
    };
  };
  const auto binary = [](Value (Tape::*op)(Value, Value)) {
    return [op](Tape& t, const std::vector<double>& q) {
      std::vector<Value> leaves;
      std::size_t off = 0;
      Value a = take(t, q, off, 2, 3, leaves);
      Value b = take(t, q, off, 2, 3, leaves);
      return Built{head(t, (t.*op)(a, b)), leaves};
    };
  };
  // scalar on the left, matrix on the right and vice versa
  const auto broadcast = [](Value (Tape::*op)(Value, Value)) {
    return [op](Tape& t, const std::vector<double>& q) {
      std::vector<Value> leaves;
      std::size_t off = 0;
      Value s = take(t, q, off, 1, 1, leaves);
      Value a = take(t, q, off, 2, 3, leaves);
      Value s2 = take(t, q, off, 1, 1, leaves);
      return Built{head(t, (t.*op)(s, a)) + head(t, (t.*op)(a, s2)), leaves};
    };
  };

  std::vector<OpCase> cases;
  cases.push_back({"add", box(12, -2, 2), binary(&Tape::add)});
  cases.push_back({"sub", box(12, -2, 2), binary(&Tape::sub)});
  cases.push_back({"mul", box(12, -2, 2), binary(&Tape::mul)});
  cases.push_back({"div", [&](Rng& rng) {
                     auto q = rand_vec(rng, 12, -2, 2);
                     for (int i = 6; i < 12; ++i)
                       q[i] = rng.uniform(0.5, 2.0) * (rng.uniform01() < 0.5 ? -1 : 1);
                     return q;
                   },
                   binary(&Tape::div)});
  cases.push_back({"add_broadcast", box(8, -2, 2), broadcast(&Tape::add)});
  cases.push_back({"sub_broadcast", box(8, -2, 2), broadcast(&Tape::sub)});
  cases.push_back({"mul_broadcast", box(8, -2, 2), broadcast(&Tape::mul)});
  cases.push_back({"div_broadcast", [&](Rng& rng) {
                     auto q = rand_vec(rng, 8, 0.5, 2.0);
                     q[0] = rng.uniform(-2, 2);
                     return q;
                   },
                   broadcast(&Tape::div)});
  cases.push_back({"neg", box(6, -2, 2), unary(&Tape::neg)});
  cases.push_back({"square", box(6, -2, 2), unary(&Tape::square)});
  cases.push_back({"exp", box(6, -2, 2), unary(&Tape::exp)});
  cases.push_back({"log", box(6, 0.3, 3.0), unary(&Tape::log)});
  cases.push_back({"tanh", box(6, -3, 3), unary(&Tape::tanh)});
  cases.push_back({"log_sigmoid", box(6, -4, 4), unary(&Tape::log_sigmoid)});
  cases.push_back({"softplus", box(6, -4, 4), unary(&Tape::softplus)});
  cases.push_back({"clamp", [&](Rng& rng) {
                     auto q = rand_vec(rng, 6, -2, 2);
                     // keep points away from the clamp kinks at +-1
                     for (auto& x : q)
                       if (std::abs(std::abs(x) - 1.0) < 0.05) x += (x > 0 ? 0.1 : -0.1);
                     return q;
                   },
                   [](Tape& t, const std::vector<double>& q) {
                     std::vector<Value> leaves;
                     std::size_t off = 0;
                     Value a = take(t, q, off, 2, 3, leaves);
                     return Built{head(t, t.clamp(a, -1.0, 1.0)), leaves};
                   }});
  cases.push_back({"matmul", box(12, -1.5, 1.5),
                   [](Tape& t, const std::vector<double>& q) {
                     std::vector<Value> leaves;
                     std::size_t off = 0;
                     Value a = take(t, q, off, 2, 3, leaves);
                     Value b = take(t, q, off, 3, 2, leaves);
                     return Built{head(t, t.matmul(a, b)), leaves};
                   }});
  cases.push_back({"affine", box(14, -1.5, 1.5),
                   [](Tape& t, const std::vector<double>& q) {
                     std::vector<Value> leaves;
                     std::size_t off = 0;
                     Value x = take(t, q, off, 2, 3, leaves);
                     Value w = take(t, q, off, 2, 3, leaves);
                     Value b = take(t, q, off, 2, 1, leaves);
                     return Built{head(t, t.affine(x, w, b)), leaves};
                   }});
  cases.push_back({"sum", box(6, -2, 2),
                   [](Tape& t, const std::vector<double>& q) {
                     std::vector<Value> leaves;
                     std::size_t off = 0;
                     Value a = take(t, q, off, 2, 3, leaves);
                     return Built{t.square(t.sum(a)), leaves};
                   }});
  cases.push_back({"mean", box(6, -2, 2),
                   [](Tape& t, const std::vector<double>& q) {
                     std::vector<Value> leaves;
                     std::size_t off = 0;
                     Value a = take(t, q, off, 2, 3, leaves);
                     return Built{t.square(t.mean(a)), leaves};
                   }});
  cases.push_back({"concat_cols", box(12, -2, 2),
                   [](Tape& t, const std::vector<double>& q) {
                     std::vector<Value> leaves;
                     std::size_t off = 0;
                     Value a = take(t, q, off, 2, 3, leaves);
                     Value b = take(t, q, off, 2, 3, leaves);
                     return Built{head(t, t.concat_cols(a, b)), leaves};
                   }});

  Rng rng(2024);
  for (const auto& c : cases) {
    INFO("op = ", c.name);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep)
      worst = std::max(worst, fd_error(c.build, c.gen(rng), 1e-5));
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("gradients are deterministic and bitwise repeatable") {
  Rng rng(123);
  auto px = rand_vec(rng, 60, -1.0, 1.0);

  const auto run = [&](std::vector<double>& out) {
    Tape t;
    Value p = t.leaf(px.data(), 8, 5, true);
    Value w = t.leaf(px.data() + 40, 5, 4, false);
    Value h = t.tanh(t.matmul(p, w));
    Value loss = t.mean(t.square(h));
    t.backward(loss);
    auto g = t.grad(p);
    out.assign(g.begin(), g.end());
  };
  std::vector<double> g1, g2;
  run(g1);
  run(g2);
  CHECK(std::memcmp(g1.data(), g2.data(), g1.size() * sizeof(double)) == 0);
}

TEST_CASE("gradient is linear in the loss") {
  Rng rng(321);
  auto px = rand_vec(rng, 10, -1.0, 1.0);
  const double alpha = 1.3, beta = -0.7;

  const auto gf = [&](bool combined) {
    Tape t;
    Value p = t.leaf(px.data(), px.size(), 1, true);
    Value f = t.mean(t.square(p));
    Value g = t.sum(t.tanh(p));
    if (combined) {
      t.backward(alpha * f + beta * g);
      return std::vector<double>(t.grad(p).begin(), t.grad(p).end());
    }
    t.backward(f);
    std::vector<double> out(t.grad(p).begin(), t.grad(p).end());
    Tape t2;
    Value p2 = t2.leaf(px.data(), px.size(), 1, true);
    t2.backward(t2.sum(t2.tanh(p2)));
    auto g2 = t2.grad(p2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * out[i] + beta * g2[i];
    return out;
  };
  auto a = gf(true), b = gf(false);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
}

TEST_CASE("reset reuses the arena and reproduces results bitwise") {
  Rng rng(55);
  auto px = rand_vec(rng, 30, -1.0, 1.0);
  Tape t;
  std::vector<double> g1, g2;
  for (int pass = 0; pass < 2; ++pass) {
    t.reset();
    Value p = t.leaf(px.data(), 6, 5, true);
    Value q = t.leaf(px.data(), 5, 6, false);
    Value loss = t.mean(t.square(t.tanh(t.matmul(p, q))));
    t.backward(loss);
    auto g = t.grad(p);
    (pass == 0 ? g1 : g2).assign(g.begin(), g.end());
  }
  CHECK(std::memcmp(g1.data(), g2.data(), g1.size() * sizeof(double)) == 0);
}

TEST_CASE("constant losses yield zero gradients without error") {
  Tape t;
  Value p = t.leaf(Matrix::scalar(2.0), true);
  Value c = t.leaf(Matrix::scalar(4.0), false);
  t.backward(t.square(c));  // no gradient path to p
  CHECK(t.grad(p)[0] == 0.0);
}

TEST_CASE("backends agree on values and gradients within tolerance") {
  if (!kernels::cpu_supports_avx2()) {
    MESSAGE("AVX2 not available; skipping");
    return;
  }
  Rng rng(777);
  auto px = rand_vec(rng, 64, -1.0, 1.0);

  const auto run = [&](const kernels::Backend& bk, std::vector<double>& grad) {
    Tape t(bk);
    Value p = t.leaf(px.data(), 8, 8, true);
    Value h = t.tanh(t.matmul(p, p));
    Value loss = t.mean(t.square(h)) + t.mean(t.exp(t.mul(h, t.scalar(0.25))));
    t.backward(loss);
    grad.assign(t.grad(p).begin(), t.grad(p).end());
    return t.item(loss);
  };
  std::vector<double> gs, gv;
  const double ls = run(kernels::scalar_backend(), gs);
  const double lv = run(kernels::avx2_backend(), gv);
  CHECK(ls == doctest::Approx(lv).epsilon(1e-13));
  for (std::size_t i = 0; i < gs.size(); ++i)
    CHECK(gs[i] == doctest::Approx(gv[i]).epsilon(1e-11));
}

}  // TEST_SUITE
