// Scalar reference kernels. This translation unit is compiled with
// -ffp-contract=off so the reference semantics are plain IEEE ops in a fixed
// left-to-right order; the SIMD variants are tested against these.
#include <cmath>
#include <cstring>

#include "pigan/kernels.hpp"

namespace pigan::kernels {
namespace {

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double s_sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

void s_axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void s_scale(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i];
}

void s_add(const double* a, const double* b, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] + b[i];
}
void s_sub(const double* a, const double* b, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] - b[i];
}
void s_mul(const double* a, const double* b, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] * b[i];
}
void s_div(const double* a, const double* b, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] / b[i];
}
void s_neg(const double* a, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = -a[i];
}
void s_square(const double* a, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] * a[i];
}
void s_acc_mul(const double* a, const double* b, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] += a[i] * b[i];
}
void s_adds(const double* a, double c, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] + c;
}
void s_rsubs(const double* a, double c, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = c - a[i];
}
void s_divs(const double* a, double c, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = a[i] / c;
}
void s_rdivs(const double* a, double c, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = c / a[i];
}
void s_tanh(const double* a, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = std::tanh(a[i]);
}
void s_exp(const double* a, double* o, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) o[i] = std::exp(a[i]);
}

void s_gemm_nn_acc(const double* A, const double* B, double* C,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* ci = C + i * n;
    const double* ai = A + i * k;
    for (std::size_t p = 0; p < k; ++p) {
      const double a = ai[p];
      const double* bp = B + p * n;
      for (std::size_t j = 0; j < n; ++j) ci[j] += a * bp[j];
    }
  }
}

void s_gemm_nt(const double* A, const double* B, double* C,
               std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * k;
    double* ci = C + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = s_dot(ai, B + j * k, k);
      ci[j] = accumulate ? ci[j] + d : d;
    }
  }
}

void s_gemm_tn_acc(const double* A, const double* B, double* C,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * k;
    const double* bi = B + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double a = ai[p];
      double* cp = C + p * n;
      for (std::size_t j = 0; j < n; ++j) cp[j] += a * bi[j];
    }
  }
}

void s_colsum_acc(const double* A, double* out, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += ai[j];
  }
}

const Backend kScalar = {
    "scalar",
    s_dot, s_sum, s_axpy, s_scale,
    s_add, s_sub, s_mul, s_div, s_neg, s_square, s_acc_mul,
    s_adds, s_rsubs, s_divs, s_rdivs,
    s_tanh, s_exp,
    s_gemm_nn_acc, s_gemm_nt, s_gemm_tn_acc, s_colsum_acc,
};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

}  // namespace pigan::kernels
