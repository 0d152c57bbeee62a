#pragma once
#include <cstddef>

namespace pigan::kernels {

// Data-parallel inner loops behind the tape and the evaluators. Two
// implementations exist: a scalar reference (compiled with fp-contract off,
// fixed summation order) and an AVX2+FMA variant selected at runtime on
// x86-64. Elementwise entries of the two variants are bit-identical;
// reductions and fused multiply-add paths agree to a few ulp and are
// equivalence-tested against the scalar reference.
//
// All matrices are dense row-major.
struct Backend {
  const char* name;

  // reductions / vector ops
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);  // y += alpha*x
  void (*scale)(double alpha, const double* x, double* y, std::size_t n); // y  = alpha*x

  // elementwise, out may alias inputs
  void (*ew_add)(const double* a, const double* b, double* o, std::size_t n);
  void (*ew_sub)(const double* a, const double* b, double* o, std::size_t n);
  void (*ew_mul)(const double* a, const double* b, double* o, std::size_t n);
  void (*ew_div)(const double* a, const double* b, double* o, std::size_t n);
  void (*ew_neg)(const double* a, double* o, std::size_t n);
  void (*ew_square)(const double* a, double* o, std::size_t n);
  void (*ew_acc_mul)(const double* a, const double* b, double* o, std::size_t n); // o += a*b
  // scalar-broadcast forms
  void (*ew_adds)(const double* a, double c, double* o, std::size_t n);  // o = a + c
  void (*ew_rsubs)(const double* a, double c, double* o, std::size_t n); // o = c - a
  void (*ew_divs)(const double* a, double c, double* o, std::size_t n);  // o = a / c
  void (*ew_rdivs)(const double* a, double c, double* o, std::size_t n); // o = c / a
  // transcendentals
  void (*ew_tanh)(const double* a, double* o, std::size_t n);
  void (*ew_exp)(const double* a, double* o, std::size_t n);

  // C(m x n) += A(m x k) * B(k x n)
  void (*gemm_nn_acc)(const double* A, const double* B, double* C,
                      std::size_t m, std::size_t k, std::size_t n);
  // C(m x n) (+)= A(m x k) * B(n x k)^T
  void (*gemm_nt)(const double* A, const double* B, double* C,
                  std::size_t m, std::size_t k, std::size_t n, bool accumulate);
  // C(k x n) += A(m x k)^T * B(m x n)
  void (*gemm_tn_acc)(const double* A, const double* B, double* C,
                      std::size_t m, std::size_t k, std::size_t n);
  // out(n) += column sums of A(m x n)
  void (*colsum_acc)(const double* A, double* out, std::size_t m, std::size_t n);
};

const Backend& scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
#endif

bool cpu_supports_avx2();

// Runtime-selected backend: AVX2 when the CPU supports it, the scalar
// reference otherwise. PIGAN_KERNELS=scalar|avx2 in the environment
// overrides the choice at first use.
const Backend& active();
void set_active(const Backend& b);  // for tests and benchmarks

}  // namespace pigan::kernels
