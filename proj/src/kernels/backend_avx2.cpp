// AVX2+FMA kernels. Compiled with -mavx2 -mfma; only reachable through the
// runtime dispatcher, which checks CPU support first.
#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <cstring>

#include "pigan/kernels.hpp"

namespace pigan::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

// [sum(v0), sum(v1), sum(v2), sum(v3)]
inline __m256d hsum4(__m256d v0, __m256d v1, __m256d v2, __m256d v3) {
  __m256d t0 = _mm256_hadd_pd(v0, v1);  // [a01 b01 a23 b23]
  __m256d t1 = _mm256_hadd_pd(v2, v3);  // [c01 d01 c23 d23]
  __m256d lo = _mm256_permute2f128_pd(t0, t1, 0x20);
  __m256d hi = _mm256_permute2f128_pd(t0, t1, 0x31);
  return _mm256_add_pd(lo, hi);
}

inline __m256i tail_mask(std::size_t rem) {
  static const std::int64_t kBits[8] = {-1, -1, -1, -1, 0, 0, 0, 0};
  return _mm256_loadu_si256(
      reinterpret_cast<const __m256i*>(kBits + (4 - rem)));
}

double a_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd(), acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  acc0 = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  double r = hsum(acc0);
  for (; i < n; ++i) r += a[i] * b[i];
  return r;
}

double a_sum(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double r = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) r += x[i];
  return r;
}

void a_axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4,
                     _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void a_scale(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] = alpha * x[i];
}

#define PIGAN_EW_BINOP(NAME, VEXPR, SEXPR)                                   \
  void NAME(const double* a, const double* b, double* o, std::size_t n) {    \
    std::size_t i = 0;                                                       \
    for (; i + 4 <= n; i += 4) {                                             \
      __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);      \
      _mm256_storeu_pd(o + i, VEXPR);                                        \
    }                                                                        \
    for (; i < n; ++i) o[i] = SEXPR;                                         \
  }

PIGAN_EW_BINOP(a_add, _mm256_add_pd(va, vb), a[i] + b[i])
PIGAN_EW_BINOP(a_sub, _mm256_sub_pd(va, vb), a[i] - b[i])
PIGAN_EW_BINOP(a_mul, _mm256_mul_pd(va, vb), a[i] * b[i])
PIGAN_EW_BINOP(a_div, _mm256_div_pd(va, vb), a[i] / b[i])
#undef PIGAN_EW_BINOP

void a_neg(const double* a, double* o, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(o + i, _mm256_xor_pd(_mm256_loadu_pd(a + i), sign));
  for (; i < n; ++i) o[i] = -a[i];
}

void a_square(const double* a, double* o, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(a + i);
    _mm256_storeu_pd(o + i, _mm256_mul_pd(v, v));
  }
  for (; i < n; ++i) o[i] = a[i] * a[i];
}

void a_acc_mul(const double* a, const double* b, double* o, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(
        o + i, _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                               _mm256_loadu_pd(o + i)));
  }
  for (; i < n; ++i) o[i] += a[i] * b[i];
}

#define PIGAN_EW_SCALOP(NAME, VEXPR, SEXPR)                                  \
  void NAME(const double* a, double c, double* o, std::size_t n) {           \
    const __m256d vc = _mm256_set1_pd(c);                                    \
    std::size_t i = 0;                                                       \
    for (; i + 4 <= n; i += 4) {                                             \
      __m256d va = _mm256_loadu_pd(a + i);                                   \
      _mm256_storeu_pd(o + i, VEXPR);                                        \
    }                                                                        \
    for (; i < n; ++i) o[i] = SEXPR;                                         \
  }

PIGAN_EW_SCALOP(a_adds, _mm256_add_pd(va, vc), a[i] + c)
PIGAN_EW_SCALOP(a_rsubs, _mm256_sub_pd(vc, va), c - a[i])
PIGAN_EW_SCALOP(a_divs, _mm256_div_pd(va, vc), a[i] / c)
PIGAN_EW_SCALOP(a_rdivs, _mm256_div_pd(vc, va), c / a[i])
#undef PIGAN_EW_SCALOP

// ---------------------------------------------------------------------------
// Vector exp/tanh.
//
// exp: Cody-Waite range reduction x = n*ln2 + r, |r| <= ln2/2, degree-13
// Taylor core (truncation < 5e-18 relative), 2^n applied as 2^(n/2) twice so
// n = 1024 stays finite and subnormal outputs keep gradual underflow.
// ---------------------------------------------------------------------------

inline __m256d exp4(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d upper = _mm256_set1_pd(709.782712893383996);
  const __m256d lower = _mm256_set1_pd(-745.133219101941222);

  __m256d big = _mm256_cmp_pd(x, upper, _CMP_GT_OQ);
  __m256d small = _mm256_cmp_pd(x, lower, _CMP_LT_OQ);
  __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lower), upper);

  __m256d nf = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(nf, ln2_hi, xc);
  r = _mm256_fnmadd_pd(nf, ln2_lo, r);

  // exp(r) = 1 + r + r^2/2! + ... + r^13/13!
  __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m128i n32 = _mm256_cvtpd_epi32(nf);
  const __m128i n1 = _mm_srai_epi32(n32, 1);  // floor(n/2)
  const __m128i n2 = _mm_sub_epi32(n32, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256i e1 =
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52);
  const __m256i e2 =
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52);
  p = _mm256_mul_pd(_mm256_mul_pd(p, _mm256_castsi256_pd(e1)),
                    _mm256_castsi256_pd(e2));

  p = _mm256_blendv_pd(p, _mm256_setzero_pd(), small);
  p = _mm256_blendv_pd(p, _mm256_set1_pd(HUGE_VAL), big);
  p = _mm256_blendv_pd(p, x, nan);
  return p;
}

// tanh(x) = sign(x) * (1 - t) / (1 + t) with t = exp(-2|x|). For |x| < 0.25
// the numerator is formed from expm1(-2|x|) by series to avoid the 1 - t
// cancellation. Agrees with std::tanh to a few ulp; exact at +-0.
inline __m256d tanh4(__m256d x) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d sign = _mm256_and_pd(x, sign_mask);
  __m256d a = _mm256_andnot_pd(sign_mask, x);
  __m256d y = _mm256_mul_pd(a, _mm256_set1_pd(-2.0));  // in [-inf, 0]

  __m256d t = exp4(y);

  // expm1(y) by series, valid on y in [-0.5, 0]
  __m256d q = _mm256_set1_pd(1.0 / 1307674368000.0);  // 1/15!
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 87178291200.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 6227020800.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 479001600.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 39916800.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 3628800.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 362880.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 40320.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 5040.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 720.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 120.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 24.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0 / 6.0));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(0.5));
  q = _mm256_fmadd_pd(q, y, _mm256_set1_pd(1.0));
  q = _mm256_mul_pd(q, y);

  const __m256d one = _mm256_set1_pd(1.0);
  __m256d use_series = _mm256_cmp_pd(a, _mm256_set1_pd(0.25), _CMP_LT_OQ);
  __m256d num = _mm256_blendv_pd(_mm256_sub_pd(one, t), _mm256_sub_pd(_mm256_setzero_pd(), q),
                                 use_series);
  __m256d den = _mm256_blendv_pd(_mm256_add_pd(one, t),
                                 _mm256_add_pd(_mm256_set1_pd(2.0), q), use_series);
  __m256d r = _mm256_div_pd(num, den);
  return _mm256_or_pd(r, sign);
}

void a_tanh(const double* a, double* o, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(o + i, tanh4(_mm256_loadu_pd(a + i)));
    _mm256_storeu_pd(o + i + 4, tanh4(_mm256_loadu_pd(a + i + 4)));
  }
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(o + i, tanh4(_mm256_loadu_pd(a + i)));
  if (i < n) {
    double buf_in[4] = {0, 0, 0, 0}, buf_out[4];
    std::memcpy(buf_in, a + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(buf_out, tanh4(_mm256_loadu_pd(buf_in)));
    std::memcpy(o + i, buf_out, (n - i) * sizeof(double));
  }
}

void a_exp(const double* a, double* o, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(o + i, exp4(_mm256_loadu_pd(a + i)));
    _mm256_storeu_pd(o + i + 4, exp4(_mm256_loadu_pd(a + i + 4)));
  }
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(o + i, exp4(_mm256_loadu_pd(a + i)));
  if (i < n) {
    double buf_in[4] = {0, 0, 0, 0}, buf_out[4];
    std::memcpy(buf_in, a + i, (n - i) * sizeof(double));
    _mm256_storeu_pd(buf_out, exp4(_mm256_loadu_pd(buf_in)));
    std::memcpy(o + i, buf_out, (n - i) * sizeof(double));
  }
}

// ---------------------------------------------------------------------------
// GEMM kernels
// ---------------------------------------------------------------------------

void a_gemm_nn_acc(const double* A, const double* B, double* C,
                   std::size_t m, std::size_t k, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * k;
    double* ci = C + i * n;
    std::size_t p = 0;
    for (; p + 2 <= k; p += 2) {
      const __m256d a0 = _mm256_set1_pd(ai[p]);
      const __m256d a1 = _mm256_set1_pd(ai[p + 1]);
      const double* b0 = B + p * n;
      const double* b1 = B + (p + 1) * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d c = _mm256_loadu_pd(ci + j);
        c = _mm256_fmadd_pd(a0, _mm256_loadu_pd(b0 + j), c);
        c = _mm256_fmadd_pd(a1, _mm256_loadu_pd(b1 + j), c);
        _mm256_storeu_pd(ci + j, c);
      }
      for (; j < n; ++j) ci[j] += ai[p] * b0[j] + ai[p + 1] * b1[j];
    }
    for (; p < k; ++p) a_axpy(ai[p], B + p * n, ci, n);
  }
}

void a_gemm_nt(const double* A, const double* B, double* C,
               std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  const std::size_t krem = k % 4;
  const __m256i kmask = krem ? tail_mask(krem) : _mm256_setzero_si256();
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * k;
    double* ci = C + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const double* b0 = B + j * k;
      const double* b1 = B + (j + 1) * k;
      const double* b2 = B + (j + 2) * k;
      const double* b3 = B + (j + 3) * k;
      __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
      __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
      std::size_t kk = 0;
      for (; kk + 4 <= k; kk += 4) {
        const __m256d xv = _mm256_loadu_pd(ai + kk);
        s0 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(b0 + kk), s0);
        s1 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(b1 + kk), s1);
        s2 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(b2 + kk), s2);
        s3 = _mm256_fmadd_pd(xv, _mm256_loadu_pd(b3 + kk), s3);
      }
      if (krem) {
        const __m256d xv = _mm256_maskload_pd(ai + kk, kmask);
        s0 = _mm256_fmadd_pd(xv, _mm256_maskload_pd(b0 + kk, kmask), s0);
        s1 = _mm256_fmadd_pd(xv, _mm256_maskload_pd(b1 + kk, kmask), s1);
        s2 = _mm256_fmadd_pd(xv, _mm256_maskload_pd(b2 + kk, kmask), s2);
        s3 = _mm256_fmadd_pd(xv, _mm256_maskload_pd(b3 + kk, kmask), s3);
      }
      __m256d res = hsum4(s0, s1, s2, s3);
      if (accumulate) res = _mm256_add_pd(res, _mm256_loadu_pd(ci + j));
      _mm256_storeu_pd(ci + j, res);
    }
    for (; j < n; ++j) {
      const double d = a_dot(ai, B + j * k, k);
      ci[j] = accumulate ? ci[j] + d : d;
    }
  }
}

void a_gemm_tn_acc(const double* A, const double* B, double* C,
                   std::size_t m, std::size_t k, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* a0 = A + i * k;
    const double* a1 = A + (i + 1) * k;
    const double* b0 = B + i * n;
    const double* b1 = B + (i + 1) * n;
    for (std::size_t p = 0; p < k; ++p) {
      const __m256d w0 = _mm256_set1_pd(a0[p]);
      const __m256d w1 = _mm256_set1_pd(a1[p]);
      double* cp = C + p * n;
      std::size_t j = 0;
      for (; j + 4 <= n; j += 4) {
        __m256d c = _mm256_loadu_pd(cp + j);
        c = _mm256_fmadd_pd(w0, _mm256_loadu_pd(b0 + j), c);
        c = _mm256_fmadd_pd(w1, _mm256_loadu_pd(b1 + j), c);
        _mm256_storeu_pd(cp + j, c);
      }
      for (; j < n; ++j) cp[j] += a0[p] * b0[j] + a1[p] * b1[j];
    }
  }
  for (; i < m; ++i) {
    const double* ai = A + i * k;
    const double* bi = B + i * n;
    for (std::size_t p = 0; p < k; ++p) a_axpy(ai[p], bi, C + p * n, n);
  }
}

void a_colsum_acc(const double* A, double* out, std::size_t m, std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ai = A + i * n;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4)
      _mm256_storeu_pd(out + j, _mm256_add_pd(_mm256_loadu_pd(out + j), _mm256_loadu_pd(ai + j)));
    for (; j < n; ++j) out[j] += ai[j];
  }
}

const Backend kAvx2 = {
    "avx2",
    a_dot, a_sum, a_axpy, a_scale,
    a_add, a_sub, a_mul, a_div, a_neg, a_square, a_acc_mul,
    a_adds, a_rsubs, a_divs, a_rdivs,
    a_tanh, a_exp,
    a_gemm_nn_acc, a_gemm_nt, a_gemm_tn_acc, a_colsum_acc,
};

}  // namespace

const Backend& avx2_backend() { return kAvx2; }

}  // namespace pigan::kernels
