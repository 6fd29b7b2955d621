#include "cshv/kernels.hpp"

#include <immintrin.h>

#include <cstdint>
#include <limits>

// AVX2/FMA variants of the field kernels.  sum/dot/axpy/scal/shift/mul are
// bit-identical to the scalar reference (same partial-sum layout, no FMA
// contraction in the reductions); vexp uses a rational polynomial and is
// accurate to a few ulp of std::exp.

namespace cshv::kernels {

namespace {

double reduce4(__m256d acc, const double* tail, std::size_t ntail) {
  alignas(32) double p[4];
  _mm256_store_pd(p, acc);
  for (std::size_t i = 0; i < ntail; ++i) p[0] += tail[i];
  return (p[0] + p[1]) + (p[2] + p[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return reduce4(acc, x + i, n - i);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double p[4];
  _mm256_store_pd(p, acc);
  for (; i < n; ++i) p[0] += x[i] * y[i];
  return (p[0] + p[1]) + (p[2] + p[3]);
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scal_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

void shift_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_add_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] += a;
}

void mul_avx2(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

// exp(x) = 2^n * expm(r), x = n ln2 + r, |r| <= ln2/2, with the classic
// rational approximation expm(r) = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)).
// Inputs above 709 map to +inf, below -708 to 0 (denormal results are
// flushed; fields in this code base never leave |u| <= a few hundred).
__m256d exp4(__m256d x) {
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  __m256d nf = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  // r = x - n ln2 in two pieces to keep the reduction exact
  __m256d r = _mm256_fnmadd_pd(nf, c1, xc);
  r = _mm256_fnmadd_pd(nf, c2, r);

  __m256d rr = _mm256_mul_pd(r, r);
  __m256d px = _mm256_fmadd_pd(p0, rr, p1);
  px = _mm256_fmadd_pd(px, rr, p2);
  px = _mm256_mul_pd(px, r);
  __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
  qx = _mm256_fmadd_pd(qx, rr, q2);
  qx = _mm256_fmadd_pd(qx, rr, q3);
  __m256d e = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  __m256d y = _mm256_fmadd_pd(two, e, one);

  // scale by 2^n through the exponent bits; n is within [-1022, 1023] here
  __m128i n32 = _mm256_cvtpd_epi32(nf);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  y = _mm256_mul_pd(y, _mm256_castsi256_pd(bits));

  y = _mm256_blendv_pd(y, _mm256_set1_pd(std::numeric_limits<double>::infinity()), over);
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), under);
  return y;
}

void vexp_avx2(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  if (i < n) {
    alignas(32) double buf[4] = {0, 0, 0, 0};
    for (std::size_t k = i; k < n; ++k) buf[k - i] = x[k];
    alignas(32) double res[4];
    _mm256_store_pd(res, exp4(_mm256_load_pd(buf)));
    for (std::size_t k = i; k < n; ++k) out[k] = res[k - i];
  }
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {"avx2",    sum_avx2,   dot_avx2, axpy_avx2,
                          scal_avx2, shift_avx2, mul_avx2, vexp_avx2};
  return &ops;
}

}  // namespace cshv::kernels
