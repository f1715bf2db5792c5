#include "l2cut/kernels.hpp"

#include <immintrin.h>

#include <cmath>

// AVX2+FMA variants. Compiled only when the toolchain supports -mavx2 -mfma;
// selected at runtime via cpuid (see kernels_dispatch.cpp).

namespace l2cut::kernels::avx2 {

namespace {

// Vector exp for the range [-708, 709] with the shared flush rule
// (x < -708 -> 0). Range reduction x = k*ln2 + r followed by the classic
// rational approximation exp(r) = 1 + 2p/(q - p) with p = r*P(r^2),
// q = Q(r^2); agrees with a correctly rounded exp to ~2 ulp.
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);

  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                    _MM_FROUND_TO_NEAREST_INT |
                                        _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, xc);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  const __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_fmadd_pd(p0, z, p1);
  p = _mm256_fmadd_pd(p, z, p2);
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_fmadd_pd(q0, z, q1);
  q = _mm256_fmadd_pd(q, z, q2);
  q = _mm256_fmadd_pd(q, z, q3);
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

  // scale by 2^k through the exponent field; k is in [-1022, 1023] here
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  const __m256i k64 = _mm256_cvtepi32_epi64(k32);
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(k64, _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));

  return _mm256_andnot_pd(underflow, e);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

SumExp sum_exp(const double* rates, const double* weights, std::size_t n,
               double t) {
  const __m256d vt = _mm256_set1_pd(t);
  __m256d acc_v = _mm256_setzero_pd();
  __m256d acc_s = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(rates + i);
    const __m256d w = _mm256_loadu_pd(weights + i);
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(),
                                           _mm256_mul_pd(vt, r)));
    const __m256d we = _mm256_mul_pd(w, e);
    acc_v = _mm256_add_pd(acc_v, we);
    acc_s = _mm256_fnmadd_pd(we, r, acc_s);
  }
  double value = hsum(acc_v);
  double slope = hsum(acc_s);
  for (; i < n; ++i) {
    const double e = weights[i] * exp_floor(-t * rates[i]);
    value += e;
    slope -= e * rates[i];
  }
  return {value, slope};
}

void exp_terms(const double* rates, const double* weights, std::size_t n,
               double t, double* out) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(rates + i);
    const __m256d w = _mm256_loadu_pd(weights + i);
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_setzero_pd(),
                                           _mm256_mul_pd(vt, r)));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(w, e));
  }
  for (; i < n; ++i) out[i] = weights[i] * exp_floor(-t * rates[i]);
}

void rotate_rows(double* x, double* y, std::size_t n, double c, double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xi = _mm256_loadu_pd(x + i);
    const __m256d yi = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fnmadd_pd(vs, yi, _mm256_mul_pd(vc, xi)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, xi, _mm256_mul_pd(vc, yi)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      axpy(a[i * n + k], b + k * n, c + i * n, n);
}

}  // namespace l2cut::kernels::avx2
