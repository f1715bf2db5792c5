#include "l2cut/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

// NEON variants for aarch64 builds. Same algorithm and flush rule as the
// AVX2 path; see kernels_avx2.cpp for the derivation.

namespace l2cut::kernels::neon {

namespace {

inline float64x2_t exp_f64(float64x2_t x) {
  const float64x2_t log2e = vdupq_n_f64(1.4426950408889634073599);
  const float64x2_t ln2_hi = vdupq_n_f64(6.93145751953125e-1);
  const float64x2_t ln2_lo = vdupq_n_f64(1.42860682030941723212e-6);
  const float64x2_t p0 = vdupq_n_f64(1.26177193074810590878e-4);
  const float64x2_t p1 = vdupq_n_f64(3.02994407707441961300e-2);
  const float64x2_t p2 = vdupq_n_f64(9.99999999999999999910e-1);
  const float64x2_t q0 = vdupq_n_f64(3.00198505138664455042e-6);
  const float64x2_t q1 = vdupq_n_f64(2.52448340349684104192e-3);
  const float64x2_t q2 = vdupq_n_f64(2.27265548208155028766e-1);
  const float64x2_t q3 = vdupq_n_f64(2.00000000000000000005e0);
  const float64x2_t lo = vdupq_n_f64(-708.0);
  const float64x2_t hi = vdupq_n_f64(709.0);

  const uint64x2_t underflow = vcltq_f64(x, lo);
  const float64x2_t xc = vminq_f64(vmaxq_f64(x, lo), hi);

  const float64x2_t k = vrndnq_f64(vmulq_f64(xc, log2e));
  float64x2_t r = vfmsq_f64(xc, k, ln2_hi);
  r = vfmsq_f64(r, k, ln2_lo);

  const float64x2_t z = vmulq_f64(r, r);
  float64x2_t p = vfmaq_f64(p1, p0, z);
  p = vfmaq_f64(p2, p, z);
  p = vmulq_f64(p, r);
  float64x2_t q = vfmaq_f64(q1, q0, z);
  q = vfmaq_f64(q2, q, z);
  q = vfmaq_f64(q3, q, z);
  float64x2_t e = vdivq_f64(p, vsubq_f64(q, p));
  e = vfmaq_f64(vdupq_n_f64(1.0), vdupq_n_f64(2.0), e);

  const int64x2_t k64 = vcvtq_s64_f64(k);
  const int64x2_t bits = vshlq_n_s64(vaddq_s64(k64, vdupq_n_s64(1023)), 52);
  e = vmulq_f64(e, vreinterpretq_f64_s64(bits));

  return vbslq_f64(underflow, vdupq_n_f64(0.0), e);
}

inline double hsum(float64x2_t v) { return vaddvq_f64(v); }

}  // namespace

SumExp sum_exp(const double* rates, const double* weights, std::size_t n,
               double t) {
  const float64x2_t vt = vdupq_n_f64(t);
  float64x2_t acc_v = vdupq_n_f64(0.0);
  float64x2_t acc_s = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(rates + i);
    const float64x2_t w = vld1q_f64(weights + i);
    const float64x2_t e = exp_f64(vnegq_f64(vmulq_f64(vt, r)));
    const float64x2_t we = vmulq_f64(w, e);
    acc_v = vaddq_f64(acc_v, we);
    acc_s = vfmsq_f64(acc_s, we, r);
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
  const float64x2_t vt = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(rates + i);
    const float64x2_t w = vld1q_f64(weights + i);
    vst1q_f64(out + i, vmulq_f64(w, exp_f64(vnegq_f64(vmulq_f64(vt, r)))));
  }
  for (; i < n; ++i) out[i] = weights[i] * exp_floor(-t * rates[i]);
}

void rotate_rows(double* x, double* y, std::size_t n, double c, double s) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t xi = vld1q_f64(x + i);
    const float64x2_t yi = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, xi), vs, yi));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, yi), vs, xi));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      axpy(a[i * n + k], b + k * n, c + i * n, n);
}

}  // namespace l2cut::kernels::neon
