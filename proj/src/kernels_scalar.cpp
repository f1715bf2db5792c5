#include "l2cut/kernels.hpp"

#include <cmath>

namespace l2cut::kernels {

double exp_floor(double x) { return x < -708.0 ? 0.0 : std::exp(x); }

namespace scalar {

SumExp sum_exp(const double* rates, const double* weights, std::size_t n,
               double t) {
  double value = 0.0;
  double slope = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = weights[i] * exp_floor(-t * rates[i]);
    value += e;
    slope -= e * rates[i];
  }
  return {value, slope};
}

void exp_terms(const double* rates, const double* weights, std::size_t n,
               double t, double* out) {
  for (std::size_t i = 0; i < n; ++i)
    out[i] = weights[i] * exp_floor(-t * rates[i]);
}

void rotate_rows(double* x, double* y, std::size_t n, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  for (std::size_t i = 0; i < n * n; ++i) c[i] = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      axpy(a[i * n + k], b + k * n, c + i * n, n);
}

}  // namespace scalar
}  // namespace l2cut::kernels
