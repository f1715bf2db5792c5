#pragma once

#include <cstddef>
#include <span>

// Data-parallel inner loops shared by the measure code, the eigensolver and
// the dense matrix routines. Each kernel has a scalar reference
// implementation; on x86-64 an AVX2+FMA variant is selected at runtime when
// the CPU supports it, and on aarch64 builds a NEON variant is used. The
// vector variants are equivalence-tested against the scalar reference.

namespace l2cut::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Backend used by subsequent kernel calls. Defaults to the widest
// instruction set available on the running CPU.
Backend active_backend();

// Force a backend. Returns false (and leaves the selection unchanged) if the
// requested backend is not available in this build/CPU. Scalar always works.
bool set_backend(Backend b);

const char* backend_name(Backend b);

struct SumExp {
  double value;  // sum_i w[i] * exp(-t * r[i])
  double slope;  // d/dt of value = -sum_i w[i] * r[i] * exp(-t * r[i])
};

// Weighted exponential sum and its t-derivative in one pass. Terms with
// t * r[i] > 708 are flushed to exact zero (they are below ~3e-308); the
// flush rule is part of the kernel contract so all backends agree on which
// terms vanish.
SumExp sum_exp(std::span<const double> rates, std::span<const double> weights,
               double t);

// out[i] = w[i] * exp(-t * r[i]), same flush rule as sum_exp.
void exp_terms(std::span<const double> rates, std::span<const double> weights,
               double t, std::span<double> out);

// Scalar exp with the shared flush rule: x < -708 -> 0.
double exp_floor(double x);

// Plane rotation of two rows: x <- c*x - s*y, y <- s*x + c*y.
void rotate_rows(double* x, double* y, std::size_t n, double c, double s);

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);

// Row-major product c = a * b for n-by-n matrices; c must not alias a or b.
void matmul(const double* a, const double* b, double* c, std::size_t n);

}  // namespace l2cut::kernels
