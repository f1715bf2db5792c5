#include "l2cut/kernels.hpp"

namespace l2cut::kernels {

namespace scalar {
SumExp sum_exp(const double*, const double*, std::size_t, double);
void exp_terms(const double*, const double*, std::size_t, double, double*);
void rotate_rows(double*, double*, std::size_t, double, double);
void axpy(double, const double*, double*, std::size_t);
void matmul(const double*, const double*, double*, std::size_t);
}  // namespace scalar

#if defined(L2CUT_BUILD_AVX2)
namespace avx2 {
SumExp sum_exp(const double*, const double*, std::size_t, double);
void exp_terms(const double*, const double*, std::size_t, double, double*);
void rotate_rows(double*, double*, std::size_t, double, double);
void axpy(double, const double*, double*, std::size_t);
void matmul(const double*, const double*, double*, std::size_t);
}  // namespace avx2
#endif

#if defined(L2CUT_BUILD_NEON)
namespace neon {
SumExp sum_exp(const double*, const double*, std::size_t, double);
void exp_terms(const double*, const double*, std::size_t, double, double*);
void rotate_rows(double*, double*, std::size_t, double, double);
void axpy(double, const double*, double*, std::size_t);
void matmul(const double*, const double*, double*, std::size_t);
}  // namespace neon
#endif

namespace {

struct Vtable {
  SumExp (*sum_exp)(const double*, const double*, std::size_t, double);
  void (*exp_terms)(const double*, const double*, std::size_t, double,
                    double*);
  void (*rotate_rows)(double*, double*, std::size_t, double, double);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*matmul)(const double*, const double*, double*, std::size_t);
};

constexpr Vtable kScalar{scalar::sum_exp, scalar::exp_terms,
                         scalar::rotate_rows, scalar::axpy, scalar::matmul};
#if defined(L2CUT_BUILD_AVX2)
constexpr Vtable kAvx2{avx2::sum_exp, avx2::exp_terms, avx2::rotate_rows,
                       avx2::axpy, avx2::matmul};
#endif
#if defined(L2CUT_BUILD_NEON)
constexpr Vtable kNeon{neon::sum_exp, neon::exp_terms, neon::rotate_rows,
                       neon::axpy, neon::matmul};
#endif

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(L2CUT_BUILD_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Backend::Neon:
#if defined(L2CUT_BUILD_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend default_backend() {
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const Vtable* table_for(Backend b) {
  switch (b) {
#if defined(L2CUT_BUILD_AVX2)
    case Backend::Avx2:
      return &kAvx2;
#endif
#if defined(L2CUT_BUILD_NEON)
    case Backend::Neon:
      return &kNeon;
#endif
    default:
      return &kScalar;
  }
}

Backend g_backend = default_backend();
const Vtable* g_table = table_for(g_backend);

}  // namespace

Backend active_backend() { return g_backend; }

bool set_backend(Backend b) {
  if (!backend_available(b)) return false;
  g_backend = b;
  g_table = table_for(b);
  return true;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "?";
}

SumExp sum_exp(std::span<const double> rates, std::span<const double> weights,
               double t) {
  return g_table->sum_exp(rates.data(), weights.data(), rates.size(), t);
}

void exp_terms(std::span<const double> rates, std::span<const double> weights,
               double t, std::span<double> out) {
  g_table->exp_terms(rates.data(), weights.data(), rates.size(), t,
                     out.data());
}

void rotate_rows(double* x, double* y, std::size_t n, double c, double s) {
  g_table->rotate_rows(x, y, n, c, s);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  g_table->axpy(a, x, y, n);
}

void matmul(const double* a, const double* b, double* c, std::size_t n) {
  g_table->matmul(a, b, c, n);
}

}  // namespace l2cut::kernels
