#include "l2cut/kernels.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

using namespace l2cut;

namespace {

struct BackendGuard {
  kernels::Backend saved;
  BackendGuard() : saved(kernels::active_backend()) {}
  ~BackendGuard() { kernels::set_backend(saved); }
};

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n, double lo,
                               double hi) {
  std::vector<double> v(n);
  for (double& x : v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = lo + u * (hi - lo);
  }
  return v;
}

}  // namespace

TEST_CASE("sum_exp matches a plain loop on the scalar backend") {
  BackendGuard guard;
  REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
  std::mt19937_64 rng(7);
  const auto r = random_vec(rng, 33, 1e-3, 1e3);
  const auto w = random_vec(rng, 33, 1e-6, 1e6);
  for (double t : {0.0, 0.01, 1.0, 40.0}) {
    double want = 0.0, want_slope = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double e = w[i] * std::exp(-t * r[i]);
      want += e;
      want_slope -= e * r[i];
    }
    const auto got = kernels::sum_exp(r, w, t);
    CHECK(got.value == doctest::Approx(want).epsilon(1e-13));
    CHECK(got.slope == doctest::Approx(want_slope).epsilon(1e-13));
  }
}

TEST_CASE("vector backends agree with the scalar reference") {
  BackendGuard guard;
  std::vector<kernels::Backend> vector_backends;
  for (auto b : {kernels::Backend::Avx2, kernels::Backend::Neon})
    if (kernels::set_backend(b)) vector_backends.push_back(b);
  if (vector_backends.empty()) return;  // scalar-only build

  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 50; ++iter) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 130);
    const auto r = random_vec(rng, n, 1e-3, 1e3);
    const auto w = random_vec(rng, n, 1e-6, 1e6);
    const double t =
        static_cast<double>(rng() % 1000) / 997.0 * 0.5 / 1e-3;  // up to ~500/1e-3? keep moderate
    const double tt = t * 1e-3;  // keeps exponents in a sane range

    REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
    const auto ref = kernels::sum_exp(r, w, tt);
    std::vector<double> ref_terms(n);
    kernels::exp_terms(r, w, tt, ref_terms);

    for (auto b : vector_backends) {
      REQUIRE(kernels::set_backend(b));
      const auto got = kernels::sum_exp(r, w, tt);
      CHECK(got.value == doctest::Approx(ref.value).epsilon(1e-13));
      CHECK(got.slope == doctest::Approx(ref.slope).epsilon(1e-13));
      std::vector<double> terms(n);
      kernels::exp_terms(r, w, tt, terms);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(terms[i] == doctest::Approx(ref_terms[i]).epsilon(2e-13));
    }
  }
}

TEST_CASE("vector exp accuracy against std::exp") {
  BackendGuard guard;
  std::vector<kernels::Backend> vector_backends;
  for (auto b : {kernels::Backend::Avx2, kernels::Backend::Neon})
    if (kernels::set_backend(b)) vector_backends.push_back(b);
  if (vector_backends.empty()) return;

  for (auto b : vector_backends) {
    REQUIRE(kernels::set_backend(b));
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 2000; ++iter) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double x = -700.0 + u * 700.0;  // decay side only
      const double rate = -x;               // sum_exp computes exp(-t*r)
      const double one = 1.0;
      const auto got = kernels::sum_exp(std::span(&rate, 1), std::span(&one, 1), 1.0);
      const double want = std::exp(x);
      CHECK(got.value == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("flush rule is shared by all backends") {
  BackendGuard guard;
  const double rate = 1000.0;
  const double w = 1.0;
  for (auto b : {kernels::Backend::Scalar, kernels::Backend::Avx2,
                 kernels::Backend::Neon}) {
    if (!kernels::set_backend(b)) continue;
    const auto v = kernels::sum_exp(std::span(&rate, 1), std::span(&w, 1), 1.0);
    CHECK(v.value == 0.0);  // 1000 > 708
    const auto ok = kernels::sum_exp(std::span(&rate, 1), std::span(&w, 1), 0.7);
    CHECK(ok.value > 0.0);  // 700 < 708
  }
}

TEST_CASE("rotate_rows, axpy and matmul agree across backends") {
  BackendGuard guard;
  std::vector<kernels::Backend> vector_backends;
  for (auto b : {kernels::Backend::Avx2, kernels::Backend::Neon})
    if (kernels::set_backend(b)) vector_backends.push_back(b);
  if (vector_backends.empty()) return;

  std::mt19937_64 rng(23);
  const std::size_t n = 37;
  const auto x0 = random_vec(rng, n, -1.0, 1.0);
  const auto y0 = random_vec(rng, n, -1.0, 1.0);
  const double c = std::cos(0.3), s = std::sin(0.3);

  REQUIRE(kernels::set_backend(kernels::Backend::Scalar));
  auto xr = x0, yr = y0;
  kernels::rotate_rows(xr.data(), yr.data(), n, c, s);
  auto ar = y0;
  kernels::axpy(0.37, x0.data(), ar.data(), n);
  const auto ma = random_vec(rng, n * n, -1.0, 1.0);
  const auto mb = random_vec(rng, n * n, -1.0, 1.0);
  std::vector<double> mr(n * n);
  kernels::matmul(ma.data(), mb.data(), mr.data(), n);

  for (auto b : vector_backends) {
    REQUIRE(kernels::set_backend(b));
    auto xv = x0, yv = y0;
    kernels::rotate_rows(xv.data(), yv.data(), n, c, s);
    auto av = y0;
    kernels::axpy(0.37, x0.data(), av.data(), n);
    std::vector<double> mv(n * n);
    kernels::matmul(ma.data(), mb.data(), mv.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(xv[i] == doctest::Approx(xr[i]).epsilon(1e-13));
      CHECK(yv[i] == doctest::Approx(yr[i]).epsilon(1e-13));
      CHECK(av[i] == doctest::Approx(ar[i]).epsilon(1e-13));
    }
    for (std::size_t i = 0; i < n * n; ++i)
      CHECK(mv[i] == doctest::Approx(mr[i]).epsilon(1e-12));
  }
}
