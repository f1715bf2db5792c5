#include "l2cut/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "l2cut/errors.hpp"
#include "l2cut/kernels.hpp"

namespace l2cut {

namespace {

constexpr double kUnitEigenTol = 1e-12;   // |beta| this close to 1 is periodic
constexpr double kZeroEigenTol = 1e-150;  // |beta| below this decays instantly
constexpr double kWeightFloor = 1e-18;

}  // namespace

double SpectralData::chi_square() const {
  double sum = 0.0;
  for (std::size_t i = 1; i < weights.size(); ++i) sum += weights[i];
  return sum;
}

double SpectralData::distance(double t) const {
  if (t < 0.0) throw DomainError("distance requires t >= 0");
  double sum = 0.0;
  if (kind == ChainKind::Continuous) {
    for (std::size_t i = 1; i < values.size(); ++i)
      sum += weights[i] * kernels::exp_floor(-2.0 * t * values[i]);
  } else {
    const double r = std::round(t);
    if (std::fabs(t - r) != 0.0)
      throw DomainError("discrete-time distance requires integer t");
    const long long m = static_cast<long long>(r);
    for (std::size_t i = 1; i < values.size(); ++i) {
      const double b2 = values[i] * values[i];
      sum += weights[i] * (m == 0 ? 1.0 : std::pow(b2, static_cast<double>(m)));
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

SpectralMeasure SpectralData::measure() const {
  std::vector<SpectralMeasure::Atom> atoms;
  atoms.reserve(values.size());
  const double floor = kWeightFloor * std::max(1.0, chi_square());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (weights[i] <= floor) continue;
    double rate;
    if (kind == ChainKind::Continuous) {
      if (!(values[i] > 0.0))
        throw DomainError("nonpositive continuous rate at index " +
                          std::to_string(i) + " (chain reducible?)");
      rate = 2.0 * values[i];
    } else {
      const double b = std::fabs(values[i]);
      if (b >= 1.0 - kUnitEigenTol)
        throw DomainError("periodic chain: |beta| = 1 at index " +
                          std::to_string(i) +
                          "; the L2 distance does not vanish");
      if (b < kZeroEigenTol) continue;  // counted by zero_weight()
      rate = -2.0 * std::log(b);
    }
    atoms.push_back({rate, weights[i]});
  }
  return SpectralMeasure(std::move(atoms), 1e-10);
}

double SpectralData::zero_weight() const {
  if (kind == ChainKind::Continuous) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (std::fabs(values[i]) < kZeroEigenTol) sum += weights[i];
  return sum;
}

SpectralData decompose(const ReversibleChain& chain,
                       std::span<const double> mu) {
  return decompose_full(chain, mu).data;
}

FullDecomposition decompose_full(const ReversibleChain& chain,
                                 std::span<const double> mu) {
  const std::size_t n = chain.size();
  if (mu.size() != n) throw DomainError("initial distribution size mismatch");
  require_valid(chain);

  std::vector<double> sqrt_pi(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_pi[i] = std::sqrt(chain.stationary[i]);

  // S = D^{1/2} M D^{-1/2}; detailed balance makes it symmetric
  Matrix s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s(i, j) = sqrt_pi[i] * chain.matrix(i, j) / sqrt_pi[j];
  // symmetrize away the detailed-balance rounding residue
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }

  SymmetricEigen eig = jacobi_eigen(std::move(s));

  // weights against the D^{-1/2}-transformed eigenvectors:
  // mu(phi_k) = sum_x mu(x) u_k(x) / sqrt(pi(x))
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double* u = eig.vectors.row(k);
    double dot = 0.0;
    for (std::size_t x = 0; x < n; ++x) dot += mu[x] * u[x] / sqrt_pi[x];
    w[k] = dot * dot;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  FullDecomposition out;
  out.data.kind = chain.kind;
  if (chain.kind == ChainKind::Continuous) {
    // eigenvalues of -L ascending; index 0 is the zero eigenvalue
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return -eig.values[a] < -eig.values[b];
    });
  } else {
    // |beta| descending, +1 before -1 on ties
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double fa = std::fabs(eig.values[a]);
      const double fb = std::fabs(eig.values[b]);
      if (fa != fb) return fa > fb;
      return eig.values[a] > eig.values[b];
    });
  }
  out.eigenvectors = Matrix(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t k = order[pos];
    out.data.values.push_back(chain.kind == ChainKind::Continuous
                                  ? -eig.values[k] + 0.0  // kill -0
                                  : eig.values[k]);
    out.data.weights.push_back(w[k]);
    // phi = D^{-1/2} u
    const double* u = eig.vectors.row(k);
    for (std::size_t x = 0; x < n; ++x)
      out.eigenvectors(pos, x) = u[x] / sqrt_pi[x];
  }
  return out;
}

double l2_distance_direct(const ReversibleChain& chain,
                          std::span<const double> mu, double t) {
  const std::size_t n = chain.size();
  if (n > 512) throw DomainError("direct oracle capped at 512 states");
  if (mu.size() != n) throw DomainError("initial distribution size mismatch");
  if (t < 0.0) throw DomainError("negative time");

  std::vector<double> nu(mu.begin(), mu.end());
  if (chain.kind == ChainKind::Discrete) {
    const double r = std::round(t);
    if (std::fabs(t - r) != 0.0)
      throw DomainError("discrete-time distance requires integer t");
    long long steps = static_cast<long long>(r);
    std::vector<double> next(n);
    for (long long s = 0; s < steps; ++s) {
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t x = 0; x < n; ++x)
        if (nu[x] != 0.0)
          kernels::axpy(nu[x], chain.matrix.row(x), next.data(), n);
      nu.swap(next);
    }
  } else {
    Matrix tl = chain.matrix;
    for (double& e : tl.a) e *= t;
    const Matrix h = expm(tl);
    std::vector<double> next(n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
      if (nu[x] != 0.0) kernels::axpy(nu[x], h.row(x), next.data(), n);
    nu.swap(next);
  }

  double sum = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    const double d = nu[y] / chain.stationary[y] - 1.0;
    sum += d * d * chain.stationary[y];
  }
  return std::sqrt(std::max(sum, 0.0));
}

double l2_mixing_time(const SpectralData& sd, double eps) {
  if (!(eps > 0.0)) throw DomainError("l2_mixing_time requires eps > 0");
  const double eps2 = eps * eps;
  if (sd.chi_square() <= eps2) return 0.0;
  const SpectralMeasure v = sd.measure();
  if (sd.kind == ChainKind::Continuous) return mixing_time(v, eps2);

  // min integer m >= 1 with L_V(m) <= eps^2; scan up from the real answer
  const double t = v.total_mass() <= eps2 ? 0.0 : mixing_time(v, eps2);
  long long m = std::max(1LL, static_cast<long long>(std::floor(t)) - 1);
  while (laplace_transform(v, static_cast<double>(m)) > eps2) ++m;
  return static_cast<double>(m);
}

}  // namespace l2cut
