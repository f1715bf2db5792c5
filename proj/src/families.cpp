#include "l2cut/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l2cut/analysis.hpp"
#include "l2cut/errors.hpp"
#include "l2cut/kernels.hpp"

namespace l2cut {

SpectralData two_state_spectral(double A, double B) {
  if (!(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0))
    throw DomainError("two-state rates must lie in (0, 1)");
  SpectralData sd;
  sd.kind = ChainKind::Continuous;
  sd.values = {0.0, A + B};
  sd.weights = {1.0, A / B};
  return sd;
}

ReversibleChain two_state_chain(double A, double B) {
  if (!(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0))
    throw DomainError("two-state rates must lie in (0, 1)");
  Matrix m(2);
  m(0, 0) = -A;
  m(0, 1) = A;
  m(1, 0) = B;
  m(1, 1) = -B;
  return make_chain(ChainKind::Continuous, std::move(m),
                    {B / (A + B), A / (A + B)});
}

double Profile::log_at(double t) const {
  switch (kind) {
    case ProfileKind::ExpLinear:
      return a * t;
    case ProfileKind::ExpLogPow:
      return a * std::pow(std::log1p(t), b);
    case ProfileKind::LogPow:
      return a * std::log(std::log1p(t));
  }
  throw DomainError("unknown profile");
}

Profile Profile::parse(const std::string& name, double a, double b) {
  if (!(a > 0.0)) throw DomainError("profile parameter a must be positive");
  if (name == "exp") return {ProfileKind::ExpLinear, a, b};
  if (name == "explogpow") {
    if (!(b > 0.0)) throw DomainError("profile parameter b must be positive");
    return {ProfileKind::ExpLogPow, a, b};
  }
  if (name == "logpow") return {ProfileKind::LogPow, a, b};
  throw DomainError("unknown profile '" + name +
                    "' (expected exp, explogpow or logpow)");
}

namespace {

// normalized update weights p_{n,i} = f(x+i-1) / sum, through log space
std::vector<double> family_weights(const TwoStateProductFamily& fam,
                                   long long n) {
  const long long x = fam.x_of(n);
  const long long ell = fam.ell_of(n);
  if (x < 1 || ell < 1)
    throw DomainError("family requires x_n >= 1 and ell_n >= 1");
  std::vector<double> logw(static_cast<std::size_t>(ell));
  double peak = -std::numeric_limits<double>::infinity();
  for (long long i = 0; i < ell; ++i) {
    logw[i] = fam.profile.log_at(static_cast<double>(x + i));
    peak = std::max(peak, logw[i]);
  }
  double sum = 0.0;
  for (double& w : logw) {
    w = std::exp(w - peak);
    sum += w;
  }
  for (double& w : logw) {
    w /= sum;
    if (!(w > 0.0))
      throw DomainError(
          "profile weights underflow at this n; the slow coordinates are "
          "not representable in double precision");
  }
  return logw;
}

}  // namespace

ProductSpec TwoStateProductFamily::build(long long n) const {
  const long long x = x_of(n);
  const std::vector<double> p = family_weights(*this, n);
  ProductSpec spec;
  spec.factors.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long long idx = x + static_cast<long long>(i);
    spec.factors.push_back({two_state_spectral(A_of(idx), B_of(idx)), p[i]});
  }
  return spec;
}

bool TwoStateProductFamily::witnesses_ok(long long n) const {
  const long long x = x_of(n);
  const long long ell = ell_of(n);
  const double r = r_of(n);
  for (long long i = 0; i < ell; ++i) {
    const double a = A_of(x + i);
    const double b = B_of(x + i);
    const double lo = r / R * (1.0 - 1e-12);
    const double hi = r * R * (1.0 + 1e-12);
    if (a < lo || a > hi || b < lo || b > hi) return false;
  }
  return true;
}

TwoStateProductFamily uniform_two_state_family(
    Profile profile, double A, double B,
    std::function<long long(long long)> x_of,
    std::function<long long(long long)> ell_of) {
  if (!(A > 0.0 && A < 1.0 && B > 0.0 && B < 1.0))
    throw DomainError("two-state rates must lie in (0, 1)");
  TwoStateProductFamily fam;
  fam.profile = profile;
  fam.x_of = std::move(x_of);
  fam.ell_of = std::move(ell_of);
  fam.A_of = [A](long long) { return A; };
  fam.B_of = [B](long long) { return B; };
  const double r = A + B;
  fam.r_of = [r](long long) { return r; };
  fam.R = r / std::min(A, B);
  return fam;
}

double profile_peak(const TwoStateProductFamily& fam, long long n) {
  const long long x = fam.x_of(n);
  const long long ell = fam.ell_of(n);
  if (x < 1 || ell < 1)
    throw DomainError("family requires x_n >= 1 and ell_n >= 1");
  const double log_fx = fam.profile.log_at(static_cast<double>(x));
  double best = -std::numeric_limits<double>::infinity();
  for (long long j = 1; j <= ell; ++j) {
    const double log_fj =
        fam.profile.log_at(static_cast<double>(x + j - 1));
    const double v =
        std::log1p(static_cast<double>(j)) * std::exp(log_fx - log_fj);
    best = std::max(best, v);
  }
  return best;
}

PeakTime peak_time(const TwoStateProductFamily& fam, long long n) {
  const long long x = fam.x_of(n);
  const std::vector<double> p = family_weights(fam, n);
  PeakTime out{0.0, 0.0, true};
  double prev_rho = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const long long idx = x + static_cast<long long>(j);
    const double rho = p[j] * (fam.A_of(idx) + fam.B_of(idx));
    if (rho < prev_rho * (1.0 - 1e-12)) out.monotone = false;
    prev_rho = rho;
    out.t = std::max(
        out.t, std::log1p(static_cast<double>(j + 1)) / (2.0 * rho));
  }
  out.b = std::sqrt(out.t / (fam.r_of(n) * p.front()));
  return out;
}

double predicted_kappa(const Profile& profile, double x, double ell) {
  if (!(x > 1.0 && ell >= 1.0))
    throw DomainError("predicted_kappa requires x > 1 and ell >= 1");
  switch (profile.kind) {
    case ProfileKind::ExpLinear:
      throw DomainError("the exponential profile has no cutoff and no "
                        "predicted cutoff time");
    case ProfileKind::ExpLogPow:
      return std::min(std::log(x) - profile.b * std::log(std::log(x)),
                      std::log(ell));
    case ProfileKind::LogPow:
      if (profile.a >= 1.0) return std::min(std::log(x), std::log(ell));
      return std::pow(std::log1p(std::min(x, ell)), profile.a) *
             std::pow(std::log(ell), 1.0 - profile.a);
  }
  throw DomainError("unknown profile");
}

namespace {

void counterexample_arrays(long long n, std::vector<double>& rates2,
                           std::vector<double>& weights) {
  if (n < 2) throw DomainError("counterexample requires n >= 2");
  const double dn = static_cast<double>(n);
  const double sqn = std::sqrt(dn);
  rates2.resize(static_cast<std::size_t>(2 * n));
  weights.resize(static_cast<std::size_t>(2 * n));
  for (long long i = 1; i <= n; ++i) {
    const double a = 1.0 / dn;
    const double p = static_cast<double>(i) / (dn * dn * dn);
    rates2[i - 1] = 2.0 * p * (a + 1.0);
    weights[i - 1] = a;
  }
  for (long long i = n + 1; i <= 2 * n; ++i) {
    const double a = 1.0 / sqn;
    const double p = std::log(static_cast<double>(i)) / (dn * dn);
    rates2[i - 1] = 2.0 * p * (a + 1.0);
    weights[i - 1] = a;
  }
}

}  // namespace

ProductSpec counterexample_build(long long n) {
  std::vector<double> rates2, weights;
  counterexample_arrays(n, rates2, weights);
  const double dn = static_cast<double>(n);
  ProductSpec spec;
  spec.factors.reserve(rates2.size());
  for (long long i = 1; i <= 2 * n; ++i) {
    const double a = i <= n ? 1.0 / dn : 1.0 / std::sqrt(dn);
    const double p = i <= n
                         ? static_cast<double>(i) / (dn * dn * dn)
                         : std::log(static_cast<double>(i)) / (dn * dn);
    SpectralData sd;  // B = 1 sits outside the (0,1) two-state gate
    sd.kind = ChainKind::Continuous;
    sd.values = {0.0, a + 1.0};
    sd.weights = {1.0, a};
    spec.factors.push_back({std::move(sd), p});
  }
  return spec;
}

double counterexample_distance_sq(long long n, double t) {
  if (t < 0.0) throw DomainError("negative time");
  std::vector<double> rates2, weights;
  counterexample_arrays(n, rates2, weights);
  return kernels::sum_exp(rates2, weights, t).value;
}

double counterexample_limit(double A) {
  if (!(A > 0.0)) throw DomainError("requires A > 0");
  if (A < 0.25) return std::numeric_limits<double>::infinity();
  if (A == 0.25) return 2.0 * (std::sqrt(2.0) - std::exp(-0.5));
  return -std::expm1(-2.0 * A) / (2.0 * A);
}

CompleteGraphChain complete_graph_chain(std::span<const double> pi_hat,
                                        double r) {
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("complete-graph holding probability must be in (0,1)");
  const std::size_t m = pi_hat.size();
  if (m < 2) throw DomainError("need at least two states");
  double sum = 0.0;
  for (double p : pi_hat) {
    if (!(p > 0.0)) throw DomainError("stationary entries must be positive");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-10)
    throw DomainError("stationary vector must sum to 1");

  Matrix k(m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y)
      k(x, y) = (1.0 - r) * pi_hat[y] + (x == y ? r : 0.0);
  CompleteGraphChain out;
  out.r = r;
  out.kernel = make_chain(ChainKind::Discrete, std::move(k),
                          std::vector<double>(pi_hat.begin(), pi_hat.end()));
  return out;
}

ReversibleChain CompleteGraphChain::continuized() const {
  return continuize(kernel);
}

ReversibleChain CompleteGraphChain::lazy(double theta) const {
  return lazy_chain(kernel, theta);
}

double CompleteGraphChain::mass(std::size_t x) const {
  return 1.0 / kernel.stationary[x] - 1.0;
}

double CompleteGraphChain::tau(std::size_t x) const {
  return std::log(1.0 / kernel.stationary[x]) / (2.0 * (1.0 - r));
}

double CompleteGraphChain::tau_lazy(std::size_t x, double theta) const {
  const double beta = theta + (1.0 - theta) * r;
  return std::log(1.0 / kernel.stationary[x]) / (-2.0 * std::log(beta));
}

double CompleteGraphChain::tau_ratio(double theta) const {
  return -std::log(theta + (1.0 - theta) * r) / (1.0 - r);
}

double CompleteGraphChain::mixing_cont(std::size_t x, double eps) const {
  const double m = mass(x);
  if (m <= eps * eps) return 0.0;
  return std::log(m / (eps * eps)) / (2.0 * (1.0 - r));
}

double CompleteGraphChain::mixing_lazy_steps(std::size_t x, double theta,
                                             double eps) const {
  const double m = mass(x);
  const double e2 = eps * eps;
  if (m <= e2) return 0.0;
  const double beta = theta + (1.0 - theta) * r;
  const double v = std::log(m / e2) / (-2.0 * std::log(beta));
  long long steps = std::max(1LL, static_cast<long long>(std::floor(v)) - 1);
  while (m * std::pow(beta, 2.0 * static_cast<double>(steps)) > e2) ++steps;
  return static_cast<double>(steps);
}

}  // namespace l2cut
