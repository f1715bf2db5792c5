#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "l2cut/chain.hpp"
#include "l2cut/product.hpp"
#include "l2cut/spectral.hpp"

namespace l2cut {

// Spectral data of the two-state generator [[-A, A],[B, -B]] started at
// state 0: one nonzero rate A+B with squared coefficient A/B. Requires
// A, B in (0, 1).
SpectralData two_state_spectral(double A, double B);
ReversibleChain two_state_chain(double A, double B);

// Weight profiles f for two-state product families. Profiles are evaluated
// through log f so that offsets far into an exponential profile cannot
// overflow.
enum class ProfileKind {
  ExpLinear,  // f(t) = e^{a t}
  ExpLogPow,  // f(t) = exp(a * log(1+t)^b)
  LogPow      // f(t) = log(1+t)^a
};

struct Profile {
  ProfileKind kind = ProfileKind::ExpLogPow;
  double a = 1.0;
  double b = 1.0;
  double log_at(double t) const;
  static Profile parse(const std::string& name, double a, double b);
};

// Triangular family of products of two-state chains: the n-th member has
// ell(n) coordinates, coordinate i carrying rates (A(x+i-1), B(x+i-1)) with
// x = x(n) and update weight proportional to f(x+i-1), normalized to sum 1.
struct TwoStateProductFamily {
  Profile profile;
  std::function<long long(long long)> x_of;
  std::function<long long(long long)> ell_of;
  // per absolute component index; constant functions in the common cases
  std::function<double(long long)> A_of;
  std::function<double(long long)> B_of;
  // uniformity witnesses: R^{-1} r_n <= A, B <= R r_n must hold
  double R = 2.0;
  std::function<double(long long)> r_of;

  ProductSpec build(long long n) const;
  bool witnesses_ok(long long n) const;
};

// Family with constant rates A, B; r_n = A + B and the smallest valid R.
TwoStateProductFamily uniform_two_state_family(
    Profile profile, double A, double B,
    std::function<long long(long long)> x_of,
    std::function<long long(long long)> ell_of);

// max over 1 <= j <= ell(n) of log(1+j) / (f(x-1+j)/f(x)): the finite-n
// cutoff witness of the family. For f = e^t this equals log 2 exactly.
double profile_peak(const TwoStateProductFamily& fam, long long n);

// t_n = max_j log(1+j) / (2 p_{n,j} (A_j + B_j)) and the window
// b_n = sqrt(t_n / (r_n p_{n,1})). monotone is false when p (A+B) fails to
// be nondecreasing (the maximum is still returned).
struct PeakTime {
  double t;
  double b;
  bool monotone;
};
PeakTime peak_time(const TwoStateProductFamily& fam, long long n);

// Predicted cutoff-time numerator for the profile cases that do have
// cutoffs (the ExpLinear profile has none and is rejected):
//   ExpLogPow:       min(log x - b log log x, log ell)
//   LogPow, a >= 1:  min(log x, log ell)
//   LogPow, a < 1:   log(1 + min(x, ell))^a * (log ell)^{1-a}
double predicted_kappa(const Profile& profile, double x, double ell);

// The no-cutoff two-block family: 2n coordinates, A = 1/n then 1/sqrt(n),
// B = 1, update weights i/n^3 then log(i)/n^2.
ProductSpec counterexample_build(long long n);
// D_n(t) = sum_i A_i e^{-2 rho_i t}, evaluated directly (no spec built).
double counterexample_distance_sq(long long n, double t);
// pointwise limit of D_n(A n^2): (1-e^{-2A})/(2A) for A > 1/4, and
// 2(sqrt(2)-e^{-1/2}) at A = 1/4.
double counterexample_limit(double A);

// K(x, y) = r delta_x(y) + (1-r) pi(y): every non-constant direction decays
// at the same rate, so the cutoff quantities have closed forms.
struct CompleteGraphChain {
  ReversibleChain kernel;
  double r = 0.5;

  ReversibleChain continuized() const;
  ReversibleChain lazy(double theta) const;

  double mass(std::size_t x) const;  // 1/pi(x) - 1
  // cutoff-time functional of the continuized chain, any c < mass:
  // log(1 + mass)/(2(1-r)) = log(1/pi(x))/(2(1-r))
  double tau(std::size_t x) const;
  double tau_lazy(std::size_t x, double theta) const;
  double tau_ratio(double theta) const;  // -log(theta+(1-theta)r)/(1-r)
  double mixing_cont(std::size_t x, double eps) const;
  double mixing_lazy_steps(std::size_t x, double theta, double eps) const;
};

CompleteGraphChain complete_graph_chain(std::span<const double> pi_hat,
                                        double r);

}  // namespace l2cut
