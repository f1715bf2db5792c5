#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace l2cut {

// A finite nonnegative step measure on (0, inf): atoms (rate, mass) with
// rate > 0 and mass > 0, rates strictly increasing. The induced distribution
// function V(x) = sum of masses at rates <= x is nondecreasing, right
// continuous and vanishes at 0+; its Laplace transform is what the L2
// distance of a reversible chain squares to. The empty measure is allowed
// and stands for the already-mixed chain (transform identically zero).
class SpectralMeasure {
 public:
  struct Atom {
    double rate;
    double mass;
  };

  SpectralMeasure() = default;

  // Atoms in any order. Equal rates are merged by summing masses; two rates
  // are considered equal when they differ by at most merge_tol relative
  // (eigenvalue multiplicities split by solver noise collapse; genuinely
  // distinct rates of any magnitude stay apart).
  explicit SpectralMeasure(std::vector<Atom> atoms, double merge_tol = 0.0);

  std::size_t size() const { return rates_.size(); }
  bool empty() const { return rates_.empty(); }
  std::span<const double> rates() const { return rates_; }
  std::span<const double> masses() const { return masses_; }
  double rate(std::size_t k) const { return rates_[k]; }
  double mass(std::size_t k) const { return masses_[k]; }
  // V evaluated at the k-th atom rate, i.e. the cumulative mass through k.
  double cumulative(std::size_t k) const { return cumulative_[k]; }
  double total_mass() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  double min_rate() const;  // requires nonempty

 private:
  std::vector<double> rates_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;
};

// L_V(t) = sum_k mass_k * exp(-t * rate_k). Strictly decreasing in t for a
// nonempty measure; 0 for the empty one. Requires t >= 0.
double laplace_transform(const SpectralMeasure& v, double t);

// The right-hand side of the parts identity
//   L_V(t) = t * integral V(x) e^{-t x} dx,   t > 0,
// evaluated in closed form for a step V. Equals laplace_transform(v, t);
// kept as an independent algebraic route for cross-checks.
double laplace_by_parts(const SpectralMeasure& v, double t);

// T_V(eps) = min{t >= 0 : L_V(t) <= eps}. Exact 0 when L_V(0) <= eps;
// otherwise bisection on the strictly decreasing transform (bracket
// [0, log(L_V(0)/eps)/min_rate]) refined to 1e-12 relative in t and polished
// by Newton steps, so |L_V(T) - eps| <= 1e-9 * eps. Requires eps > 0.
double mixing_time(const SpectralMeasure& v, double eps);

// lambda_V(c) = inf{x : V(x) > c}: the smallest atom rate whose cumulative
// mass strictly exceeds c. Requires 0 < c < total mass.
double truncated_gap(const SpectralMeasure& v, double c);
std::size_t truncated_gap_index(const SpectralMeasure& v, double c);

struct CutoffTime {
  double value;       // tau_V(c)
  double arg;         // smallest rate attaining the maximum
  std::size_t index;  // atom index of arg
};

// tau_V(c) = sup over x >= lambda_V(c) of log(1 + V(x))/x. For a step V the
// supremum is attained at an atom rate >= lambda_V(c): between atoms V is
// constant while 1/x decreases, so scanning atoms is exact. Ties resolve to
// the smallest maximizing rate. Requires 0 < c < total mass.
CutoffTime cutoff_time(const SpectralMeasure& v, double c);

// Upper bound on the transform just past the cutoff time:
//   L_V(tau_V(c) + s) <= c + (tau_V(c) + s) / (s * e^{s lambda_V(c)}).
// Returns the right-hand side. The companion lower bound
// L_V(tau_V(c)) >= c/(1+c) also holds. Requires 0 < c < total mass, s > 0.
double tail_bound(const SpectralMeasure& v, double c, double s);

// Two-sided bracket of tau_V(c) by mixing times, with a = sqrt(tau * lambda):
//   (a/(a+A)) * T_V(c + (A+a)/(A e^{A a}))  <=  tau_V(c)  <=  T_V(c/(1+c)).
// Returns (lower, upper). Requires 0 < c < total mass, A > 0.
std::pair<double, double> mixing_time_bracket(const SpectralMeasure& v,
                                              double c, double A);

// Mixing-time sandwich through the cutoff functional:
//   tau_V(2 delta) <= T_V(delta) <= (6/delta^2) tau_V(delta/2),
// valid for 0 < delta < min(total mass, 1)/2. Returns (lower, upper).
std::pair<double, double> mixing_bounds(const SpectralMeasure& v,
                                        double delta);

// Right-hand side of the shifted-threshold inequality
//   T_V(c1 + c2 e^{-T_V(eps) lambda_V(c1)} + 2 eps e^{-B})
//       <= T_V(eps) + 2B / lambda_V(c2).
// Requires eps, c1, c2 in (0, total mass) and B > 0.
double mixing_shift_bound(const SpectralMeasure& v, double eps, double c1,
                          double c2, double B);

}  // namespace l2cut
