#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "l2cut/chain.hpp"
#include "l2cut/measure.hpp"
#include "l2cut/spectral.hpp"

namespace l2cut {

// Chain-level cutoff quantities at a truncation level c. Rates are reported
// in chain units (eigenvalues of -L, or -log|beta| for kernels); the step
// measure carries doubled rates, so gap = truncated_gap(measure, c) / 2 and
// alpha^2 = tau * gap (equivalently tau * truncated_gap / 2).
struct CutoffDiagnostics {
  double c = 0.0;
  std::size_t j_index = 0;   // 1-based measure-atom index of the gap
  double gap = 0.0;          // lambda_{j(c)}, chain units
  double tau = 0.0;          // cutoff-time functional at c
  double alpha = 0.0;        // sqrt(tau * gap)
  double mass = 0.0;         // chi-square mass pi(|mu/pi|^2) - 1
  double measure_mass = 0.0; // total step-measure mass (may be below mass
                             // for discrete chains with zero eigenvalues)
  std::vector<double> eps;
  std::vector<double> mixing;     // T2(mu, eps); integer-valued for kernels
  std::vector<double> product_T;  // T2 * gap per threshold
  // |T2 - tau| / sqrt(tau/gap): the observed window constant. Reported
  // only; the hidden constant is family-dependent, so nothing asserts it.
  std::vector<double> window_ratio;
  double product_tau = 0.0;       // tau * gap = alpha^2
  double window_mix = 0.0;        // 1 / gap
  double window_tau = 0.0;        // sqrt(tau / gap)
};

// Requires 0 < c < measure mass. Inadmissible c throws DomainError naming
// both masses.
CutoffDiagnostics diagnostics(const SpectralData& sd, double c,
                              std::span<const double> eps_list);
CutoffDiagnostics diagnostics(const ReversibleChain& chain,
                              std::span<const double> mu, double c,
                              std::span<const double> eps_list);

// Mixing-time sandwich at threshold eps through the cutoff functional:
//   tau(2 eps^2) <= T2(mu, eps) <= (6/eps^4) tau(eps^2/2)  (+1 discrete).
// Requires 0 < eps < sqrt(min(mass, 1)/2).
std::pair<double, double> mixing_time_sandwich(const SpectralData& sd,
                                               double eps);

// theta I + (1 - theta) K; the spectrum maps through the same affine map
// with unchanged eigenvectors and stationary law. Discrete kind only.
ReversibleChain lazy_chain(const ReversibleChain& chain, double theta);

// K - I: the continuous-time chain driven by the kernel's jumps.
ReversibleChain continuize(const ReversibleChain& chain);

// Comparison of the continuized chain against the theta-lazy kernel, for
// theta in (1/2, 1). All bounds listed here hold for every finite chain,
// not just asymptotically, and are asserted by the verify suites:
//   per eigenvalue:  (1-theta)(1-beta) <= -log beta_theta
//                    <= (-log(2 theta - 1)/2)(1-beta),
//   cutoff times:    1-theta <= tau_cont/tau_lazy <= -log(2 theta - 1)/2,
//   real-time mixing ratio within the same window.
// The integer-step lazy mixing time is reported alongside; its ratio is
// informational (rounding can push it outside the window on tiny chains).
struct ComparisonReport {
  double theta = 0.0;
  double c = 0.0;
  double eps = 0.0;
  double tau_cont = 0.0;
  double tau_lazy = 0.0;
  double tau_ratio = 0.0;   // tau_cont / tau_lazy
  double t_cont = 0.0;      // continuized L2 mixing time
  double t_lazy_steps = 0.0;  // lazy kernel mixing time, integer steps
  double t_lazy_real = 0.0;   // real-valued threshold crossing of the lazy measure
  double ratio_real = 0.0;    // t_cont / t_lazy_real (0 when both are 0)
  double ratio_steps = 0.0;
  double lower = 0.0;  // 1 - theta
  double upper = 0.0;  // -log(2 theta - 1) / 2
  bool eigen_bounds_ok = false;
  bool tau_ratio_ok = false;
  bool mixing_ratio_ok = false;
  // When every diagonal kernel entry exceeds 1/2 the kernel is itself a
  // lazy chain; theta0 and its own mixing time are attached for reference.
  std::optional<double> theta0;
  std::optional<double> t_self_steps;
};

ComparisonReport compare_lazy_continuous(const ReversibleChain& chain,
                                         std::span<const double> mu,
                                         double theta, double c, double eps);

}  // namespace l2cut
