#pragma once

#include <span>

#include "l2cut/chain.hpp"
#include "l2cut/measure.hpp"

namespace l2cut {

// Spectral description of a reversible chain seen from an initial law mu:
// eigenvalues paired with the squared coefficients |mu(phi_i)|^2 of the
// L2(pi)-orthonormal right eigenvectors.
//
// continuous: values are eigenvalues of -L, ascending, values[0] = 0;
// discrete:   values are eigenvalues of K, |value| descending (+1 before -1
//             on ties), values[0] = 1.
// weights[0] belongs to the constant eigenvector and equals 1; it never
// enters a distance.
struct SpectralData {
  ChainKind kind = ChainKind::Continuous;
  std::vector<double> values;
  std::vector<double> weights;

  // sum of weights[i] for i >= 1; equals pi(|mu/pi|^2) - 1 when the data
  // came from a decomposition.
  double chi_square() const;

  // L2 distance at time t straight from the spectral sums. Discrete kind
  // requires integer t >= 0.
  double distance(double t) const;

  // Step-measure form: atoms (2 lambda_i, w_i) for the continuous kind,
  // (-2 log|beta_i|, w_i) for the discrete kind. Rates within 1e-10
  // relative merge; weights below 1e-18 are dropped.
  // Discrete zero eigenvalues are excluded (their decay is instantaneous);
  // their weight is reported by zero_weight(). Throws DomainError for a
  // discrete chain with |beta_i| >= 1 - 1e-12 for some i >= 1 (periodic:
  // the distance never vanishes) and for nonpositive continuous rates.
  SpectralMeasure measure() const;

  // Discrete kind: total weight sitting on (numerically) zero eigenvalues;
  // it contributes to the distance only at t = 0. Zero for continuous kind.
  double zero_weight() const;
};

// Symmetrizes via D^{1/2} M D^{-1/2} (D = diag(pi)), runs the Jacobi
// eigensolver, converts back to L2(pi)-orthonormal right eigenvectors and
// projects the initial law onto them. The chain must be valid.
SpectralData decompose(const ReversibleChain& chain,
                       std::span<const double> mu);

// Same, keeping the right eigenvectors: row i of eigenvectors pairs with
// data.values[i] and is L2(pi)-normalized.
struct FullDecomposition {
  SpectralData data;
  Matrix eigenvectors;
};
FullDecomposition decompose_full(const ReversibleChain& chain,
                                 std::span<const double> mu);

// Non-spectral distance oracle: repeated kernel multiplication (discrete,
// integer t) or a dense matrix exponential (continuous), then the weighted
// l2 norm against pi. State count capped at 512.
double l2_distance_direct(const ReversibleChain& chain,
                          std::span<const double> mu, double t);

// Smallest time (integer for discrete chains) at which the L2 distance
// drops to eps. Uses the chi-square mass for the t = 0 test, then the
// measure-level bisection.
double l2_mixing_time(const SpectralData& sd, double eps);

}  // namespace l2cut
