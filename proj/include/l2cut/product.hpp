#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "l2cut/chain.hpp"
#include "l2cut/measure.hpp"
#include "l2cut/spectral.hpp"

namespace l2cut {

// A continuous-time product chain described factor by factor: coordinate i
// carries the spectral data of its own chain (seen from its own initial
// law) and is updated at rate weight_i. The product L2 distance squares to
// prod_i (d_i(w_i t)^2 + 1) - 1, so no tensor state space is ever built.
struct ProductSpec {
  struct Factor {
    SpectralData spectral;
    double weight;
  };
  std::vector<Factor> factors;

  // continuous factors, strictly positive nonzero rates and weights,
  // sum of weights <= 1 (within 1e-12)
  void validate() const;
};

// Factor-level arrangement: all scaled nonzero rates w_i * lambda_{i,j}
// merged across factors and sorted ascending, ties broken by
// (factor, eigen index); psi_sq carries the matching squared coefficients.
struct ProductSpectral {
  std::vector<double> rho;
  std::vector<double> psi_sq;
  std::vector<std::pair<std::size_t, std::size_t>> provenance;
  std::vector<double> prefix;  // running sum of psi_sq

  double total_mass() const { return prefix.empty() ? 0.0 : prefix.back(); }
  // step measure with atoms (2 rho_l, psi_sq_l); equal rates merge
  SpectralMeasure measure() const;
};

ProductSpectral assemble(const ProductSpec& spec);

// min{j >= 1 : sum_{l<=j} psi_sq_l > c}, 1-based. Requires 0 < c < mass.
std::size_t truncated_index(const ProductSpectral& ps, double c);

// max over j >= truncated_index(c) of log(1 + prefix_j) / (2 rho_j). Equals
// cutoff_time on measure() up to atom merging (which never changes the max).
CutoffTime cutoff_time(const ProductSpectral& ps, double c);

// Flattened evaluator for the factor-level quantities; reused across many
// t values (bisections, sweeps).
class ProductEvaluator {
 public:
  explicit ProductEvaluator(const ProductSpec& spec);

  // sum_i d_i(w_i t)^2 = sum_l psi_sq_l e^{-2 rho_l t}
  double factor_sum(double t) const;
  // log(1 + product distance squared) = sum_i log1p(d_i(w_i t)^2); immune
  // to overflow on families with very large chi-square mass
  double product_log1p(double t) const;
  // prod_i (d_i(w_i t)^2 + 1) - 1; +inf when the true value overflows
  double product_l2_sq(double t) const;
  double mass() const;  // factor_sum(0)
  const SpectralMeasure& measure() const { return measure_; }

 private:
  std::vector<double> rates2_, weights_;
  std::vector<std::size_t> offsets_;  // factor f owns [offsets_[f], offsets_[f+1])
  SpectralMeasure measure_;
  mutable std::vector<double> scratch_;
};

// Aggregate-threshold time: min{t >= 0 : factor_sum(t) <= eps}. Requires
// eps > 0. Satisfies T2(sqrt(e^eps - 1)) <= value <= T2(sqrt(eps)).
double factor_mixing_time(const ProductEvaluator& ev, double eps);
double factor_mixing_time(const ProductSpec& spec, double eps);

// True product mixing time: min{t >= 0 : product distance <= eps}.
double product_mixing_time(const ProductEvaluator& ev, double eps);
double product_mixing_time(const ProductSpec& spec, double eps);

// Full tensor spectrum (rate, weight) over all nonzero multi-indices,
// sorted by rate ascending: rate_J = sum_i w_i lambda_{i, j_i}, weight_J =
// prod_i coefficient. Throws DomainError when the index count (product of
// atoms+1 per factor) exceeds cap.
std::vector<SpectralMeasure::Atom> full_tensor_spectrum(
    const ProductSpec& spec, std::size_t cap = (1u << 20));

// Bracket of the tensor-level truncated gap by factor-level rates:
//   tensor_rate(j(c)) <= rho_{jtilde(c)} <= tensor_rate(j(e^c - 1)),
// the right end +infinity (vacuous) when the tensor mass never exceeds
// e^c - 1. Requires c below both total masses and the tensor within cap.
struct BracketCheck {
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;  // +inf when vacuous
  bool pass = false;
};
BracketCheck bracket_check(const ProductSpec& spec, double c,
                           std::size_t cap = (1u << 20));

// Dense tensor assembly of the product generator: the brute-force oracle
// the factor-level identities are tested against. States multiply; capped.
struct TensorChain {
  ReversibleChain chain;
  std::vector<double> mu;
};
TensorChain build_tensor(std::span<const ReversibleChain> factors,
                         std::span<const std::vector<double>> mus,
                         std::span<const double> weights,
                         std::size_t cap = 4096);

}  // namespace l2cut
