#pragma once

#include <span>
#include <string>
#include <vector>

#include "l2cut/linalg.hpp"

namespace l2cut {

enum class ChainKind { Discrete, Continuous };

// An irreducible reversible finite Markov chain: a row-stochastic kernel
// (discrete) or a generator with zero row sums and nonnegative off-diagonal
// entries (continuous), together with its stationary law.
struct ReversibleChain {
  ChainKind kind = ChainKind::Discrete;
  Matrix matrix;
  std::vector<double> stationary;

  std::size_t size() const { return matrix.n; }
};

struct ValidationReport {
  bool ok = false;
  double row_residual = 0.0;      // max |row sum - (1 or 0)|
  double sign_violation = 0.0;    // worst negative entry where >= 0 required
  double balance_residual = 0.0;  // max relative detailed-balance defect
  double stationary_residual = 0.0;  // |sum pi - 1| and min pi check folded in
  bool irreducible = false;
  std::string detail;  // first violated invariant, with indices
};

// Structural diagnostics; never throws on an invalid chain.
ValidationReport validate(const ReversibleChain& chain);

// Throws ValidationError carrying the report detail when the chain fails
// any invariant (tolerances: 1e-12 rows, 1e-10 relative detailed balance).
void require_valid(const ReversibleChain& chain);

// Solves pi M = pi (discrete) or pi M = 0 (continuous) with sum pi = 1 via a
// dense solve on the transposed system with a normalization row. Requires an
// irreducible input; throws ValidationError otherwise.
std::vector<double> solve_stationary(const Matrix& m, ChainKind kind);

// Convenience constructors; both validate the result.
ReversibleChain make_chain(ChainKind kind, Matrix m);
ReversibleChain make_chain(ChainKind kind, Matrix m,
                           std::vector<double> stationary);

// Dirac mass at a state.
std::vector<double> delta_at(std::size_t m, std::size_t x);

// chi-square mass pi(|mu/pi|^2) - 1: the squared L2 distance at time 0.
double chi_square_mass(const ReversibleChain& chain,
                       std::span<const double> mu);

}  // namespace l2cut
