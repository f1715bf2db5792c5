#pragma once

#include <functional>
#include <span>
#include <vector>

#include "l2cut/measure.hpp"

namespace l2cut {

// One family member, reduced to what the criterion quantities need: the
// atom arrays (doubled rates, unmerged) plus flags. For product families
// each atom belongs to one coordinate, so the exact product distance is
// available without the tensor space; the tensor-level gap is then only
// known through the factor-level bracket and rows report both ends.
struct SweepEntry {
  std::vector<double> rates2;   // 2*lambda (chains) or 2*rho (products)
  std::vector<double> weights;  // squared coefficients, aligned
  double mass = 0.0;            // chi-square mass, for the t = 0 test
  bool discrete = false;        // integer-valued mixing times
  bool product = false;         // report the gap bracket columns
  bool one_atom_factors = false;  // product with two-state coordinates
};

using FamilyFn = std::function<SweepEntry(long long n)>;

// One row per (n, c, eps). Inadmissible combinations (c at or above the
// measure mass) are marked, not errors; their c-derived fields are NaN.
struct DiagnosticsRow {
  long long n = 0;
  double c = 0.0;
  double eps = 0.0;
  bool admissible = false;
  double mass = 0.0;
  double measure_mass = 0.0;
  double T2 = 0.0;        // product families: exact product mixing time
  double gap = 0.0;       // chain units; products: rho at the c-threshold
  double tau = 0.0;
  double product_T = 0.0;    // T2 * gap
  double product_tau = 0.0;  // tau * gap = alpha(c)^2
  double window_mix = 0.0;   // 1 / gap
  double window_tau = 0.0;   // sqrt(tau / gap)
  // factor-level bracket of the tensor-level gap (products; = gap for
  // chains): gap_lower = rho at threshold log(1+c), gap_upper = rho at c
  double gap_lower = 0.0;
  double gap_upper = 0.0;
  double product_T_lower = 0.0;
  double product_T_upper = 0.0;
};

// Deterministic sweep: rows ordered by (n, c, eps) regardless of jobs.
std::vector<DiagnosticsRow> family_sweep(const FamilyFn& family,
                                         std::span<const long long> n_list,
                                         std::span<const double> c_list,
                                         std::span<const double> eps_list,
                                         int jobs = 1);

// T(eps1)/T(eps2) per n (eps1 < eps2, so the ratio is >= 1). A ratio
// drifting to 1 along n is the pre-cutoff signature; the tool reports the
// sequence and leaves the limit to the reader.
struct MixingRatio {
  long long n;
  double t1, t2, ratio;
};
std::vector<MixingRatio> precutoff_ratios(
    std::span<const DiagnosticsRow> rows, double eps1, double eps2);

// Least-squares slope of log(y) against log(n): the descriptive growth
// exponent printed next to trend columns.
double log_log_slope(std::span<const double> n, std::span<const double> y);

// ---- entry builders for the built-in families ----

struct TwoStateProductFamily;  // families.hpp

// Product of two-state chains: one atom per coordinate, exact product
// mixing times available.
FamilyFn two_state_family_fn(TwoStateProductFamily fam);

// The two-block no-cutoff family.
FamilyFn counterexample_family_fn();

// Continuized complete graph on n states, uniform stationary law, started
// at a point: a single decay rate 1 - r with mass n - 1.
FamilyFn complete_graph_family_fn(double r);

}  // namespace l2cut
