#pragma once

#include <cstdint>
#include <vector>

#include "l2cut/chain.hpp"
#include "l2cut/measure.hpp"

namespace l2cut {

// xoshiro256++ with splitmix64 seeding. Hand-rolled so that seeded suites
// produce the same instances on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double log_uniform(double lo, double hi);
  std::uint64_t below(std::uint64_t n);  // [0, n)

 private:
  std::uint64_t s_[4];
};

// Random step measure: 1..max_atoms atoms, rates log-uniform in
// [1e-3, 1e3], masses log-uniform in [1e-6, 1e6].
SpectralMeasure random_measure(Rng& rng, int max_atoms = 50);

// Random irreducible reversible chain on m states: stationary law bounded
// away from zero, symmetric edge weights S, M = S / pi row-wise, scaled to a
// kernel (with positive diagonal) or generator.
ReversibleChain random_reversible(Rng& rng, ChainKind kind, std::size_t m);

}  // namespace l2cut
