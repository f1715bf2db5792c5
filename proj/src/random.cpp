#include "l2cut/random.hpp"

#include <cmath>

namespace l2cut {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  for (auto& s : s_) s = splitmix64(seed);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + uniform() * (hi - lo);
}

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

std::uint64_t Rng::below(std::uint64_t n) { return next() % n; }

SpectralMeasure random_measure(Rng& rng, int max_atoms) {
  const int m = 1 + static_cast<int>(rng.below(max_atoms));
  std::vector<SpectralMeasure::Atom> atoms;
  atoms.reserve(m);
  for (int i = 0; i < m; ++i)
    atoms.push_back({rng.log_uniform(1e-3, 1e3), rng.log_uniform(1e-6, 1e6)});
  return SpectralMeasure(std::move(atoms));
}

ReversibleChain random_reversible(Rng& rng, ChainKind kind, std::size_t m) {
  std::vector<double> pi(m);
  double sum = 0.0;
  for (double& p : pi) {
    p = rng.uniform(0.2, 1.0);
    sum += p;
  }
  for (double& p : pi) p /= sum;

  Matrix s(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double w = rng.uniform(0.05, 1.0);
      s(i, j) = w;
      s(j, i) = w;
    }

  // M(i,j) = S(i,j)/pi(i) keeps pi(i) M(i,j) symmetric
  Matrix mat(m);
  double max_row = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      mat(i, j) = s(i, j) / pi[i];
      row += mat(i, j);
    }
    max_row = std::max(max_row, row);
  }

  if (kind == ChainKind::Discrete) {
    // scale so that every row sums below 1, leaving a positive diagonal
    const double scale = 1.0 / (max_row * (1.0 + rng.uniform(0.05, 0.5)));
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) {
          mat(i, j) *= scale;
          row += mat(i, j);
        }
      mat(i, i) = 1.0 - row;
    }
  } else {
    // scale rates to order one
    const double scale = 1.0 / max_row;
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        if (i != j) {
          mat(i, j) *= scale;
          row += mat(i, j);
        }
      mat(i, i) = -row;
    }
  }
  return ReversibleChain{kind, std::move(mat), std::move(pi)};
}

}  // namespace l2cut
