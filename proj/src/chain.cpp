#include "l2cut/chain.hpp"

#include <cmath>
#include <string>

#include "l2cut/errors.hpp"

namespace l2cut {

namespace {

std::string ij(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

// Strong connectivity of the support graph (off-diagonal nonzero entries).
bool strongly_connected(const Matrix& m) {
  const std::size_t n = m.n;
  if (n == 0) return false;
  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x || seen[y]) continue;
        const double w = forward ? m(x, y) : m(y, x);
        if (w != 0.0) {
          seen[y] = 1;
          ++count;
          stack.push_back(y);
        }
      }
    }
    return count == n;
  };
  return reach(true) && reach(false);
}

}  // namespace

ValidationReport validate(const ReversibleChain& chain) {
  const Matrix& m = chain.matrix;
  const std::size_t n = m.n;
  ValidationReport rep;
  if (n == 0) {
    rep.detail = "empty state space";
    return rep;
  }
  if (chain.stationary.size() != n) {
    rep.detail = "stationary vector size mismatch";
    return rep;
  }

  const bool discrete = chain.kind == ChainKind::Discrete;
  const double target = discrete ? 1.0 : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += m(i, j);
      const bool need_nonneg = discrete || i != j;
      if (need_nonneg && m(i, j) < 0.0) {
        rep.sign_violation = std::max(rep.sign_violation, -m(i, j));
        if (rep.detail.empty())
          rep.detail = "negative entry at " + ij(i, j);
      }
    }
    rep.row_residual = std::max(rep.row_residual, std::fabs(sum - target));
  }
  if (rep.row_residual > 1e-12 && rep.detail.empty())
    rep.detail = std::string(discrete ? "row sums deviate from 1"
                                      : "row sums deviate from 0") +
                 " by " + std::to_string(rep.row_residual);

  double pi_sum = 0.0;
  double pi_min = 1.0;
  for (double p : chain.stationary) {
    pi_sum += p;
    pi_min = std::min(pi_min, p);
  }
  rep.stationary_residual = std::fabs(pi_sum - 1.0);
  if (pi_min <= 0.0 && rep.detail.empty())
    rep.detail = "stationary vector has a nonpositive entry";
  if (rep.stationary_residual > 1e-10 && rep.detail.empty())
    rep.detail = "stationary vector does not sum to 1";

  if (pi_min > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double lhs = chain.stationary[i] * m(i, j);
        const double rhs = chain.stationary[j] * m(j, i);
        const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        const double rel = std::fabs(lhs - rhs) / scale;
        if (std::fabs(lhs - rhs) > 1e-300 && rel > rep.balance_residual) {
          rep.balance_residual = rel;
          if (rel > 1e-10 && rep.detail.empty())
            rep.detail = "detailed balance fails at " + ij(i, j) +
                         ": pi(i)M(i,j)=" + std::to_string(lhs) +
                         " vs pi(j)M(j,i)=" + std::to_string(rhs);
        }
      }
  }

  rep.irreducible = strongly_connected(m);
  if (!rep.irreducible && rep.detail.empty())
    rep.detail = "chain is not irreducible";

  rep.ok = rep.detail.empty() && rep.balance_residual <= 1e-10;
  return rep;
}

void require_valid(const ReversibleChain& chain) {
  const ValidationReport rep = validate(chain);
  if (!rep.ok) throw ValidationError("invalid chain: " + rep.detail);
}

std::vector<double> solve_stationary(const Matrix& m, ChainKind kind) {
  const std::size_t n = m.n;
  if (n == 0) throw ValidationError("empty matrix");
  // pi solves A pi = e_n with A = M^T (continuous) or M^T - I (discrete),
  // last row replaced by ones.
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(j, i);
  if (kind == ChainKind::Discrete)
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= 1.0;
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;

  std::vector<double> pi(n, 0.0);
  pi[n - 1] = 1.0;
  LuFactors f = lu_factor(std::move(a));
  lu_solve_inplace(f, pi.data());

  double sum = 0.0;
  for (double p : pi) sum += p;
  if (!(sum > 0.0))
    throw ValidationError("stationary solve produced a degenerate vector");
  for (double& p : pi) p /= sum;
  for (std::size_t i = 0; i < n; ++i)
    if (!(pi[i] > 0.0))
      throw ValidationError("stationary solve: nonpositive mass at state " +
                            std::to_string(i) + " (chain reducible?)");

  // residual check: ||pi M - target|| small
  double resid = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += pi[i] * m(i, j);
    const double target = kind == ChainKind::Discrete ? pi[j] : 0.0;
    resid = std::max(resid, std::fabs(s - target));
  }
  if (resid > 1e-10)
    throw ValidationError("stationary solve residual too large: " +
                          std::to_string(resid));
  return pi;
}

ReversibleChain make_chain(ChainKind kind, Matrix m) {
  std::vector<double> pi = solve_stationary(m, kind);
  return make_chain(kind, std::move(m), std::move(pi));
}

ReversibleChain make_chain(ChainKind kind, Matrix m,
                           std::vector<double> stationary) {
  ReversibleChain chain{kind, std::move(m), std::move(stationary)};
  require_valid(chain);
  return chain;
}

std::vector<double> delta_at(std::size_t m, std::size_t x) {
  if (x >= m) throw DomainError("delta_at: state index out of range");
  std::vector<double> mu(m, 0.0);
  mu[x] = 1.0;
  return mu;
}

double chi_square_mass(const ReversibleChain& chain,
                       std::span<const double> mu) {
  if (mu.size() != chain.size())
    throw DomainError("initial distribution size mismatch");
  double sum = 0.0;
  for (std::size_t x = 0; x < mu.size(); ++x)
    sum += mu[x] * mu[x] / chain.stationary[x];
  return sum - 1.0;
}

}  // namespace l2cut
