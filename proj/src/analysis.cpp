#include "l2cut/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "l2cut/errors.hpp"

namespace l2cut {

CutoffDiagnostics diagnostics(const SpectralData& sd, double c,
                              std::span<const double> eps_list) {
  const SpectralMeasure v = sd.measure();
  CutoffDiagnostics d;
  d.c = c;
  d.mass = sd.chi_square();
  d.measure_mass = v.total_mass();
  if (!(c > 0.0 && c < d.measure_mass))
    throw DomainError("diagnostics: c = " + std::to_string(c) +
                      " outside (0, measure mass = " +
                      std::to_string(d.measure_mass) +
                      "); chi-square mass = " + std::to_string(d.mass));

  const std::size_t idx = truncated_gap_index(v, c);
  d.j_index = idx + 1;
  d.gap = 0.5 * v.rate(idx);
  d.tau = cutoff_time(v, c).value;
  d.alpha = std::sqrt(d.tau * d.gap);
  d.product_tau = d.tau * d.gap;
  d.window_mix = 1.0 / d.gap;
  d.window_tau = std::sqrt(d.tau / d.gap);
  for (double eps : eps_list) {
    const double t = l2_mixing_time(sd, eps);
    d.eps.push_back(eps);
    d.mixing.push_back(t);
    d.product_T.push_back(t * d.gap);
    d.window_ratio.push_back(std::fabs(t - d.tau) / d.window_tau);
  }
  return d;
}

CutoffDiagnostics diagnostics(const ReversibleChain& chain,
                              std::span<const double> mu, double c,
                              std::span<const double> eps_list) {
  return diagnostics(decompose(chain, mu), c, eps_list);
}

std::pair<double, double> mixing_time_sandwich(const SpectralData& sd,
                                               double eps) {
  const SpectralMeasure v = sd.measure();
  const double cap = std::sqrt(0.5 * std::min(v.total_mass(), 1.0));
  if (!(eps > 0.0 && eps < cap))
    throw DomainError("mixing_time_sandwich requires 0 < eps < sqrt(min(mass,1)/2)");
  const double e2 = eps * eps;
  double lower = cutoff_time(v, 2.0 * e2).value;
  double upper = (6.0 / (e2 * e2)) * cutoff_time(v, 0.5 * e2).value;
  if (sd.kind == ChainKind::Discrete) upper += 1.0;
  return {lower, upper};
}

ReversibleChain lazy_chain(const ReversibleChain& chain, double theta) {
  if (chain.kind != ChainKind::Discrete)
    throw DomainError("lazy_chain requires a discrete-time kernel");
  if (!(theta > 0.0 && theta < 1.0))
    throw DomainError("lazy_chain requires theta in (0, 1)");
  ReversibleChain out = chain;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j)
      out.matrix(i, j) =
          (1.0 - theta) * chain.matrix(i, j) + (i == j ? theta : 0.0);
  return out;
}

ReversibleChain continuize(const ReversibleChain& chain) {
  if (chain.kind != ChainKind::Discrete)
    throw DomainError("continuize requires a discrete-time kernel");
  ReversibleChain out = chain;
  out.kind = ChainKind::Continuous;
  for (std::size_t i = 0; i < out.size(); ++i) out.matrix(i, i) -= 1.0;
  return out;
}

ComparisonReport compare_lazy_continuous(const ReversibleChain& chain,
                                         std::span<const double> mu,
                                         double theta, double c, double eps) {
  if (chain.kind != ChainKind::Discrete)
    throw DomainError("comparison requires a discrete-time kernel");
  if (!(theta > 0.5 && theta < 1.0))
    throw DomainError("comparison requires theta in (1/2, 1): the upper "
                      "ratio bound -log(2 theta - 1)/2 is undefined below");

  ComparisonReport rep;
  rep.theta = theta;
  rep.c = c;
  rep.eps = eps;
  rep.lower = 1.0 - theta;
  rep.upper = -std::log(2.0 * theta - 1.0) / 2.0;

  const SpectralData base = decompose(chain, mu);

  // continuized chain shares eigenvectors: lambda = 1 - beta
  SpectralData cont;
  cont.kind = ChainKind::Continuous;
  {
    std::vector<std::pair<double, double>> lam;
    for (std::size_t i = 0; i < base.values.size(); ++i)
      lam.emplace_back(1.0 - base.values[i], base.weights[i]);
    std::sort(lam.begin(), lam.end());
    for (auto& [l, w] : lam) {
      cont.values.push_back(l);
      cont.weights.push_back(w);
    }
  }

  SpectralData lazy;
  lazy.kind = ChainKind::Discrete;
  {
    std::vector<std::pair<double, double>> bet;
    for (std::size_t i = 0; i < base.values.size(); ++i)
      bet.emplace_back(theta + (1.0 - theta) * base.values[i],
                       base.weights[i]);
    // theta > 1/2 keeps every eigenvalue positive: |beta| order = beta order
    std::sort(bet.begin(), bet.end(), std::greater<>());
    for (auto& [b, w] : bet) {
      lazy.values.push_back(b);
      lazy.weights.push_back(w);
    }
  }

  const SpectralMeasure vc = cont.measure();
  const SpectralMeasure vl = lazy.measure();
  rep.tau_cont = cutoff_time(vc, c).value;
  rep.tau_lazy = cutoff_time(vl, c).value;
  rep.tau_ratio = rep.tau_cont / rep.tau_lazy;

  rep.t_cont = l2_mixing_time(cont, eps);
  rep.t_lazy_steps = l2_mixing_time(lazy, eps);
  const double e2 = eps * eps;
  rep.t_lazy_real = vl.total_mass() <= e2 ? 0.0 : mixing_time(vl, e2);
  rep.ratio_real = rep.t_lazy_real > 0.0 ? rep.t_cont / rep.t_lazy_real : 0.0;
  rep.ratio_steps =
      rep.t_lazy_steps > 0.0 ? rep.t_cont / rep.t_lazy_steps : 0.0;

  const double tol = 1e-12;
  rep.eigen_bounds_ok = true;
  for (std::size_t i = 1; i < base.values.size(); ++i) {
    const double lam = 1.0 - base.values[i];
    const double bt = theta + (1.0 - theta) * base.values[i];
    const double nl = -std::log(bt);
    if (nl + tol * std::max(1.0, lam) < (1.0 - theta) * lam ||
        nl - tol * std::max(1.0, lam) > rep.upper * lam) {
      rep.eigen_bounds_ok = false;
      break;
    }
  }
  rep.tau_ratio_ok = rep.tau_ratio >= rep.lower * (1.0 - 1e-12) &&
                     rep.tau_ratio <= rep.upper * (1.0 + 1e-12);
  rep.mixing_ratio_ok =
      rep.t_cont == 0.0 || rep.t_lazy_real == 0.0 ||
      (rep.ratio_real >= rep.lower * (1.0 - 1e-9) &&
       rep.ratio_real <= rep.upper * (1.0 + 1e-9));

  double diag_min = 1.0;
  for (std::size_t i = 0; i < chain.size(); ++i)
    diag_min = std::min(diag_min, chain.matrix(i, i));
  if (diag_min > 0.5) {
    rep.theta0 = diag_min;
    rep.t_self_steps = l2_mixing_time(base, eps);
  }
  return rep;
}

}  // namespace l2cut
