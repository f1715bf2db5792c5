#include "l2cut/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "l2cut/analysis.hpp"
#include "l2cut/chain.hpp"
#include "l2cut/errors.hpp"
#include "l2cut/families.hpp"
#include "l2cut/measure.hpp"
#include "l2cut/product.hpp"
#include "l2cut/random.hpp"
#include "l2cut/spectral.hpp"

namespace l2cut {

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return x;
}

class Collector {
 public:
  void record(const std::string& suite, double residual, double tol,
              std::uint64_t seed) {
    SuiteResult& r = suites_[suite];
    r.name = suite;
    ++r.cases;
    if (!(residual <= tol)) ++r.failures;
    if (residual > r.worst) {
      r.worst = residual;
      r.worst_seed = seed;
    }
  }

  VerifyReport report() const {
    VerifyReport rep;
    for (const auto& [name, r] : suites_) {
      rep.suites.push_back(r);
      rep.total_cases += r.cases;
      if (r.failures > 0) rep.ok = false;
    }
    return rep;
  }

 private:
  std::map<std::string, SuiteResult> suites_;
};

double rel_gap(double value, double bound) {  // how far value exceeds bound
  return (value - bound) / std::max({std::fabs(bound), std::fabs(value), 1.0});
}

std::vector<double> random_mu(Rng& rng, std::size_t m) {
  if (rng.below(2) == 0) return delta_at(m, rng.below(m));
  std::vector<double> mu(m);
  double sum = 0.0;
  for (double& x : mu) {
    x = rng.uniform(0.01, 1.0);
    sum += x;
  }
  for (double& x : mu) x /= sum;
  return mu;
}

void measure_suites(Collector& col, std::uint64_t seed, int count) {
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = mix(seed, 1000 + i);
    Rng rng(s);
    const SpectralMeasure v = random_measure(rng);
    const double mass = v.total_mass();
    const double scale = 1.0 / v.min_rate();

    double prev = laplace_transform(v, 0.0);
    for (int k = -4; k <= 4; ++k) {
      const double t = scale * std::pow(2.0, k);
      const double a = laplace_transform(v, t);
      const double b = laplace_by_parts(v, t);
      col.record("laplace/parts-identity",
                 std::fabs(a - b) / std::max({a, b, 1e-300}), 1e-10, s);
      col.record("laplace/monotonicity", a < prev ? 0.0 : 1.0, 0.5, s);
      prev = a;
    }

    for (double frac : {0.9, 0.3, 0.01}) {
      const double eps = frac * mass;
      const double t = mixing_time(v, eps);
      if (t > 0.0)
        col.record("laplace/mixing-consistency",
                   std::fabs(laplace_transform(v, t) - eps) / eps, 1e-9, s);
    }

    double prev_gap = 0.0, prev_tau = std::numeric_limits<double>::max();
    for (double frac : {1e-3, 0.1, 0.5, 0.9}) {
      const double c = frac * mass;
      const double gap = truncated_gap(v, c);
      const double tau = cutoff_time(v, c).value;
      double worst = std::max(rel_gap(c / (1.0 + c), laplace_transform(v, tau)),
                              rel_gap(std::log1p(c) / gap, tau));
      worst = std::max(worst, rel_gap(prev_gap, gap));    // gap nondecreasing
      worst = std::max(worst, rel_gap(tau, prev_tau));    // tau nonincreasing
      col.record("laplace/cutoff-bounds", worst, 1e-12, s);
      prev_gap = gap;
      prev_tau = tau;

      for (double sshift : {0.1, 1.0, 10.0})
        col.record("laplace/tail-bound",
                   rel_gap(laplace_transform(v, tau + sshift),
                           tail_bound(v, c, sshift)),
                   1e-12, s);

      for (double A : {0.5, 1.0, 2.0}) {
        const auto [lo, hi] = mixing_time_bracket(v, c, A);
        col.record("laplace/mixing-bracket",
                   std::max(rel_gap(lo, tau), rel_gap(tau, hi)), 1e-9, s);
      }
    }

    const double cap = 0.5 * std::min(mass, 1.0);
    for (double frac : {0.1, 0.4, 0.9}) {
      const double delta = frac * cap;
      const auto [lo, hi] = mixing_bounds(v, delta);
      const double t = mixing_time(v, delta);
      col.record("laplace/mixing-bounds",
                 std::max(rel_gap(lo, t), rel_gap(t, hi)), 1e-9, s);
    }

    for (double B : {0.5, 3.0}) {
      const double eps = 0.5 * mass;
      const double c1 = 0.2 * mass;
      const double c2 = 0.6 * mass;
      const double rhs = mixing_shift_bound(v, eps, c1, c2, B);
      const double arg = c1 +
                         c2 * std::exp(-mixing_time(v, eps) *
                                       truncated_gap(v, c1)) +
                         2.0 * eps * std::exp(-B);
      col.record("laplace/shift-bound", rel_gap(mixing_time(v, arg), rhs),
                 1e-9, s);
    }
  }
}

void chain_suites(Collector& col, std::uint64_t seed, int count) {
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = mix(seed, 2000 + i);
    Rng rng(s);
    const ChainKind kind =
        i % 2 == 0 ? ChainKind::Continuous : ChainKind::Discrete;
    const std::size_t m = 2 + rng.below(11);  // up to 12 states
    const ReversibleChain chain = random_reversible(rng, kind, m);
    const std::vector<double> mu = random_mu(rng, m);

    const FullDecomposition full = decompose_full(chain, mu);
    const SpectralData& sd = full.data;

    const double mnorm = inf_norm(chain.matrix);
    double eig_resid = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double theta = chain.kind == ChainKind::Continuous
                               ? -sd.values[k]
                               : sd.values[k];
      for (std::size_t x = 0; x < m; ++x) {
        double mv = 0.0;
        for (std::size_t y = 0; y < m; ++y)
          mv += chain.matrix(x, y) * full.eigenvectors(k, y);
        eig_resid = std::max(
            std::fabs(mv - theta * full.eigenvectors(k, x)), eig_resid);
      }
    }
    col.record("spectral/eigen-residual", eig_resid / mnorm, 1e-8, s);

    double gram = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a; b < m; ++b) {
        double dot = 0.0;
        for (std::size_t x = 0; x < m; ++x)
          dot += chain.stationary[x] * full.eigenvectors(a, x) *
                 full.eigenvectors(b, x);
        gram = std::max(gram, std::fabs(dot - (a == b ? 1.0 : 0.0)));
      }
    col.record("spectral/orthonormality", gram, 1e-8, s);

    const double chi = chi_square_mass(chain, mu);
    col.record("spectral/weight-normalization",
               std::fabs(sd.chi_square() - chi) / std::max(chi, 1e-12), 1e-8,
               s);

    const SpectralMeasure v = sd.measure();
    double worst_oracle = 0.0, worst_ident = 0.0;
    for (int k = 0; k < 20; ++k) {
      const double t =
          kind == ChainKind::Discrete ? k : 0.25 * static_cast<double>(k);
      const double d = sd.distance(t);
      worst_oracle =
          std::max(worst_oracle, std::fabs(d - l2_distance_direct(chain, mu, t)));
      if (kind == ChainKind::Continuous || k >= 1) {
        const double lt = laplace_transform(v, t);
        worst_ident = std::max(
            worst_ident, std::fabs(lt - d * d) / std::max({d * d, lt, 1e-12}));
      }
    }
    col.record("spectral/oracle-agreement", worst_oracle, 1e-8, s);
    col.record("spectral/transform-identity", worst_ident, 1e-10, s);
  }
}

void map_suites(Collector& col, std::uint64_t seed, int count) {
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = mix(seed, 3000 + i);
    Rng rng(s);
    const std::size_t m = 2 + rng.below(7);
    const ReversibleChain chain =
        random_reversible(rng, ChainKind::Discrete, m);
    const std::vector<double> mu = delta_at(m, rng.below(m));
    std::vector<double> beta = decompose(chain, mu).values;
    std::sort(beta.begin(), beta.end());

    const double theta = rng.uniform(0.5, 0.9);
    std::vector<double> lazy_vals =
        decompose(lazy_chain(chain, theta), mu).values;
    std::sort(lazy_vals.begin(), lazy_vals.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      worst = std::max(worst, std::fabs(lazy_vals[k] -
                                        (theta + (1.0 - theta) * beta[k])));
    col.record("maps/lazy-spectrum", worst, 1e-10, s);

    std::vector<double> cont_vals = decompose(continuize(chain), mu).values;
    std::sort(cont_vals.begin(), cont_vals.end(), std::greater<>());
    worst = 0.0;
    for (std::size_t k = 0; k < m; ++k)
      worst = std::max(worst, std::fabs(cont_vals[k] - (1.0 - beta[k])));
    col.record("maps/continuize-spectrum", worst, 1e-10, s);
  }
}

void comparison_suites(Collector& col, std::uint64_t seed, int count) {
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = mix(seed, 4000 + i);
    Rng rng(s);
    const std::size_t m = 2 + rng.below(7);
    const ReversibleChain chain =
        random_reversible(rng, ChainKind::Discrete, m);
    const std::vector<double> mu = delta_at(m, rng.below(m));
    const double chi = chi_square_mass(chain, mu);
    const double theta = 0.55 + 0.4 * rng.uniform();
    const double c = rng.uniform(0.1, 0.8) * chi;
    const double eps = rng.uniform(0.05, 0.5) * std::sqrt(chi);
    const ComparisonReport rep =
        compare_lazy_continuous(chain, mu, theta, c, eps);
    col.record("comparison/bounds",
               rep.eigen_bounds_ok && rep.tau_ratio_ok && rep.mixing_ratio_ok
                   ? 0.0
                   : 1.0,
               0.5, s);
  }
}

struct RandomProduct {
  ProductSpec spec;
  std::vector<ReversibleChain> chains;
  std::vector<std::vector<double>> mus;
  std::vector<double> weights;
};

RandomProduct random_product(Rng& rng, int max_factors, int max_states) {
  const int nf = 2 + static_cast<int>(rng.below(max_factors - 1));
  RandomProduct rp;
  double wsum = 0.0;
  std::vector<double> raw(nf);
  for (double& w : raw) {
    w = rng.uniform(0.2, 1.0);
    wsum += w;
  }
  const double budget = rng.uniform(0.5, 1.0);
  for (int f = 0; f < nf; ++f) {
    const std::size_t m = 2 + rng.below(max_states - 1);
    rp.chains.push_back(random_reversible(rng, ChainKind::Continuous, m));
    rp.mus.push_back(random_mu(rng, m));
    rp.weights.push_back(raw[f] / wsum * budget);
  }
  for (int f = 0; f < nf; ++f)
    rp.spec.factors.push_back(
        {decompose(rp.chains[f], rp.mus[f]), rp.weights[f]});
  return rp;
}

void product_suites(Collector& col, std::uint64_t seed, int count,
                    int bracket_count) {
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = mix(seed, 5000 + i);
    Rng rng(s);
    RandomProduct rp = random_product(rng, 4, 4);
    const ProductEvaluator ev(rp.spec);
    const TensorChain tensor =
        build_tensor(rp.chains, rp.mus, rp.weights, 4096);

    double worst_ident = 0.0, worst_sand = 0.0;
    for (double t : {0.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
      const double direct = l2_distance_direct(tensor.chain, tensor.mu, t);
      const double prod = ev.product_l2_sq(t);
      worst_ident = std::max(worst_ident,
                             std::fabs(prod - direct * direct));
      const double fs = ev.factor_sum(t);
      worst_sand = std::max(worst_sand, rel_gap(fs, prod));
      worst_sand = std::max(worst_sand, rel_gap(prod, std::expm1(fs)));
    }
    col.record("product/identity", worst_ident, 1e-8, s);
    col.record("product/sandwich", worst_sand, 1e-12, s);

    // enumerated spectrum against the dense tensor eigenvalues
    const auto atoms = full_tensor_spectrum(rp.spec);
    const SpectralData tsd = decompose(tensor.chain, tensor.mu);
    double worst_spec = 0.0, wsum = 0.0;
    for (const auto& a : atoms) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < tsd.values.size(); ++k)
        best = std::min(best, std::fabs(a.rate - tsd.values[k]));
      worst_spec = std::max(worst_spec, best / std::max(1.0, a.rate));
      wsum += a.mass;
    }
    worst_spec = std::max(
        worst_spec, std::fabs(wsum - tsd.chi_square()) /
                        std::max(tsd.chi_square(), 1e-12));
    col.record("product/spectrum", worst_spec, 1e-8, s);

    const double fmass = ev.mass();
    double worst_agg = 0.0;
    for (double frac : {0.1, 0.5}) {
      const double eps = frac * fmass;
      const double tt = factor_mixing_time(ev, eps);
      const double lo = product_mixing_time(ev, std::sqrt(std::expm1(eps)));
      const double hi = product_mixing_time(ev, std::sqrt(eps));
      worst_agg = std::max({worst_agg, rel_gap(lo, tt), rel_gap(tt, hi)});
    }
    col.record("product/aggregate-sandwich", worst_agg, 1e-9, s);

    const ProductSpectral ps = assemble(rp.spec);
    const SpectralMeasure pm = ps.measure();
    double worst_tau = 0.0;
    for (double frac : {0.05, 0.3, 0.7}) {
      const double c = frac * ps.total_mass();
      worst_tau = std::max(worst_tau,
                           std::fabs(cutoff_time(ps, c).value -
                                     cutoff_time(pm, c).value) /
                               std::max(cutoff_time(pm, c).value, 1e-12));
    }
    col.record("product/cutoff-consistency", worst_tau, 1e-12, s);
  }

  for (int i = 0; i < bracket_count; ++i) {
    const std::uint64_t s = mix(seed, 6000 + i);
    Rng rng(s);
    RandomProduct rp = random_product(rng, 4, 3);
    const ProductSpectral ps = assemble(rp.spec);
    double tensor_mass = 0.0;
    for (const auto& a : full_tensor_spectrum(rp.spec)) tensor_mass += a.mass;
    const double cmax = std::min(ps.total_mass(), tensor_mass);
    double worst = 0.0;
    for (double frac : {0.05, 0.2, 0.5, 0.8}) {
      const auto bc = bracket_check(rp.spec, frac * cmax);
      if (!bc.pass) worst = 1.0;
    }
    col.record("product/gap-bracket", worst, 0.5, s);
  }
}

}  // namespace

VerifyReport run_property_suite(std::uint64_t seed,
                                const SuiteCounts& counts) {
  Collector col;
  measure_suites(col, seed, counts.measures);
  chain_suites(col, seed, counts.chains);
  map_suites(col, seed, counts.kernels);
  comparison_suites(col, seed, counts.comparisons);
  product_suites(col, seed, counts.products, counts.brackets);
  return col.report();
}

}  // namespace l2cut
