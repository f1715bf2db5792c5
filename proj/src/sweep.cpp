#include "l2cut/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "l2cut/errors.hpp"
#include "l2cut/families.hpp"
#include "l2cut/kernels.hpp"

namespace l2cut {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// min t with sum_i log1p(w_i e^{-r_i t}) <= log1p(eps^2): the exact product
// mixing time when every atom is its own coordinate
double product_crossing(const SpectralMeasure& merged,
                        std::span<const double> rates2,
                        std::span<const double> weights, double eps2,
                        std::vector<double>& scratch) {
  const double target = std::log1p(eps2);
  scratch.resize(rates2.size());
  auto value = [&](double t) {
    kernels::exp_terms(rates2, weights, t, scratch);
    double sum = 0.0;
    for (double e : scratch) sum += std::log1p(e);
    return sum;
  };
  if (value(0.0) <= target) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, std::log(std::max(merged.total_mass() / eps2,
                                              2.0))) /
              merged.min_rate();
  for (int guard = 0; guard < 200 && value(hi) > target; ++guard) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

double entry_mixing_time(const SweepEntry& e, const SpectralMeasure& v,
                         double eps, std::vector<double>& scratch) {
  const double eps2 = eps * eps;
  if (e.mass <= eps2) return 0.0;
  if (e.one_atom_factors)
    return product_crossing(v, e.rates2, e.weights, eps2, scratch);
  if (!e.discrete) return v.total_mass() <= eps2 ? 0.0 : mixing_time(v, eps2);
  const double t = v.total_mass() <= eps2 ? 0.0 : mixing_time(v, eps2);
  long long m = std::max(1LL, static_cast<long long>(std::floor(t)) - 1);
  while (laplace_transform(v, static_cast<double>(m)) > eps2) ++m;
  return static_cast<double>(m);
}

}  // namespace

std::vector<DiagnosticsRow> family_sweep(const FamilyFn& family,
                                         std::span<const long long> n_list,
                                         std::span<const double> c_list,
                                         std::span<const double> eps_list,
                                         int jobs) {
  const std::size_t per_n = c_list.size() * eps_list.size();
  std::vector<DiagnosticsRow> rows(n_list.size() * per_n);

  auto compute_n = [&](std::size_t ni) {
    const long long n = n_list[ni];
    const SweepEntry entry = family(n);
    std::vector<SpectralMeasure::Atom> atoms;
    atoms.reserve(entry.rates2.size());
    for (std::size_t i = 0; i < entry.rates2.size(); ++i)
      atoms.push_back({entry.rates2[i], entry.weights[i]});
    const SpectralMeasure v(std::move(atoms), 1e-10);
    std::vector<double> scratch;

    for (std::size_t ci = 0; ci < c_list.size(); ++ci) {
      const double c = c_list[ci];
      const bool admissible = c > 0.0 && c < v.total_mass();
      double gap = kNaN, tau = kNaN, gap_lo = kNaN, gap_hi = kNaN;
      if (admissible) {
        gap = 0.5 * truncated_gap(v, c);
        tau = cutoff_time(v, c).value;
        gap_hi = gap;
        gap_lo = 0.5 * truncated_gap(v, std::log1p(c));
      }
      for (std::size_t ei = 0; ei < eps_list.size(); ++ei) {
        DiagnosticsRow& row =
            rows[ni * per_n + ci * eps_list.size() + ei];
        row.n = n;
        row.c = c;
        row.eps = eps_list[ei];
        row.admissible = admissible;
        row.mass = entry.mass;
        row.measure_mass = v.total_mass();
        row.T2 = entry_mixing_time(entry, v, eps_list[ei], scratch);
        row.gap = gap;
        row.tau = tau;
        row.product_T = row.T2 * gap;
        row.product_tau = tau * gap;
        row.window_mix = 1.0 / gap;
        row.window_tau = std::sqrt(tau / gap);
        row.gap_lower = entry.product ? gap_lo : gap;
        row.gap_upper = gap_hi;
        row.product_T_lower = row.T2 * row.gap_lower;
        row.product_T_upper = row.T2 * row.gap_upper;
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(jobs, static_cast<int>(n_list.size())));
  if (workers == 1) {
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) compute_n(ni);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t ni = cursor.fetch_add(1); ni < n_list.size();
             ni = cursor.fetch_add(1))
          compute_n(ni);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::vector<MixingRatio> precutoff_ratios(
    std::span<const DiagnosticsRow> rows, double eps1, double eps2) {
  if (!(eps1 < eps2))
    throw DomainError("precutoff_ratios requires eps1 < eps2");
  std::vector<MixingRatio> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].eps != eps1) continue;
    // find the eps2 partner for the same (n, c)
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[j].n == rows[i].n && rows[j].c == rows[i].c &&
          rows[j].eps == eps2) {
        if (!out.empty() && out.back().n == rows[i].n) break;  // one per n
        out.push_back({rows[i].n, rows[i].T2, rows[j].T2,
                       rows[j].T2 > 0.0 ? rows[i].T2 / rows[j].T2 : kNaN});
        break;
      }
    }
  }
  return out;
}

namespace {

SweepEntry one_atom_product_entry(std::vector<double> rates2,
                                  std::vector<double> weights) {
  SweepEntry e;
  double log_mass = 0.0;
  for (double w : weights) log_mass += std::log1p(w);
  e.mass = std::expm1(log_mass);  // +inf when the true mass overflows
  e.rates2 = std::move(rates2);
  e.weights = std::move(weights);
  e.product = true;
  e.one_atom_factors = true;
  return e;
}

}  // namespace

FamilyFn two_state_family_fn(TwoStateProductFamily fam) {
  return [fam = std::move(fam)](long long n) {
    const ProductSpec spec = fam.build(n);
    std::vector<double> rates2, weights;
    rates2.reserve(spec.factors.size());
    weights.reserve(spec.factors.size());
    for (const auto& f : spec.factors) {
      rates2.push_back(2.0 * f.weight * f.spectral.values[1]);
      weights.push_back(f.spectral.weights[1]);
    }
    return one_atom_product_entry(std::move(rates2), std::move(weights));
  };
}

FamilyFn counterexample_family_fn() {
  return [](long long n) {
    const ProductSpec spec = counterexample_build(n);
    std::vector<double> rates2, weights;
    rates2.reserve(spec.factors.size());
    weights.reserve(spec.factors.size());
    for (const auto& f : spec.factors) {
      rates2.push_back(2.0 * f.weight * f.spectral.values[1]);
      weights.push_back(f.spectral.weights[1]);
    }
    return one_atom_product_entry(std::move(rates2), std::move(weights));
  };
}

FamilyFn complete_graph_family_fn(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw DomainError("complete-graph family requires r in (0,1)");
  return [r](long long n) {
    if (n < 2) throw DomainError("complete-graph family requires n >= 2");
    SweepEntry e;
    e.rates2 = {2.0 * (1.0 - r)};
    e.weights = {static_cast<double>(n - 1)};
    e.mass = static_cast<double>(n - 1);
    return e;
  };
}

double log_log_slope(std::span<const double> n, std::span<const double> y) {
  if (n.size() != y.size() || n.size() < 2)
    throw DomainError("log_log_slope needs two aligned samples at least");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double lx = std::log(n[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double m = static_cast<double>(n.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace l2cut
