#include "l2cut/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "l2cut/errors.hpp"
#include "l2cut/kernels.hpp"

namespace l2cut {

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms, double merge_tol) {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i].rate > 0.0))
      throw DomainError("measure atom " + std::to_string(i) +
                        " has nonpositive rate");
    if (!(atoms[i].mass > 0.0))
      throw DomainError("measure atom " + std::to_string(i) +
                        " has nonpositive mass");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& a, const Atom& b) { return a.rate < b.rate; });
  rates_.reserve(atoms.size());
  masses_.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!rates_.empty() && a.rate - rates_.back() <= merge_tol * rates_.back()) {
      masses_.back() += a.mass;
    } else {
      rates_.push_back(a.rate);
      masses_.push_back(a.mass);
    }
  }
  cumulative_.resize(masses_.size());
  double run = 0.0;
  for (std::size_t k = 0; k < masses_.size(); ++k) {
    run += masses_[k];
    cumulative_[k] = run;
  }
}

double SpectralMeasure::min_rate() const {
  if (empty()) throw DomainError("empty measure has no minimum rate");
  return rates_.front();
}

double laplace_transform(const SpectralMeasure& v, double t) {
  if (t < 0.0) throw DomainError("laplace_transform requires t >= 0");
  return kernels::sum_exp(v.rates(), v.masses(), t).value;
}

double laplace_by_parts(const SpectralMeasure& v, double t) {
  if (!(t > 0.0)) throw DomainError("laplace_by_parts requires t > 0");
  const auto r = v.rates();
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double upper =
        k + 1 < v.size() ? kernels::exp_floor(-t * r[k + 1]) : 0.0;
    sum += v.cumulative(k) * (kernels::exp_floor(-t * r[k]) - upper);
  }
  return sum;
}

double mixing_time(const SpectralMeasure& v, double eps) {
  if (!(eps > 0.0)) throw DomainError("mixing_time requires eps > 0");
  const double mass = v.total_mass();
  if (mass <= eps) return 0.0;

  double lo = 0.0;
  double hi = std::log(mass / eps) / v.min_rate();
  // mathematically L_V(hi) <= eps already; guard against rounding
  for (int guard = 0; guard < 64 && laplace_transform(v, hi) > eps; ++guard)
    hi *= 2.0;

  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (laplace_transform(v, mid) > eps)
      lo = mid;
    else
      hi = mid;
  }

  // Newton polish pins |L_V(t) - eps| down to rounding level
  double t = hi;
  for (int it = 0; it < 4; ++it) {
    const auto e = kernels::sum_exp(v.rates(), v.masses(), t);
    if (e.slope == 0.0) break;
    double next = t - (e.value - eps) / e.slope;
    if (!(next >= lo && next <= hi)) break;
    t = next;
  }
  return t;
}

std::size_t truncated_gap_index(const SpectralMeasure& v, double c) {
  if (!(c > 0.0)) throw DomainError("truncated gap requires c > 0");
  if (!(c < v.total_mass()))
    throw DomainError("truncated gap undefined: c >= total mass (" +
                      std::to_string(c) + " >= " +
                      std::to_string(v.total_mass()) + ")");
  // first atom whose cumulative mass strictly exceeds c
  std::size_t lo = 0, hi = v.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (v.cumulative(mid) > c)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

double truncated_gap(const SpectralMeasure& v, double c) {
  return v.rate(truncated_gap_index(v, c));
}

CutoffTime cutoff_time(const SpectralMeasure& v, double c) {
  const std::size_t j = truncated_gap_index(v, c);
  CutoffTime best{-1.0, 0.0, 0};
  for (std::size_t k = j; k < v.size(); ++k) {
    const double f = std::log1p(v.cumulative(k)) / v.rate(k);
    if (f > best.value) best = {f, v.rate(k), k};
  }
  return best;
}

double tail_bound(const SpectralMeasure& v, double c, double s) {
  if (!(s > 0.0)) throw DomainError("tail_bound requires s > 0");
  const double tau = cutoff_time(v, c).value;
  const double gap = truncated_gap(v, c);
  return c + (tau + s) / (s * std::exp(s * gap));
}

std::pair<double, double> mixing_time_bracket(const SpectralMeasure& v,
                                              double c, double A) {
  if (!(A > 0.0)) throw DomainError("mixing_time_bracket requires A > 0");
  const double tau = cutoff_time(v, c).value;
  const double gap = truncated_gap(v, c);
  const double a = std::sqrt(tau * gap);
  const double lower =
      (a / (a + A)) * mixing_time(v, c + (A + a) / (A * std::exp(A * a)));
  const double upper = mixing_time(v, c / (1.0 + c));
  return {lower, upper};
}

std::pair<double, double> mixing_bounds(const SpectralMeasure& v,
                                        double delta) {
  const double cap = 0.5 * std::min(v.total_mass(), 1.0);
  if (!(delta > 0.0 && delta < cap))
    throw DomainError("mixing_bounds requires 0 < delta < min(mass,1)/2");
  const double lower = cutoff_time(v, 2.0 * delta).value;
  const double upper =
      (6.0 / (delta * delta)) * cutoff_time(v, 0.5 * delta).value;
  return {lower, upper};
}

double mixing_shift_bound(const SpectralMeasure& v, double eps, double c1,
                          double c2, double B) {
  if (!(B > 0.0)) throw DomainError("mixing_shift_bound requires B > 0");
  if (!(eps > 0.0 && eps < v.total_mass()))
    throw DomainError("mixing_shift_bound requires 0 < eps < total mass");
  const double t_eps = mixing_time(v, eps);
  (void)truncated_gap(v, c1);  // range check on c1
  return t_eps + 2.0 * B / truncated_gap(v, c2);
}

}  // namespace l2cut
