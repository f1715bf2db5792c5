#include "l2cut/product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "l2cut/errors.hpp"
#include "l2cut/kernels.hpp"

namespace l2cut {

namespace {

constexpr double kMergeTol = 1e-10;
constexpr double kWeightFloor = 1e-18;

// nonzero spectrum of one factor, merged within kMergeTol, ascending
std::vector<SpectralMeasure::Atom> factor_atoms(const SpectralData& sd,
                                                std::size_t which) {
  if (sd.kind != ChainKind::Continuous)
    throw DomainError("product factors must be continuous-time (the product "
                      "distance identity fails for kernels); factor " +
                      std::to_string(which));
  std::vector<SpectralMeasure::Atom> atoms;
  for (std::size_t j = 1; j < sd.values.size(); ++j) {
    if (!(sd.values[j] > 0.0))
      throw DomainError("factor " + std::to_string(which) +
                        " has a nonpositive nonzero rate (reducible?)");
    if (sd.weights[j] <= kWeightFloor) continue;
    atoms.push_back({sd.values[j], sd.weights[j]});
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.rate < b.rate; });
  std::vector<SpectralMeasure::Atom> merged;
  for (const auto& a : atoms) {
    if (!merged.empty() &&
        a.rate - merged.back().rate <= kMergeTol * merged.back().rate)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  return merged;
}

}  // namespace

void ProductSpec::validate() const {
  if (factors.empty()) throw DomainError("product spec has no factors");
  double sum = 0.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (!(factors[i].weight > 0.0))
      throw DomainError("factor " + std::to_string(i) +
                        " has a nonpositive update weight");
    sum += factors[i].weight;
    (void)factor_atoms(factors[i].spectral, i);  // kind + rate checks
  }
  if (sum > 1.0 + 1e-12)
    throw DomainError("update weights sum to " + std::to_string(sum) +
                      " > 1");
}

SpectralMeasure ProductSpectral::measure() const {
  std::vector<SpectralMeasure::Atom> atoms;
  atoms.reserve(rho.size());
  for (std::size_t l = 0; l < rho.size(); ++l)
    atoms.push_back({2.0 * rho[l], psi_sq[l]});
  return SpectralMeasure(std::move(atoms), kMergeTol);
}

ProductSpectral assemble(const ProductSpec& spec) {
  spec.validate();
  struct Entry {
    double rho;
    double w;
    std::size_t factor, eigen;
  };
  std::vector<Entry> entries;
  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    const auto atoms = factor_atoms(spec.factors[f].spectral, f);
    for (std::size_t k = 0; k < atoms.size(); ++k)
      entries.push_back(
          {spec.factors[f].weight * atoms[k].rate, atoms[k].mass, f, k});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.rho != b.rho) return a.rho < b.rho;
    if (a.factor != b.factor) return a.factor < b.factor;
    return a.eigen < b.eigen;
  });
  ProductSpectral ps;
  ps.rho.reserve(entries.size());
  double run = 0.0;
  for (const Entry& e : entries) {
    ps.rho.push_back(e.rho);
    ps.psi_sq.push_back(e.w);
    ps.provenance.emplace_back(e.factor, e.eigen);
    run += e.w;
    ps.prefix.push_back(run);
  }
  return ps;
}

std::size_t truncated_index(const ProductSpectral& ps, double c) {
  if (!(c > 0.0 && c < ps.total_mass()))
    throw DomainError("truncated_index requires 0 < c < total mass");
  const auto it = std::upper_bound(ps.prefix.begin(), ps.prefix.end(), c);
  return static_cast<std::size_t>(it - ps.prefix.begin()) + 1;
}

CutoffTime cutoff_time(const ProductSpectral& ps, double c) {
  const std::size_t j0 = truncated_index(ps, c);
  CutoffTime best{-1.0, 0.0, 0};
  for (std::size_t j = j0; j <= ps.rho.size(); ++j) {
    const double f = std::log1p(ps.prefix[j - 1]) / (2.0 * ps.rho[j - 1]);
    if (f > best.value) best = {f, ps.rho[j - 1], j};
  }
  return best;
}

ProductEvaluator::ProductEvaluator(const ProductSpec& spec) {
  spec.validate();
  offsets_.push_back(0);
  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    const auto atoms = factor_atoms(spec.factors[f].spectral, f);
    for (const auto& a : atoms) {
      rates2_.push_back(2.0 * spec.factors[f].weight * a.rate);
      weights_.push_back(a.mass);
    }
    offsets_.push_back(rates2_.size());
  }
  std::vector<SpectralMeasure::Atom> atoms;
  atoms.reserve(rates2_.size());
  for (std::size_t i = 0; i < rates2_.size(); ++i)
    atoms.push_back({rates2_[i], weights_[i]});
  measure_ = SpectralMeasure(std::move(atoms), kMergeTol);
  scratch_.resize(rates2_.size());
}

double ProductEvaluator::factor_sum(double t) const {
  return kernels::sum_exp(rates2_, weights_, t).value;
}

double ProductEvaluator::product_log1p(double t) const {
  kernels::exp_terms(rates2_, weights_, t, scratch_);
  double total = 0.0;
  for (std::size_t f = 0; f + 1 < offsets_.size(); ++f) {
    double d2 = 0.0;
    for (std::size_t i = offsets_[f]; i < offsets_[f + 1]; ++i)
      d2 += scratch_[i];
    total += std::log1p(d2);
  }
  return total;
}

double ProductEvaluator::product_l2_sq(double t) const {
  return std::expm1(product_log1p(t));
}

double ProductEvaluator::mass() const { return measure_.total_mass(); }

namespace {

// shared bisection: first t with f(t) <= target, f strictly decreasing
template <class F>
double crossing_time(F&& f, double f0, double target, double rate_hint) {
  if (f0 <= target) return 0.0;
  double lo = 0.0;
  double hi = std::max(std::log(f0 / target), 1.0) / rate_hint;
  for (int guard = 0; guard < 200 && f(hi) > target; ++guard) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace

double factor_mixing_time(const ProductEvaluator& ev, double eps) {
  if (!(eps > 0.0)) throw DomainError("factor_mixing_time requires eps > 0");
  return mixing_time(ev.measure(), eps);
}

double factor_mixing_time(const ProductSpec& spec, double eps) {
  return factor_mixing_time(ProductEvaluator(spec), eps);
}

double product_mixing_time(const ProductEvaluator& ev, double eps) {
  if (!(eps > 0.0)) throw DomainError("product_mixing_time requires eps > 0");
  const double target = std::log1p(eps * eps);
  const double at0 = ev.product_log1p(0.0);
  if (ev.measure().empty()) return 0.0;
  return crossing_time([&](double t) { return ev.product_log1p(t); }, at0,
                       target, ev.measure().min_rate());
}

double product_mixing_time(const ProductSpec& spec, double eps) {
  return product_mixing_time(ProductEvaluator(spec), eps);
}

std::vector<SpectralMeasure::Atom> full_tensor_spectrum(
    const ProductSpec& spec, std::size_t cap) {
  spec.validate();
  std::vector<std::vector<SpectralMeasure::Atom>> per_factor;
  double count = 1.0;
  for (std::size_t f = 0; f < spec.factors.size(); ++f) {
    per_factor.push_back(factor_atoms(spec.factors[f].spectral, f));
    count *= static_cast<double>(per_factor.back().size() + 1);
    if (count > static_cast<double>(cap))
      throw DomainError("tensor spectrum exceeds the enumeration cap (" +
                        std::to_string(cap) + " indices)");
  }
  const std::size_t nf = per_factor.size();
  std::vector<std::size_t> idx(nf, 0);  // 0 = identity coordinate
  std::vector<SpectralMeasure::Atom> out;
  out.reserve(static_cast<std::size_t>(count) - 1);
  while (true) {
    // advance odometer
    std::size_t f = 0;
    while (f < nf && idx[f] == per_factor[f].size()) {
      idx[f] = 0;
      ++f;
    }
    if (f == nf) break;
    ++idx[f];

    double rate = 0.0, weight = 1.0;
    for (std::size_t g = 0; g < nf; ++g) {
      if (idx[g] == 0) continue;
      const auto& a = per_factor[g][idx[g] - 1];
      rate += spec.factors[g].weight * a.rate;
      weight *= a.mass;
    }
    out.push_back({rate, weight});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.rate != b.rate) return a.rate < b.rate;
    return a.mass < b.mass;
  });
  return out;
}

BracketCheck bracket_check(const ProductSpec& spec, double c,
                           std::size_t cap) {
  const ProductSpectral ps = assemble(spec);
  const auto tensor = full_tensor_spectrum(spec, cap);
  if (!(c > 0.0 && c < ps.total_mass()))
    throw DomainError("bracket_check requires 0 < c < factor mass");

  std::vector<double> prefix(tensor.size());
  double run = 0.0;
  for (std::size_t l = 0; l < tensor.size(); ++l) {
    run += tensor[l].mass;
    prefix[l] = run;
  }
  if (!(c < run)) throw DomainError("bracket_check requires c < tensor mass");

  auto tensor_rate_at = [&](double level) {
    const auto it = std::upper_bound(prefix.begin(), prefix.end(), level);
    if (it == prefix.end()) return std::numeric_limits<double>::infinity();
    return tensor[static_cast<std::size_t>(it - prefix.begin())].rate;
  };

  BracketCheck out;
  out.lower = tensor_rate_at(c);
  out.mid = ps.rho[truncated_index(ps, c) - 1];
  out.upper = tensor_rate_at(std::expm1(c));
  const double tol = 1e-12 * std::max(1.0, out.mid);
  out.pass = out.lower <= out.mid + tol && out.mid <= out.upper + tol;
  return out;
}

TensorChain build_tensor(std::span<const ReversibleChain> factors,
                         std::span<const std::vector<double>> mus,
                         std::span<const double> weights, std::size_t cap) {
  if (factors.empty()) throw DomainError("no factors");
  if (mus.size() != factors.size() || weights.size() != factors.size())
    throw DomainError("factor/mu/weight count mismatch");
  std::size_t dim = 1;
  for (const auto& f : factors) {
    if (f.kind != ChainKind::Continuous)
      throw DomainError("tensor oracle requires continuous factors");
    if (dim > cap / f.size())
      throw DomainError("tensor state space exceeds the cap");
    dim *= f.size();
  }

  // strides of a mixed-radix index, factor 0 slowest
  std::vector<std::size_t> stride(factors.size());
  {
    std::size_t s = dim;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      s /= factors[f].size();
      stride[f] = s;
    }
  }

  TensorChain out;
  out.chain.kind = ChainKind::Continuous;
  out.chain.matrix = Matrix(dim);
  out.chain.stationary.assign(dim, 1.0);
  out.mu.assign(dim, 1.0);

  for (std::size_t x = 0; x < dim; ++x) {
    std::size_t rem = x;
    for (std::size_t f = 0; f < factors.size(); ++f) {
      const std::size_t xf = rem / stride[f];
      rem %= stride[f];
      out.chain.stationary[x] *= factors[f].stationary[xf];
      out.mu[x] *= mus[f][xf];
      // row x: moves that change coordinate f only
      const std::size_t base = x - xf * stride[f];
      for (std::size_t yf = 0; yf < factors[f].size(); ++yf) {
        const std::size_t y = base + yf * stride[f];
        out.chain.matrix(x, y) += weights[f] * factors[f].matrix(xf, yf);
      }
    }
  }
  return out;
}

}  // namespace l2cut
