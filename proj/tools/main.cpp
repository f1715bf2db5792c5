#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "l2cut/analysis.hpp"
#include "l2cut/errors.hpp"
#include "l2cut/families.hpp"
#include "l2cut/io.hpp"
#include "l2cut/kernels.hpp"
#include "l2cut/measure.hpp"
#include "l2cut/product.hpp"
#include "l2cut/spectral.hpp"
#include "l2cut/sweep.hpp"
#include "l2cut/verify.hpp"

using json = nlohmann::json;
using namespace l2cut;

namespace {

// 12 significant digits everywhere so golden-file comparisons are stable
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json num_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

struct KV {
  std::vector<std::pair<std::string, std::string>> rows;
  void add(const std::string& k, double v) { rows.emplace_back(k, num(v)); }
  void add(const std::string& k, const std::string& v) {
    rows.emplace_back(k, v);
  }
  void print() const {
    std::size_t w = 0;
    for (const auto& [k, v] : rows) w = std::max(w, k.size());
    for (const auto& [k, v] : rows)
      std::printf("%-*s  %s\n", static_cast<int>(w), k.c_str(), v.c_str());
  }
};

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& s) {
  if (s == "table") return Format::Table;
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw DomainError("unknown format '" + s + "'");
}

// stable column names for the sweep tables
const std::vector<std::pair<std::string,
                            std::function<std::string(const DiagnosticsRow&)>>>&
row_columns() {
  static const std::vector<
      std::pair<std::string, std::function<std::string(const DiagnosticsRow&)>>>
      cols{
          {"n", [](const DiagnosticsRow& r) { return std::to_string(r.n); }},
          {"c", [](const DiagnosticsRow& r) { return num(r.c); }},
          {"eps", [](const DiagnosticsRow& r) { return num(r.eps); }},
          {"admissible",
           [](const DiagnosticsRow& r) { return r.admissible ? "1" : "0"; }},
          {"mass", [](const DiagnosticsRow& r) { return num(r.mass); }},
          {"measure_mass",
           [](const DiagnosticsRow& r) { return num(r.measure_mass); }},
          {"T2", [](const DiagnosticsRow& r) { return num(r.T2); }},
          {"gap", [](const DiagnosticsRow& r) { return num(r.gap); }},
          {"tau", [](const DiagnosticsRow& r) { return num(r.tau); }},
          {"product_T",
           [](const DiagnosticsRow& r) { return num(r.product_T); }},
          {"product_tau",
           [](const DiagnosticsRow& r) { return num(r.product_tau); }},
          {"window_mix",
           [](const DiagnosticsRow& r) { return num(r.window_mix); }},
          {"window_tau",
           [](const DiagnosticsRow& r) { return num(r.window_tau); }},
          {"gap_lower",
           [](const DiagnosticsRow& r) { return num(r.gap_lower); }},
          {"gap_upper",
           [](const DiagnosticsRow& r) { return num(r.gap_upper); }},
          {"product_T_lower",
           [](const DiagnosticsRow& r) { return num(r.product_T_lower); }},
          {"product_T_upper",
           [](const DiagnosticsRow& r) { return num(r.product_T_upper); }},
      };
  return cols;
}

void print_rows_csv(const std::vector<DiagnosticsRow>& rows,
                    const std::vector<std::string>& select) {
  const auto& cols = row_columns();
  std::vector<std::size_t> keep;
  if (select.empty()) {
    for (std::size_t i = 0; i < cols.size(); ++i) keep.push_back(i);
  } else {
    for (const std::string& name : select) {
      bool found = false;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (cols[i].first == name) {
          keep.push_back(i);
          found = true;
          break;
        }
      if (!found) throw DomainError("unknown column '" + name + "'");
    }
  }
  for (std::size_t k = 0; k < keep.size(); ++k)
    std::printf("%s%s", k ? "," : "", cols[keep[k]].first.c_str());
  std::printf("\n");
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < keep.size(); ++k)
      std::printf("%s%s", k ? "," : "", cols[keep[k]].second(r).c_str());
    std::printf("\n");
  }
}

json row_json(const DiagnosticsRow& r) {
  return json{{"n", r.n},
              {"c", r.c},
              {"eps", r.eps},
              {"admissible", r.admissible},
              {"mass", num_json(r.mass)},
              {"measure_mass", num_json(r.measure_mass)},
              {"T2", num_json(r.T2)},
              {"gap", num_json(r.gap)},
              {"tau", num_json(r.tau)},
              {"product_T", num_json(r.product_T)},
              {"product_tau", num_json(r.product_tau)},
              {"window_mix", num_json(r.window_mix)},
              {"window_tau", num_json(r.window_tau)},
              {"gap_lower", num_json(r.gap_lower)},
              {"gap_upper", num_json(r.gap_upper)},
              {"product_T_lower", num_json(r.product_T_lower)},
              {"product_T_upper", num_json(r.product_T_upper)}};
}

void print_rows(const std::vector<DiagnosticsRow>& rows, Format fmt,
                const std::vector<std::string>& columns = {}) {
  if (fmt == Format::Csv) {
    print_rows_csv(rows, columns);
    return;
  }
  if (fmt == Format::Json) {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    std::printf("%s\n", arr.dump(2).c_str());
    return;
  }
  for (const auto& r : rows) {
    std::printf(
        "n=%-10lld c=%-8s eps=%-8s %s T2=%-14s gap=%-14s tau=%-14s "
        "T2*gap=%-14s tau*gap=%s\n",
        r.n, num(r.c).c_str(), num(r.eps).c_str(),
        r.admissible ? "ok " : "n/a", num(r.T2).c_str(), num(r.gap).c_str(),
        num(r.tau).c_str(), num(r.product_T).c_str(),
        num(r.product_tau).c_str());
  }
}

// ---- analyze ----

int cmd_analyze_measure(const std::string& path,
                        const std::vector<double>& c_list,
                        const std::vector<double>& eps_list, Format fmt) {
  const SpectralMeasure v = load_measure_table(path);
  json out;
  KV kv;
  kv.add("atoms", static_cast<double>(v.size()));
  kv.add("total_mass", v.total_mass());
  out["atoms"] = v.size();
  out["total_mass"] = v.total_mass();
  if (!v.empty()) {
    kv.add("min_rate", v.min_rate());
    out["min_rate"] = v.min_rate();
  }
  for (double eps : eps_list) {
    const double t = mixing_time(v, eps);
    kv.add("T[eps=" + num(eps) + "]", t);
    out["mixing"][num(eps)] = t;
  }
  for (double c : c_list) {
    if (!(c > 0.0 && c < v.total_mass())) {
      kv.add("c=" + num(c), "inadmissible");
      out["cutoff"][num(c)] = nullptr;
      continue;
    }
    const double gap = truncated_gap(v, c);
    const auto tau = cutoff_time(v, c);
    kv.add("gap[c=" + num(c) + "]", gap);
    kv.add("tau[c=" + num(c) + "]", tau.value);
    kv.add("alpha[c=" + num(c) + "]", std::sqrt(tau.value * gap));
    out["cutoff"][num(c)] = {{"gap", gap},
                             {"tau", tau.value},
                             {"maximizer", tau.arg},
                             {"alpha", std::sqrt(tau.value * gap)}};
  }
  if (fmt == Format::Json)
    std::printf("%s\n", out.dump(2).c_str());
  else
    kv.print();
  return 0;
}

int cmd_analyze(const std::string& path, const std::string& measure_path,
                const std::vector<double>& c_list,
                const std::vector<double>& eps_list, double compare_theta,
                Format fmt) {
  if (!measure_path.empty())
    return cmd_analyze_measure(measure_path, c_list, eps_list, fmt);

  const ChainFile cf = load_chain_file(path);
  const ValidationReport rep = validate(cf.chain);
  if (!rep.ok) throw ValidationError("invalid chain: " + rep.detail);

  const SpectralData sd = decompose(cf.chain, cf.mu);
  const SpectralMeasure v = sd.measure();

  json out;
  KV kv;
  kv.add("kind", std::string(cf.chain.kind == ChainKind::Discrete
                                 ? "discrete"
                                 : "continuous"));
  kv.add("states", static_cast<double>(cf.chain.size()));
  kv.add("balance_residual", rep.balance_residual);
  kv.add("chi_square_mass", sd.chi_square());
  out["kind"] =
      cf.chain.kind == ChainKind::Discrete ? "discrete" : "continuous";
  out["states"] = cf.chain.size();
  out["chi_square_mass"] = sd.chi_square();
  for (std::size_t i = 0; i < sd.values.size(); ++i) {
    out["spectrum"].push_back(
        {{"value", sd.values[i]}, {"weight", sd.weights[i]}});
    kv.add("value[" + std::to_string(i) + "]",
           num(sd.values[i]) + "  weight " + num(sd.weights[i]));
  }
  for (std::size_t k = 0; k < v.size(); ++k)
    out["measure"].push_back({{"rate", v.rate(k)}, {"mass", v.mass(k)}});
  kv.add("measure_atoms", static_cast<double>(v.size()));
  kv.add("measure_mass", v.total_mass());
  out["measure_mass"] = v.total_mass();

  if (sd.chi_square() <= 1e-15 || v.empty()) {
    kv.add("note", std::string("already mixed: distance is 0 for every t"));
    out["already_mixed"] = true;
    for (double eps : eps_list) out["mixing"][num(eps)] = 0.0;
  } else {
    for (double eps : eps_list) {
      const double t = l2_mixing_time(sd, eps);
      kv.add("T2[eps=" + num(eps) + "]", t);
      out["mixing"][num(eps)] = t;
    }
    for (double c : c_list) {
      if (!(c > 0.0 && c < v.total_mass())) {
        kv.add("c=" + num(c), std::string("inadmissible"));
        out["cutoff"][num(c)] = nullptr;
        continue;
      }
      const CutoffDiagnostics d = diagnostics(sd, c, eps_list);
      kv.add("j[c=" + num(c) + "]", static_cast<double>(d.j_index));
      kv.add("gap[c=" + num(c) + "]", d.gap);
      kv.add("tau[c=" + num(c) + "]", d.tau);
      kv.add("alpha[c=" + num(c) + "]", d.alpha);
      kv.add("window_mix[c=" + num(c) + "]", d.window_mix);
      kv.add("window_tau[c=" + num(c) + "]", d.window_tau);
      json jc = {{"j", d.j_index},
                 {"gap", d.gap},
                 {"tau", d.tau},
                 {"alpha", d.alpha},
                 {"window_mix", d.window_mix},
                 {"window_tau", d.window_tau},
                 {"product_tau", d.product_tau}};
      for (std::size_t e = 0; e < d.eps.size(); ++e) {
        jc["product_T"][num(d.eps[e])] = d.product_T[e];
        jc["window_ratio"][num(d.eps[e])] = d.window_ratio[e];
      }
      out["cutoff"][num(c)] = jc;
    }
    const double cap = std::sqrt(0.5 * std::min(v.total_mass(), 1.0));
    for (double eps : eps_list) {
      if (!(eps > 0.0 && eps < cap)) continue;
      const auto [lo, hi] = mixing_time_sandwich(sd, eps);
      kv.add("sandwich[eps=" + num(eps) + "]",
             num(lo) + " <= T2 <= " + num(hi));
      out["sandwich"][num(eps)] = {lo, hi};
    }
  }
  if (compare_theta > 0.0) {
    if (cf.chain.kind != ChainKind::Discrete)
      throw DomainError("--theta compares a discrete kernel against its "
                        "continuized chain");
    const double c = c_list.front();
    const double eps = eps_list.front();
    const ComparisonReport cr =
        compare_lazy_continuous(cf.chain, cf.mu, compare_theta, c, eps);
    kv.add("compare.theta", cr.theta);
    kv.add("compare.tau_cont", cr.tau_cont);
    kv.add("compare.tau_lazy", cr.tau_lazy);
    kv.add("compare.tau_ratio", cr.tau_ratio);
    kv.add("compare.T_cont", cr.t_cont);
    kv.add("compare.T_lazy_steps", cr.t_lazy_steps);
    kv.add("compare.T_lazy_real", cr.t_lazy_real);
    kv.add("compare.ratio_real", cr.ratio_real);
    kv.add("compare.window", num(cr.lower) + " .. " + num(cr.upper));
    kv.add("compare.bounds_ok",
           std::string(cr.eigen_bounds_ok && cr.tau_ratio_ok &&
                               cr.mixing_ratio_ok
                           ? "yes"
                           : "NO"));
    if (cr.theta0) kv.add("compare.theta0", *cr.theta0);
    if (cr.t_self_steps) kv.add("compare.T_self_steps", *cr.t_self_steps);
    json jc = {{"theta", cr.theta},
               {"tau_cont", cr.tau_cont},
               {"tau_lazy", cr.tau_lazy},
               {"tau_ratio", cr.tau_ratio},
               {"T_cont", cr.t_cont},
               {"T_lazy_steps", cr.t_lazy_steps},
               {"T_lazy_real", cr.t_lazy_real},
               {"ratio_real", cr.ratio_real},
               {"lower", cr.lower},
               {"upper", cr.upper},
               {"bounds_ok", cr.eigen_bounds_ok && cr.tau_ratio_ok &&
                                 cr.mixing_ratio_ok}};
    if (cr.theta0) jc["theta0"] = *cr.theta0;
    out["compare"] = jc;
  }
  if (fmt == Format::Json)
    std::printf("%s\n", out.dump(2).c_str());
  else
    kv.print();
  return 0;
}

// ---- product ----

int cmd_product(const std::string& path, const std::vector<double>& c_list,
                const std::vector<double>& eps_list, std::size_t tensor_cap,
                Format fmt) {
  const ProductSpec spec = load_product_file(path);
  const ProductSpectral ps = assemble(spec);
  const ProductEvaluator ev(spec);

  json out;
  KV kv;
  kv.add("factors", static_cast<double>(spec.factors.size()));
  kv.add("levels", static_cast<double>(ps.rho.size()));
  kv.add("factor_mass", ps.total_mass());
  out["factors"] = spec.factors.size();
  out["levels"] = ps.rho.size();
  out["factor_mass"] = ps.total_mass();

  for (double eps : eps_list) {
    const double agg = factor_mixing_time(ev, eps);
    const double t2 = product_mixing_time(ev, eps);
    kv.add("aggregate_T[eps=" + num(eps) + "]", agg);
    kv.add("T2[eps=" + num(eps) + "]", t2);
    out["aggregate_T"][num(eps)] = agg;
    out["T2"][num(eps)] = t2;
  }
  for (double c : c_list) {
    if (!(c > 0.0 && c < ps.total_mass())) {
      kv.add("c=" + num(c), std::string("inadmissible"));
      out["cutoff"][num(c)] = nullptr;
      continue;
    }
    const std::size_t j = truncated_index(ps, c);
    const auto tau = cutoff_time(ps, c);
    kv.add("j[c=" + num(c) + "]", static_cast<double>(j));
    kv.add("rho_j[c=" + num(c) + "]", ps.rho[j - 1]);
    kv.add("tau[c=" + num(c) + "]", tau.value);
    json jc = {{"j", j}, {"rho_j", ps.rho[j - 1]}, {"tau", tau.value}};
    try {
      const BracketCheck bc = bracket_check(spec, c, tensor_cap);
      kv.add("bracket[c=" + num(c) + "]",
             num(bc.lower) + " <= " + num(bc.mid) + " <= " + num(bc.upper) +
                 (bc.pass ? "  ok" : "  VIOLATED"));
      jc["bracket"] = {{"lower", bc.lower},
                       {"mid", bc.mid},
                       {"upper", num_json(bc.upper)},
                       {"pass", bc.pass}};
    } catch (const DomainError&) {
      kv.add("bracket[c=" + num(c) + "]", std::string("tensor beyond cap"));
    }
    out["cutoff"][num(c)] = jc;
  }
  if (fmt == Format::Json)
    std::printf("%s\n", out.dump(2).c_str());
  else
    kv.print();
  return 0;
}

// ---- family ----

FamilyFn family_from_config(const FamilyConfig& cfg) {
  if (cfg.family == "two-state" || cfg.family == "machinery") {
    const Profile prof = Profile::parse(cfg.profile, cfg.a, cfg.b);
    const Sequence xs = parse_sequence(cfg.x_text);
    const Sequence ls = parse_sequence(cfg.ell_text);
    return two_state_family_fn(
        uniform_two_state_family(prof, cfg.A, cfg.B, xs.fn, ls.fn));
  }
  if (cfg.family == "counterexample") return counterexample_family_fn();
  if (cfg.family == "complete-graph") return complete_graph_family_fn(cfg.r);
  throw DomainError("unknown family '" + cfg.family + "'");
}

int cmd_family(const std::string& path, int jobs, Format fmt,
               const std::vector<std::string>& columns) {
  const FamilyConfig cfg = load_family_config(path);
  const auto rows = family_sweep(family_from_config(cfg), cfg.n_list,
                                 cfg.c_list, cfg.eps_list, jobs);
  print_rows(rows, fmt, columns);
  if (cfg.eps_list.size() >= 2 && fmt == Format::Table) {
    std::vector<double> sorted = cfg.eps_list;
    std::sort(sorted.begin(), sorted.end());
    const auto ratios = precutoff_ratios(rows, sorted.front(), sorted.back());
    for (const auto& r : ratios)
      std::printf("ratio n=%-10lld T(%s)/T(%s) = %s\n", r.n,
                  num(sorted.front()).c_str(), num(sorted.back()).c_str(),
                  num(r.ratio).c_str());
  }
  return 0;
}

// ---- scenarios ----

int scenario_machinery(double a, double b, double alpha,
                       const std::vector<long long>& n_list, double A,
                       double B, double c) {
  const Profile prof = Profile::parse("explogpow", a, b);
  std::printf(
      "machinery: weights f(t)=exp(%s*log(1+t)^%s), x=floor(n^%s), "
      "ell=n-x+1, A=%s B=%s, c=%s\n",
      num(a).c_str(), num(b).c_str(), num(alpha).c_str(), num(A).c_str(),
      num(B).c_str(), num(c).c_str());
  std::printf("%-9s %-7s %-9s %-15s %-15s %-15s %-8s %-15s %-8s\n", "n", "x",
              "ell", "tau(spec)", "tau/q", "kappa/(2rp_x)", "ratio",
              "headline", "ratio");
  for (long long n : n_list) {
    const long long x = static_cast<long long>(
        std::floor(std::pow(static_cast<double>(n), alpha) + 1e-9));
    const long long ell = n - x + 1;
    if (x < 1 || ell < 1) throw DomainError("n too small for this alpha");
    auto fam = uniform_two_state_family(
        prof, A, B, [x](long long) { return x; },
        [ell](long long) { return ell; });
    double q = 0.0;
    for (long long i = x; i < x + ell; ++i)
      q += std::exp(prof.log_at(static_cast<double>(i)));
    const ProductSpectral ps = assemble(fam.build(n));
    const double tau = cutoff_time(ps, c).value;
    const double scaled = tau / q;
    const double r = A + B;
    const double px = std::exp(prof.log_at(static_cast<double>(x)));
    const double kappa = predicted_kappa(prof, static_cast<double>(x),
                                         static_cast<double>(ell));
    const double pred = kappa / (2.0 * r * px);
    const double headline = alpha * std::log(static_cast<double>(n)) /
                            (2.0 * std::pow(static_cast<double>(n), alpha));
    std::printf("%-9lld %-7lld %-9lld %-15s %-15s %-15s %-8s %-15s %-8s\n", n,
                x, ell, num(tau).c_str(), num(scaled).c_str(),
                num(pred).c_str(), num(scaled / pred).c_str(),
                num(headline).c_str(), num(scaled / headline).c_str());
  }
  return 0;
}

int scenario_counterexample(long long n, const std::vector<double>& As) {
  std::printf("two-block family at n=%lld: D_n(A n^2) against the limit\n",
              n);
  for (double A : As) {
    const double t = A * static_cast<double>(n) * static_cast<double>(n);
    const double dn = counterexample_distance_sq(n, t);
    const double lim = counterexample_limit(A);
    std::printf("A=%-8s D_n=%-16s limit=%-16s rel_err=%s\n", num(A).c_str(),
                num(dn).c_str(), num(lim).c_str(),
                std::isinf(lim) ? "-" : num(std::fabs(dn - lim) / lim).c_str());
  }
  return 0;
}

int scenario_comparison(const std::vector<double>& rs,
                        const std::vector<double>& thetas, long long states) {
  std::printf(
      "point-mass start on the %lld-state uniform complete graph: "
      "ratio of cutoff times vs -log(theta+(1-theta)r)/(1-r)\n",
      states);
  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  bool all_ok = true;
  for (double r : rs) {
    const CompleteGraphChain cg = complete_graph_chain(pi, r);
    const std::vector<double> mu = delta_at(states, 0);
    for (double theta : thetas) {
      const double closed = cg.tau_ratio(theta);
      const double c = 0.5;
      const SpectralData cont = decompose(cg.continuized(), mu);
      const SpectralData lazy = decompose(cg.lazy(theta), mu);
      const double got = cutoff_time(cont.measure(), c).value /
                         cutoff_time(lazy.measure(), c).value;
      const bool in_window = closed > 1.0 - theta && closed < -std::log(theta);
      const bool ok = std::fabs(got - closed) <= 1e-9 * closed && in_window;
      all_ok = all_ok && ok;
      std::printf(
          "r=%-6s theta=%-6s computed=%-16s closed=%-16s window=(%s, %s) %s\n",
          num(r).c_str(), num(theta).c_str(), num(got).c_str(),
          num(closed).c_str(), num(1.0 - theta).c_str(),
          num(-std::log(theta)).c_str(), ok ? "ok" : "MISMATCH");
    }
  }
  return all_ok ? 0 : 2;
}

int scenario_two_state(const std::string& profile, double a, double b,
                       double A, double B, const std::string& x_text,
                       const std::string& ell_text,
                       const std::vector<long long>& n_list, double c) {
  const Profile prof = Profile::parse(profile, a, b);
  auto fam = uniform_two_state_family(prof, A, B, parse_sequence(x_text).fn,
                                      parse_sequence(ell_text).fn);
  std::printf("%-10s %-8s %-10s %-14s %-14s %-14s %-14s %-14s\n", "n", "x",
              "ell", "peak", "kappa", "t_n", "b_n", "tau(c)");
  for (long long n : n_list) {
    const double peak = profile_peak(fam, n);
    const PeakTime pt = peak_time(fam, n);
    const ProductSpectral ps = assemble(fam.build(n));
    const double tau = cutoff_time(ps, c).value;
    std::string kappa = "-";  // no prediction for the no-cutoff profile
    try {
      kappa = num(predicted_kappa(prof, static_cast<double>(fam.x_of(n)),
                                  static_cast<double>(fam.ell_of(n))));
    } catch (const DomainError&) {
    }
    std::printf("%-10lld %-8lld %-10lld %-14s %-14s %-14s %-14s %-14s%s\n",
                n, fam.x_of(n), fam.ell_of(n), num(peak).c_str(),
                kappa.c_str(), num(pt.t).c_str(), num(pt.b).c_str(),
                num(tau).c_str(),
                pt.monotone ? "" : "  [rates not monotone]");
  }
  return 0;
}

// ---- verify ----

int cmd_verify(std::uint64_t seed, const SuiteCounts& counts, Format fmt) {
  const VerifyReport rep = run_property_suite(seed, counts);
  if (fmt == Format::Json) {
    json out;
    out["seed"] = seed;
    out["ok"] = rep.ok;
    out["total_cases"] = rep.total_cases;
    for (const auto& s : rep.suites)
      out["suites"].push_back({{"name", s.name},
                               {"cases", s.cases},
                               {"failures", s.failures},
                               {"worst", s.worst},
                               {"worst_seed", s.worst_seed}});
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    for (const auto& s : rep.suites)
      std::printf("%-30s cases=%-7lld failures=%-5lld worst=%-12s seed=%llu\n",
                  s.name.c_str(), s.cases, s.failures, num(s.worst).c_str(),
                  static_cast<unsigned long long>(s.worst_seed));
    std::printf("%s: %lld cases across %zu suites (seed %llu)\n",
                rep.ok ? "PASS" : "FAIL", rep.total_cases, rep.suites.size(),
                static_cast<unsigned long long>(seed));
  }
  return rep.ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral cutoff analysis for reversible finite Markov chains"};
  app.require_subcommand(1);
  app.fallthrough();  // --format may follow the subcommand
  std::string format_name = "table";
  app.add_option("--format", format_name, "table, csv or json")
      ->capture_default_str();

  auto* analyze = app.add_subcommand(
      "analyze", "spectrum, measure and cutoff quantities of one chain");
  std::string chain_path, measure_path;
  std::vector<double> c_list{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> eps_list{0.1, 0.5, 1.0};
  analyze->add_option("--chain", chain_path, "chain file");
  analyze->add_option("--measure", measure_path,
                      "two-column rate/mass table (instead of --chain)");
  analyze->add_option("--c", c_list, "truncation levels");
  analyze->add_option("--eps", eps_list, "distance thresholds");
  double compare_theta = 0.0;
  analyze->add_option("--theta", compare_theta,
                      "also compare the kernel's theta-lazy version with "
                      "its continuized chain (discrete chains only)");

  auto* product = app.add_subcommand(
      "product", "factor-level analysis of a continuous-time product chain");
  std::string spec_path;
  std::size_t tensor_cap = 1u << 20;
  product->add_option("--spec", spec_path, "product spec file")->required();
  product->add_option("--c", c_list, "truncation levels");
  product->add_option("--eps", eps_list, "distance thresholds");
  product->add_option("--tensor-cap", tensor_cap,
                      "tensor enumeration cap for the bracket check");

  auto* family =
      app.add_subcommand("family", "sweep a parameterized family over n");
  std::string config_path;
  int jobs = 1;
  family->add_option("--config", config_path, "family config file")
      ->required();
  family->add_option("--jobs", jobs, "parallel workers (output order fixed)");
  std::vector<std::string> columns;
  family->add_option("--columns", columns,
                     "subset of CSV columns to emit (default: all)");

  auto* scenario = app.add_subcommand("scenario", "built-in studies");
  scenario->require_subcommand(1);

  auto* mach = scenario->add_subcommand(
      "machinery", "growing products of two-state chains, accelerated clock");
  double a = 1.0, b = 1.0, alpha = 0.5, A = 0.5, B = 0.5, c_level = 0.25;
  std::vector<long long> n_list{10000, 100000, 1000000};
  mach->add_option("--a", a);
  mach->add_option("--b", b);
  mach->add_option("--alpha", alpha);
  mach->add_option("--A", A);
  mach->add_option("--B", B);
  mach->add_option("--c", c_level);
  mach->add_option("--n", n_list);

  auto* cex = scenario->add_subcommand(
      "counterexample", "bounded-product family with growing tail mass");
  long long cex_n = 100000;
  std::vector<double> cex_A{0.25, 0.5, 1.0};
  cex->add_option("--n", cex_n);
  cex->add_option("--A", cex_A, "evaluate D_n at t = A n^2");

  auto* comp = scenario->add_subcommand(
      "comparison", "lazy kernels against the continuized chain");
  std::vector<double> comp_r{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<double> comp_theta{0.6, 0.75, 0.9};
  long long comp_states = 16;
  comp->add_option("--r", comp_r);
  comp->add_option("--theta", comp_theta);
  comp->add_option("--states", comp_states);

  auto* two = scenario->add_subcommand(
      "two-state", "peak statistics of a two-state product family");
  std::string profile_name = "explogpow";
  std::string x_text = "n^0.5", ell_text = "n - n^0.5 + 1";
  two->add_option("--profile", profile_name, "exp, explogpow or logpow");
  two->add_option("--a", a);
  two->add_option("--b", b);
  two->add_option("--A", A);
  two->add_option("--B", B);
  two->add_option("--x-n", x_text);
  two->add_option("--ell-n", ell_text);
  two->add_option("--n", n_list);
  two->add_option("--c", c_level);

  auto* verify = app.add_subcommand(
      "verify", "seeded randomized invariant suites; exit 3 on failure");
  std::uint64_t seed = 42;
  SuiteCounts counts;
  verify->add_option("--seed", seed);
  verify->add_option("--measures", counts.measures);
  verify->add_option("--chains", counts.chains);
  verify->add_option("--kernels", counts.kernels);
  verify->add_option("--products", counts.products);
  verify->add_option("--brackets", counts.brackets);
  verify->add_option("--comparisons", counts.comparisons);

  auto* exp = app.add_subcommand(
      "export", "normalize and re-emit chain/spec/measure files");
  std::string out_path, exp_chain, exp_spec, measure_out;
  exp->add_option("--chain", exp_chain, "chain file to normalize");
  exp->add_option("--spec", exp_spec, "product spec file to normalize");
  exp->add_option("--out", out_path, "output path")->required();
  exp->add_option("--measure-out", measure_out,
                  "also write the chain's step measure here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // 0 covers --help; everything else is usage
  }

  try {
    const Format fmt = parse_format(format_name);
    if (*analyze) {
      if (chain_path.empty() && measure_path.empty())
        throw DomainError("analyze needs --chain or --measure");
      return cmd_analyze(chain_path, measure_path, c_list, eps_list,
                         compare_theta, fmt);
    }
    if (*product)
      return cmd_product(spec_path, c_list, eps_list, tensor_cap, fmt);
    if (*family) return cmd_family(config_path, jobs, fmt, columns);
    if (*scenario) {
      if (*mach) return scenario_machinery(a, b, alpha, n_list, A, B, c_level);
      if (*cex) return scenario_counterexample(cex_n, cex_A);
      if (*comp) return scenario_comparison(comp_r, comp_theta, comp_states);
      if (*two)
        return scenario_two_state(profile_name, a, b, A, B, x_text, ell_text,
                                  n_list, c_level);
    }
    if (*verify) return cmd_verify(seed, counts, fmt);
    if (*exp) {
      if (!exp_chain.empty()) {
        const ChainFile cf = load_chain_file(exp_chain);
        write_chain_file(out_path, cf.chain, cf.mu);
        if (!measure_out.empty())
          write_measure_table(measure_out,
                              decompose(cf.chain, cf.mu).measure());
      } else if (!exp_spec.empty()) {
        write_product_file(out_path, load_product_file(exp_spec));
      } else {
        throw DomainError("export needs --chain or --spec");
      }
      return 0;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
