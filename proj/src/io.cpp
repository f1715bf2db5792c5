#include "l2cut/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "l2cut/errors.hpp"

namespace l2cut {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// line-oriented reader that tracks 1-based line numbers and skips comments
class Lines {
 public:
  Lines(const std::string& text, std::string name)
      : in_(text), name_(std::move(name)) {}

  // next nonempty, uncommented line; false at end
  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++lineno_;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      std::size_t b = raw.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      std::size_t e = raw.find_last_not_of(" \t\r");
      line = raw.substr(b, e - b + 1);
      return true;
    }
    return false;
  }

  int lineno() const { return lineno_; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(name_ + ": " + msg, lineno_);
  }

 private:
  std::istringstream in_;
  std::string name_;
  int lineno_ = 0;
};

std::vector<double> parse_numbers(Lines& src, const std::string& line,
                                  std::size_t expect) {
  std::istringstream is(line);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  std::string junk;
  if (is.clear(), is >> junk; !junk.empty())
    src.fail("unexpected token '" + junk + "'");
  if (expect != 0 && out.size() != expect)
    src.fail("expected " + std::to_string(expect) + " numbers, got " +
             std::to_string(out.size()));
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

ChainFile parse_chain_file(const std::string& text, const std::string& name) {
  Lines src(text, name);
  std::string line;
  std::optional<ChainKind> kind;
  std::size_t m = 0;
  std::optional<Matrix> matrix;
  std::optional<std::vector<double>> pi, mu;

  while (src.next(line)) {
    std::istringstream is(line);
    std::string key;
    is >> key;
    std::string rest;
    std::getline(is, rest);
    if (key == "kind") {
      std::istringstream rs(rest);
      std::string v;
      rs >> v;
      if (v == "continuous")
        kind = ChainKind::Continuous;
      else if (v == "discrete")
        kind = ChainKind::Discrete;
      else
        src.fail("kind must be 'continuous' or 'discrete'");
    } else if (key == "states") {
      long long v = -1;
      std::istringstream rs(rest);
      rs >> v;
      if (v < 1) src.fail("states must be a positive integer");
      m = static_cast<std::size_t>(v);
    } else if (key == "matrix") {
      if (m == 0) src.fail("states must come before matrix");
      Matrix mt(m);
      for (std::size_t i = 0; i < m; ++i) {
        if (!src.next(line)) src.fail("matrix row missing");
        const auto row = parse_numbers(src, line, m);
        for (std::size_t j = 0; j < m; ++j) mt(i, j) = row[j];
      }
      matrix = std::move(mt);
    } else if (key == "stationary") {
      if (m == 0) src.fail("states must come before stationary");
      pi = parse_numbers(src, rest, m);
    } else if (key == "mu") {
      if (m == 0) src.fail("states must come before mu");
      mu = parse_numbers(src, rest, m);
    } else {
      src.fail("unknown directive '" + key + "'");
    }
  }
  if (!kind) throw ParseError(name + ": missing 'kind'", src.lineno());
  if (!matrix) throw ParseError(name + ": missing 'matrix'", src.lineno());

  ChainFile out;
  out.chain = pi ? make_chain(*kind, std::move(*matrix), std::move(*pi))
                 : make_chain(*kind, std::move(*matrix));
  out.mu = mu ? std::move(*mu) : delta_at(m, 0);
  double mu_sum = 0.0;
  for (double v : out.mu) {
    if (v < 0.0) throw ParseError(name + ": mu has a negative entry", 0);
    mu_sum += v;
  }
  if (std::fabs(mu_sum - 1.0) > 1e-10)
    throw ParseError(name + ": mu must sum to 1", 0);
  return out;
}

ChainFile load_chain_file(const std::string& path) {
  return parse_chain_file(read_text_file(path), path);
}

std::string format_chain_file(const ReversibleChain& chain,
                              const std::vector<double>& mu) {
  std::ostringstream out;
  out << "kind "
      << (chain.kind == ChainKind::Discrete ? "discrete" : "continuous")
      << "\nstates " << chain.size() << "\nmatrix\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    for (std::size_t j = 0; j < chain.size(); ++j)
      out << (j ? " " : "") << fmt17(chain.matrix(i, j));
    out << "\n";
  }
  out << "stationary";
  for (double p : chain.stationary) out << " " << fmt17(p);
  out << "\nmu";
  for (double v : mu) out << " " << fmt17(v);
  out << "\n";
  return out.str();
}

void write_chain_file(const std::string& path, const ReversibleChain& chain,
                      const std::vector<double>& mu) {
  write_text_file(path, format_chain_file(chain, mu));
}

SpectralMeasure parse_measure_table(const std::string& text,
                                    const std::string& name) {
  Lines src(text, name);
  std::string line;
  std::vector<SpectralMeasure::Atom> atoms;
  while (src.next(line)) {
    const auto nums = parse_numbers(src, line, 2);
    atoms.push_back({nums[0], nums[1]});
  }
  return SpectralMeasure(std::move(atoms));
}

SpectralMeasure load_measure_table(const std::string& path) {
  return parse_measure_table(read_text_file(path), path);
}

std::string format_measure_table(const SpectralMeasure& v) {
  std::ostringstream out;
  for (std::size_t k = 0; k < v.size(); ++k)
    out << fmt17(v.rate(k)) << " " << fmt17(v.mass(k)) << "\n";
  return out.str();
}

void write_measure_table(const std::string& path, const SpectralMeasure& v) {
  write_text_file(path, format_measure_table(v));
}

ProductSpec parse_product_file(const std::string& text,
                               const std::string& name,
                               const std::string& base_dir) {
  Lines src(text, name);
  std::string line;
  ProductSpec spec;
  while (src.next(line)) {
    std::istringstream is(line);
    std::string key;
    double weight;
    if (!(is >> key) || key != "factor" || !(is >> weight))
      src.fail("expected 'factor <weight>'");
    if (!src.next(line)) src.fail("factor body missing");
    if (line == "atoms") {
      SpectralData sd;
      sd.kind = ChainKind::Continuous;
      sd.values = {0.0};
      sd.weights = {1.0};
      while (src.next(line) && line != "end") {
        const auto nums = parse_numbers(src, line, 2);
        sd.values.push_back(nums[0]);
        sd.weights.push_back(nums[1]);
      }
      if (sd.values.size() < 2) src.fail("factor has no atoms");
      spec.factors.push_back({std::move(sd), weight});
    } else {
      std::istringstream cs(line);
      std::string ckey, cpath;
      cs >> ckey >> cpath;
      if (ckey != "chain" || cpath.empty())
        src.fail("expected 'atoms' or 'chain <path>'");
      const auto resolved =
          (std::filesystem::path(base_dir) / cpath).string();
      const ChainFile cf = load_chain_file(resolved);
      if (cf.chain.kind != ChainKind::Continuous)
        src.fail("product factors must be continuous-time chains");
      spec.factors.push_back({decompose(cf.chain, cf.mu), weight});
    }
  }
  spec.validate();
  return spec;
}

ProductSpec load_product_file(const std::string& path) {
  return parse_product_file(
      read_text_file(path), path,
      std::filesystem::path(path).parent_path().string());
}

std::string format_product_file(const ProductSpec& spec) {
  std::ostringstream out;
  for (const auto& f : spec.factors) {
    out << "factor " << fmt17(f.weight) << "\natoms\n";
    for (std::size_t j = 1; j < f.spectral.values.size(); ++j)
      out << fmt17(f.spectral.values[j]) << " " << fmt17(f.spectral.weights[j])
          << "\n";
    out << "end\n";
  }
  return out.str();
}

void write_product_file(const std::string& path, const ProductSpec& spec) {
  write_text_file(path, format_product_file(spec));
}

Sequence parse_sequence(const std::string& text) {
  // expr := term (('+'|'-') term)*; term := int | n | n^alpha | log n
  struct Term {
    int sign;
    enum { Const, N, Pow, Log } kind;
    double value;  // constant or exponent
  };
  std::vector<Term> terms;
  std::size_t i = 0;
  int sign = 1;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  bool expect_term = true;
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    if (!expect_term) {
      if (text[i] == '+' || text[i] == '-') {
        sign = text[i] == '+' ? 1 : -1;
        ++i;
        expect_term = true;
        continue;
      }
      throw ParseError("sequence '" + text + "': expected + or -", 1);
    }
    if (text[i] == 'n') {
      ++i;
      if (i < text.size() && text[i] == '^') {
        ++i;
        std::size_t used = 0;
        double alpha;
        try {
          alpha = std::stod(text.substr(i), &used);
        } catch (const std::exception&) {
          throw ParseError("sequence '" + text + "': bad exponent", 1);
        }
        i += used;
        terms.push_back({sign, Term::Pow, alpha});
      } else {
        terms.push_back({sign, Term::N, 0.0});
      }
    } else if (text.compare(i, 3, "log") == 0) {
      i += 3;
      skip_ws();
      bool paren = i < text.size() && text[i] == '(';
      if (paren) ++i;
      skip_ws();
      if (i >= text.size() || text[i] != 'n')
        throw ParseError("sequence '" + text + "': log takes n", 1);
      ++i;
      skip_ws();
      if (paren) {
        if (i >= text.size() || text[i] != ')')
          throw ParseError("sequence '" + text + "': missing )", 1);
        ++i;
      }
      terms.push_back({sign, Term::Log, 0.0});
    } else if (std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::size_t used = 0;
      const double v = std::stod(text.substr(i), &used);
      i += used;
      terms.push_back({sign, Term::Const, v});
    } else {
      throw ParseError("sequence '" + text + "': unexpected character '" +
                           std::string(1, text[i]) + "'",
                       1);
    }
    sign = 1;
    expect_term = false;
  }
  if (terms.empty() || expect_term)
    throw ParseError("sequence '" + text + "': empty or trailing operator", 1);

  auto fn = [terms, text](long long n) -> long long {
    double total = 0.0;
    for (const Term& t : terms) {
      double v = 0.0;
      switch (t.kind) {
        case Term::Const:
          v = t.value;
          break;
        case Term::N:
          v = static_cast<double>(n);
          break;
        case Term::Pow:
          // nudge before flooring: pow(10000, .5) may land just below 100
          v = std::floor(std::pow(static_cast<double>(n), t.value) + 1e-9);
          break;
        case Term::Log:
          v = std::floor(std::log(static_cast<double>(n)) + 1e-9);
          break;
      }
      total += t.sign * v;
    }
    return static_cast<long long>(std::llround(total));
  };
  return Sequence{text, fn};
}

FamilyConfig parse_family_config(const std::string& text,
                                 const std::string& name) {
  Lines src(text, name);
  std::string line;
  FamilyConfig cfg;
  bool have_family = false;
  while (src.next(line)) {
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "family") {
      is >> cfg.family;
      have_family = true;
    } else if (key == "profile") {
      is >> cfg.profile;
    } else if (key == "a") {
      is >> cfg.a;
    } else if (key == "b") {
      is >> cfg.b;
    } else if (key == "A") {
      is >> cfg.A;
    } else if (key == "B") {
      is >> cfg.B;
    } else if (key == "r") {
      is >> cfg.r;
    } else if (key == "x_n") {
      std::getline(is, cfg.x_text);
    } else if (key == "ell_n") {
      std::getline(is, cfg.ell_text);
    } else if (key == "n") {
      cfg.n_list.clear();
      long long v;
      while (is >> v) cfg.n_list.push_back(v);
    } else if (key == "c") {
      cfg.c_list.clear();
      double v;
      while (is >> v) cfg.c_list.push_back(v);
    } else if (key == "eps") {
      cfg.eps_list.clear();
      double v;
      while (is >> v) cfg.eps_list.push_back(v);
    } else {
      src.fail("unknown directive '" + key + "'");
    }
    if (is.bad()) src.fail("malformed value");
  }
  if (!have_family)
    throw ParseError(name + ": missing 'family'", src.lineno());
  if (cfg.n_list.empty())
    throw ParseError(name + ": missing 'n' list", src.lineno());
  if (cfg.c_list.empty() || cfg.eps_list.empty())
    throw ParseError(name + ": c and eps lists must be nonempty",
                     src.lineno());
  return cfg;
}

FamilyConfig load_family_config(const std::string& path) {
  return parse_family_config(read_text_file(path), path);
}

}  // namespace l2cut
