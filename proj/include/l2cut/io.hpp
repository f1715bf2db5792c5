#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "l2cut/chain.hpp"
#include "l2cut/families.hpp"
#include "l2cut/measure.hpp"
#include "l2cut/product.hpp"

namespace l2cut {

// ---- chain files ----------------------------------------------------------
// Structured text: '#' comments, blank lines ignored.
//   kind continuous|discrete
//   states <m>
//   matrix
//   <m rows of m decimal entries>
//   stationary <m entries>      (optional; solved when absent)
//   mu <m entries>              (optional initial law; delta at 0 otherwise)
struct ChainFile {
  ReversibleChain chain;
  std::vector<double> mu;
};

ChainFile parse_chain_file(const std::string& text, const std::string& name);
ChainFile load_chain_file(const std::string& path);
std::string format_chain_file(const ReversibleChain& chain,
                              const std::vector<double>& mu);
void write_chain_file(const std::string& path, const ReversibleChain& chain,
                      const std::vector<double>& mu);

// ---- measure tables -------------------------------------------------------
// Two numeric columns "rate mass", one atom per line.
SpectralMeasure parse_measure_table(const std::string& text,
                                    const std::string& name);
SpectralMeasure load_measure_table(const std::string& path);
std::string format_measure_table(const SpectralMeasure& v);
void write_measure_table(const std::string& path, const SpectralMeasure& v);

// ---- product spec files ---------------------------------------------------
// A list of factors, each an update weight plus either an inline atom table
// (nonzero rate, squared coefficient) or a chain file reference resolved
// relative to the spec file:
//   factor <weight>
//   atoms
//   <rate> <coefficient>
//   ...
//   end
//   factor <weight>
//   chain <relative path>
ProductSpec parse_product_file(const std::string& text,
                               const std::string& name,
                               const std::string& base_dir);
ProductSpec load_product_file(const std::string& path);
std::string format_product_file(const ProductSpec& spec);
void write_product_file(const std::string& path, const ProductSpec& spec);

// ---- integer sequences over n ----------------------------------------------
// Grammar: expr := term (('+'|'-') term)*,
//          term := <integer> | n | n^<alpha> | log n
// n^alpha and log n floor to integers, so "n - n^0.5 + 1" is the usual
// complement-of-offset length.
struct Sequence {
  std::string text;
  std::function<long long(long long)> fn;
  long long operator()(long long n) const { return fn(n); }
};
Sequence parse_sequence(const std::string& text);

// ---- family sweep configs ---------------------------------------------------
//   family two-state|machinery|counterexample|complete-graph
//   profile exp|explogpow|logpow     (two-state / machinery)
//   a <v>   b <v>   A <v>   B <v>
//   x_n <sequence>   ell_n <sequence>
//   r <v>                            (complete-graph)
//   n <list>   c <list>   eps <list>
struct FamilyConfig {
  std::string family;
  std::string profile = "explogpow";
  double a = 1.0, b = 1.0;
  double A = 0.5, B = 0.5;
  std::string x_text = "n^0.5";
  std::string ell_text = "n - n^0.5 + 1";
  double r = 0.5;
  std::vector<long long> n_list;
  std::vector<double> c_list{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> eps_list{0.1, 0.5, 1.0};
};
FamilyConfig parse_family_config(const std::string& text,
                                 const std::string& name);
FamilyConfig load_family_config(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace l2cut
