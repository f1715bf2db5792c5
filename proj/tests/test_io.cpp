#include "l2cut/io.hpp"

#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "l2cut/analysis.hpp"
#include "l2cut/errors.hpp"

using namespace l2cut;

TEST_CASE("chain files parse, validate and round-trip") {
  const std::string text = R"(# two-state generator
kind continuous
states 2
matrix
-0.3 0.3
0.7 -0.7
mu 0 1
)";
  const ChainFile cf = parse_chain_file(text, "inline");
  CHECK(cf.chain.kind == ChainKind::Continuous);
  CHECK(cf.chain.size() == 2);
  CHECK(cf.chain.stationary[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(cf.mu[1] == 1.0);

  const std::string emitted = format_chain_file(cf.chain, cf.mu);
  const ChainFile again = parse_chain_file(emitted, "round-trip");
  CHECK(again.chain.matrix.a == cf.chain.matrix.a);
  CHECK(again.chain.stationary == cf.chain.stationary);
  CHECK(again.mu == cf.mu);

  // identical analysis output after the round trip
  const auto d1 = diagnostics(cf.chain, cf.mu, 0.2, std::vector<double>{0.5});
  const auto d2 =
      diagnostics(again.chain, again.mu, 0.2, std::vector<double>{0.5});
  CHECK(d1.tau == d2.tau);
  CHECK(d1.mixing[0] == d2.mixing[0]);
}

TEST_CASE("chain file errors carry line numbers") {
  const std::string bad = R"(kind continuous
states 2
matrix
-0.3 0.3
0.7 oops
)";
  try {
    parse_chain_file(bad, "bad");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 5);
  }

  CHECK_THROWS_AS(parse_chain_file("states 2\nmatrix\n1 0\n0 1\n", "nokind"),
                  ParseError);
  // a stochastic defect is a validation error, not a parse error
  const std::string rowsum = R"(kind discrete
states 2
matrix
0.4 0.5
0.5 0.5
)";
  CHECK_THROWS_AS(parse_chain_file(rowsum, "rowsum"), ValidationError);
}

TEST_CASE("measure tables round-trip") {
  SpectralMeasure v({{0.5, 2.0}, {1.25, 1e-4}, {700.0, 3e5}});
  const SpectralMeasure back =
      parse_measure_table(format_measure_table(v), "rt");
  REQUIRE(back.size() == v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    CHECK(back.rate(k) == v.rate(k));
    CHECK(back.mass(k) == v.mass(k));
  }
  CHECK_THROWS_AS(parse_measure_table("1.0 2.0 3.0\n", "threecol"),
                  ParseError);
}

TEST_CASE("product files: inline atoms and chain references") {
  const std::string text = R"(factor 0.2
atoms
1.0 1.0
end
factor 0.3
atoms
1.0 4.0
2.5 0.5
end
)";
  const ProductSpec spec = parse_product_file(text, "inline", ".");
  REQUIRE(spec.factors.size() == 2);
  CHECK(spec.factors[1].spectral.values[2] == 2.5);

  const ProductSpec again =
      parse_product_file(format_product_file(spec), "rt", ".");
  REQUIRE(again.factors.size() == 2);
  CHECK(again.factors[0].weight == spec.factors[0].weight);
  CHECK(again.factors[1].spectral.weights == spec.factors[1].spectral.weights);

  // chain reference resolves relative to the spec directory
  write_text_file("/tmp/l2cut_factor.chain",
                  "kind continuous\nstates 2\nmatrix\n-0.5 0.5\n0.5 -0.5\n");
  const ProductSpec with_ref = parse_product_file(
      "factor 0.4\nchain l2cut_factor.chain\n", "ref", "/tmp");
  REQUIRE(with_ref.factors.size() == 1);
  CHECK(with_ref.factors[0].spectral.values[1] ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(parse_product_file("factor 0.5\natoms\nend\n", "empty", "."),
                  ParseError);
}

TEST_CASE("sequence grammar") {
  CHECK(parse_sequence("100")(7) == 100);
  CHECK(parse_sequence("n")(42) == 42);
  CHECK(parse_sequence("n^0.5")(10000) == 100);
  CHECK(parse_sequence("n^0.5")(10) == 3);  // floor
  CHECK(parse_sequence("log n")(100) == 4);  // floor(4.605)
  CHECK(parse_sequence("log(n)")(100) == 4);
  CHECK(parse_sequence("n - n^0.5 + 1")(10000) == 9901);
  CHECK(parse_sequence("2 + n")(5) == 7);

  CHECK_THROWS_AS(parse_sequence(""), ParseError);
  CHECK_THROWS_AS(parse_sequence("n +"), ParseError);
  CHECK_THROWS_AS(parse_sequence("m"), ParseError);
  CHECK_THROWS_AS(parse_sequence("log x"), ParseError);
}

TEST_CASE("family configs") {
  const std::string text = R"(family machinery
profile explogpow
a 1
b 1
A 0.5
B 0.5
x_n n^0.5
ell_n n - n^0.5 + 1
n 100 1000
c 0.25 0.5
eps 0.1 0.5
)";
  const FamilyConfig cfg = parse_family_config(text, "inline");
  CHECK(cfg.family == "machinery");
  CHECK(parse_sequence(cfg.x_text)(10000) == 100);
  CHECK(cfg.n_list.size() == 2);
  CHECK(cfg.c_list.size() == 2);

  CHECK_THROWS_AS(parse_family_config("family x\n", "missing-n"), ParseError);
  CHECK_THROWS_AS(parse_family_config("family x\nn 10\nbogus 1\n", "bogus"),
                  ParseError);
}
