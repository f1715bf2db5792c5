#include "l2cut/spectral.hpp"

#include <cmath>

#include "doctest.h"
#include "l2cut/errors.hpp"
#include "l2cut/families.hpp"
#include "l2cut/linalg.hpp"
#include "l2cut/random.hpp"

using namespace l2cut;

namespace {

ReversibleChain two_state_generator(double A, double B) {
  Matrix m(2);
  m(0, 0) = -A;
  m(0, 1) = A;
  m(1, 0) = B;
  m(1, 1) = -B;
  return make_chain(ChainKind::Continuous, std::move(m));
}

}  // namespace

TEST_CASE("validation accepts detailed balance and rejects defects") {
  const ReversibleChain good = two_state_generator(0.3, 0.7);
  CHECK(validate(good).ok);

  // row sums off
  Matrix k(2);
  k(0, 0) = 0.4;
  k(0, 1) = 0.5;  // sums to 0.9
  k(1, 0) = 0.5;
  k(1, 1) = 0.5;
  ReversibleChain bad{ChainKind::Discrete, k, {0.5, 0.5}};
  const auto rep = validate(bad);
  CHECK_FALSE(rep.ok);
  CHECK(rep.row_residual == doctest::Approx(0.1));
  CHECK_THROWS_AS(require_valid(bad), ValidationError);

  // non-reversible 3-cycle: K(x, x+1) = 0.9, K(x, x-1) = 0.1
  Matrix c(3);
  for (std::size_t i = 0; i < 3; ++i) {
    c(i, (i + 1) % 3) = 0.9;
    c(i, (i + 2) % 3) = 0.1;
  }
  ReversibleChain cyc{ChainKind::Discrete, c, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
  const auto crep = validate(cyc);
  CHECK_FALSE(crep.ok);
  CHECK(crep.balance_residual > 0.5);  // 0.9 vs 0.1 across each edge
}

TEST_CASE("stationary solve") {
  Matrix m(2);
  m(0, 0) = -0.3;
  m(0, 1) = 0.3;
  m(1, 0) = 0.7;
  m(1, 1) = -0.7;
  const auto pi = solve_stationary(m, ChainKind::Continuous);
  CHECK(pi[0] == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(0.3).epsilon(1e-12));

  // symmetric kernel -> uniform
  Matrix s(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s(i, j) = i == j ? 0.5 : 0.25;
  for (double p : solve_stationary(s, ChainKind::Discrete))
    CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // complete-graph kernel keeps its pi
  const std::vector<double> pih{0.1, 0.2, 0.3, 0.4};
  const CompleteGraphChain cg = complete_graph_chain(pih, 0.4);
  const auto got = solve_stationary(cg.kernel.matrix, ChainKind::Discrete);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(got[i] == doctest::Approx(pih[i]).epsilon(1e-12));

  // reducible input must not produce a stationary law
  Matrix r(2);
  r(0, 0) = 1.0;
  r(1, 1) = 1.0;
  CHECK_THROWS_AS(solve_stationary(r, ChainKind::Discrete), ValidationError);
}

TEST_CASE("decompose: two-state and complete-graph spectra") {
  const ReversibleChain ch = two_state_generator(0.5, 0.5);
  const SpectralData sd = decompose(ch, delta_at(2, 0));
  REQUIRE(sd.values.size() == 2);
  CHECK(sd.values[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(sd.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sd.weights[1] == doctest::Approx(1.0).epsilon(1e-12));

  // A=0.2, B=0.8: nonzero rate A+B = 1, weight A/B = 0.25
  const SpectralData uneven = decompose(two_state_generator(0.2, 0.8),
                                        delta_at(2, 0));
  CHECK(uneven.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(uneven.weights[1] == doctest::Approx(0.25).epsilon(1e-12));

  // uniform complete graph on 5 states: one decay rate 1 - r, total mass 4
  const std::vector<double> pih(5, 0.2);
  const CompleteGraphChain cg = complete_graph_chain(pih, 0.35);
  const SpectralData csd = decompose(cg.continuized(), delta_at(5, 0));
  const SpectralMeasure cv = csd.measure();
  REQUIRE(cv.size() == 1);  // multiplicity merged
  CHECK(cv.rate(0) == doctest::Approx(2.0 * 0.65).epsilon(1e-12));
  CHECK(cv.mass(0) == doctest::Approx(4.0).epsilon(1e-10));

  // starting from stationarity every weight vanishes
  const SpectralData at_pi = decompose(ch, std::vector<double>{0.5, 0.5});
  CHECK(at_pi.chi_square() <= 1e-20);
  CHECK(at_pi.measure().empty());
}

TEST_CASE("distances: spectral, direct and the transform identity") {
  const ReversibleChain ch = two_state_generator(0.5, 0.5);
  const SpectralData sd = decompose(ch, delta_at(2, 0));
  CHECK(sd.distance(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(sd.distance(0.0) ==
        doctest::Approx(std::sqrt(sd.chi_square())).epsilon(1e-12));
  CHECK(l2_distance_direct(ch, delta_at(2, 0), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));  // sqrt(1/pi - 1) = 1

  // complete graph, continuous: sqrt(1/pi - 1) e^{-(1-r) t}
  const std::vector<double> pih(4, 0.25);
  const CompleteGraphChain cg = complete_graph_chain(pih, 0.5);
  const ReversibleChain cont = cg.continuized();
  for (double t : {0.0, 0.5, 2.0})
    CHECK(l2_distance_direct(cont, delta_at(4, 0), t) ==
          doctest::Approx(std::sqrt(3.0) * std::exp(-0.5 * t))
              .epsilon(1e-10));

  // random agreement, both kinds (bulk runs live in the verify suite)
  Rng rng(17);
  for (int it = 0; it < 10; ++it) {
    const auto kind = it % 2 ? ChainKind::Discrete : ChainKind::Continuous;
    const ReversibleChain chain = random_reversible(rng, kind, 6);
    const auto mu = delta_at(6, rng.below(6));
    const SpectralData s = decompose(chain, mu);
    for (int k = 0; k < 8; ++k) {
      const double t = kind == ChainKind::Discrete ? k : 0.3 * k;
      CHECK(s.distance(t) ==
            doctest::Approx(l2_distance_direct(chain, mu, t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("measure conversion rules") {
  // continuous two-state: single atom (2(A+B), A/B)
  const SpectralData sd =
      decompose(two_state_generator(0.5, 0.5), delta_at(2, 0));
  const SpectralMeasure v = sd.measure();
  REQUIRE(v.size() == 1);
  CHECK(v.rate(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(v.mass(0) == doctest::Approx(1.0).epsilon(1e-12));

  // discrete: |beta| grouping merges 0.5 and -0.5; beta = 0 weight is
  // excluded from the measure and reported separately
  SpectralData disc;
  disc.kind = ChainKind::Discrete;
  disc.values = {1.0, 0.5, -0.5, 0.0};
  disc.weights = {1.0, 0.3, 0.5, 0.2};
  const SpectralMeasure dv = disc.measure();
  REQUIRE(dv.size() == 1);
  CHECK(dv.rate(0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(dv.mass(0) == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(disc.zero_weight() == doctest::Approx(0.2));
  // transform equals the distance squared for integer times >= 1
  for (int m = 1; m <= 4; ++m)
    CHECK(laplace_transform(dv, m) ==
          doctest::Approx(disc.distance(m) * disc.distance(m))
              .epsilon(1e-12));

  // a periodic kernel has |beta| = 1 and no decaying measure
  SpectralData per;
  per.kind = ChainKind::Discrete;
  per.values = {1.0, -1.0};
  per.weights = {1.0, 1.0};
  CHECK_THROWS_AS(per.measure(), DomainError);
}

TEST_CASE("discrete mixing times are minimal integers") {
  // kernel with beta = 0.5 on one direction: d(m)^2 = w 0.25^m
  SpectralData sd;
  sd.kind = ChainKind::Discrete;
  sd.values = {1.0, 0.5};
  sd.weights = {1.0, 3.0};
  // d(m) <= eps  <=>  3 * 0.25^m <= eps^2
  CHECK(l2_mixing_time(sd, 2.0) == 0.0);       // already below at t = 0
  CHECK(l2_mixing_time(sd, 0.9) == 1.0);       // 0.75 <= 0.81
  CHECK(l2_mixing_time(sd, 0.5) == 2.0);       // 0.1875 <= 0.25
  CHECK(l2_mixing_time(sd, 0.05) == 6.0);      // 3*0.25^6 = 7.3e-4 <= 2.5e-3
  CHECK_THROWS_AS(l2_mixing_time(sd, 0.0), DomainError);
}

TEST_CASE("direct oracle guards") {
  const ReversibleChain ch = two_state_generator(0.5, 0.5);
  CHECK_THROWS_AS(l2_distance_direct(ch, delta_at(2, 0), -1.0), DomainError);
  Matrix k(2);
  k(0, 0) = 0.5;
  k(0, 1) = 0.5;
  k(1, 0) = 0.5;
  k(1, 1) = 0.5;
  ReversibleChain disc{ChainKind::Discrete, k, {0.5, 0.5}};
  CHECK_THROWS_AS(l2_distance_direct(disc, delta_at(2, 0), 1.5), DomainError);
}

TEST_CASE("expm matches closed forms") {
  // diagonal
  Matrix d(2);
  d(0, 0) = -1.0;
  d(1, 1) = 2.0;
  const Matrix ed = expm(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(ed(0, 1) == doctest::Approx(0.0));

  // nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]]
  Matrix nil(2);
  nil(0, 1) = 1.0;
  const Matrix en = expm(nil);
  CHECK(en(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(en(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(en(1, 0) == doctest::Approx(0.0));

  // 2x2 generator: exp(tL) = I + (1 - e^{-(A+B)t})/(A+B) * L, scaled norms
  const double A = 0.3, B = 0.9, t = 40.0;  // exercises scaling/squaring
  Matrix l(2);
  l(0, 0) = -A * t;
  l(0, 1) = A * t;
  l(1, 0) = B * t;
  l(1, 1) = -B * t;
  const Matrix h = expm(l);
  const double f = (1.0 - std::exp(-(A + B) * t)) / (A + B);
  CHECK(h(0, 0) == doctest::Approx(1.0 - f * A).epsilon(1e-12));
  CHECK(h(0, 1) == doctest::Approx(f * A).epsilon(1e-12));
  CHECK(h(1, 0) == doctest::Approx(f * B).epsilon(1e-12));
}

TEST_CASE("jacobi eigensolver on a known matrix") {
  // [[2,1],[1,2]] has eigenvalues 1 and 3
  Matrix s(2);
  s(0, 0) = 2.0;
  s(0, 1) = 1.0;
  s(1, 0) = 1.0;
  s(1, 1) = 2.0;
  auto eig = jacobi_eigen(s);
  std::vector<double> vals = eig.values;
  std::sort(vals.begin(), vals.end());
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(vals[1] == doctest::Approx(3.0).epsilon(1e-14));
}
