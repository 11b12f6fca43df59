#include <doctest.h>

#include "support.hpp"

#include <opecalc/oracle.hpp>

using namespace opecalc;
using opecalc::testing::nf;

namespace {

// c (z-w)^e, differentiated one variable at a time with the power rule
struct Power {
  Scalar c;
  int e;
};

Power dz(Power p) { return {p.c * p.e, p.e - 1}; }
Power dw(Power p) { return {-p.c * p.e, p.e - 1}; }

SingularPart skew_image(const Engine& eng, const SingularPart& ab, int sign) {
  SingularPart out;
  const int top = ab.max_pole();
  for (int m = 0; m < top; ++m) {
    NormalForm v;
    for (int i = 0; m + i + 1 <= top; ++i) {
      const Scalar c = Scalar(sign * (((m + i + 1) % 2) ? -1 : 1)) / factorial(i);
      v.add(eng.derive(ab.at(m + i + 1), i), c);
    }
    out.set(m + 1, v);
  }
  return out;
}

}  // namespace

TEST_CASE("pole derivative matches repeated differentiation") {
  for (int m = 1; m <= 4; ++m)
    for (int a = 0; a <= 3; ++a)
      for (int b = 0; b <= 3; ++b) {
        Power p{Scalar(1), -m};
        for (int i = 0; i < a; ++i) p = dz(p);
        for (int i = 0; i < b; ++i) p = dw(p);
        // the order of differentiation does not matter
        Power q{Scalar(1), -m};
        for (int i = 0; i < b; ++i) q = dw(q);
        for (int i = 0; i < a; ++i) q = dz(q);
        const PoleDerivative d = pole_derivative(m, a, b);
        CAPTURE(m);
        CAPTURE(a);
        CAPTURE(b);
        CHECK(d.coef == p.c);
        CHECK(-d.order == p.e);
        CHECK(p.c == q.c);
      }
  CHECK(pole_derivative(2, 1, 0).coef == -2);
  CHECK(pole_derivative(2, 0, 1).coef == 2);
  CHECK(pole_derivative(1, 2, 1).coef == 6);
  CHECK(pole_derivative(1, 2, 1).order == 4);
}

TEST_CASE("oracle examples") {
  Engine boson(load_preset("free-boson"));
  const Monomial jj = nf(boson, ":J J:").begin()->first;
  SingularPart tt = oracle_contract(jj, jj, boson.algebra());
  tt *= Scalar(1, 4);
  SingularPart want;
  want.set(4, NormalForm::unit(Scalar(1, 2)));
  want.set(2, nf(boson, "2*T"));
  want.set(1, nf(boson, "d T"));
  CHECK(tt == want);
  CHECK(oracle_contract(Monomial{{0, 0}}, Monomial{}, boson.algebra()).empty());

  Engine fermion(load_preset("free-fermion"));
  SingularPart pp = oracle_contract(Monomial{{0, 0}}, Monomial{{0, 0}}, fermion.algebra());
  CHECK(pp.max_pole() == 1);
  CHECK(pp.at(1) == NormalForm::unit());

  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  const AlgebraDef& g = ghost.algebra();
  SingularPart jb = oracle_contract(nf(ghost, "J"), nf(ghost, "b"), g);
  SingularPart bj = oracle_contract(nf(ghost, "b"), nf(ghost, "J"), g);
  CHECK(jb.max_pole() == 1);
  CHECK(jb.at(1) == nf(ghost, "b"));
  CHECK(bj.at(1) == nf(ghost, "-b"));
}

TEST_CASE("oracle pairing signs") {
  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  const AlgebraDef& g = ghost.algebra();
  const Factor b{g.index_of("b"), 0}, c{g.index_of("c"), 0};
  // b(z) :b c:(w): pairing b with c has to jump over b
  const auto terms = oracle_pairings(Monomial{b}, Monomial{b, c}, g);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].sign == -1);
  CHECK(terms[0].matching == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK(terms[0].right_survivors == std::vector<Factor>{b});
  // two pairings in :b c:(z) :b c:(w)
  CHECK(oracle_pairings(Monomial{b, c}, Monomial{b, c}, g).size() == 3);
}

TEST_CASE("oracle preconditions") {
  const AlgebraDef vir = parse_algebra(
      "generator T parity=0 weight=2\ncontract T T = 1/2/dz^4 + 2*T/dz^2 + d T/dz^1\n");
  CHECK_FALSE(is_central(vir));
  CHECK_THROWS_AS(oracle_contract(Monomial{{0, 0}}, Monomial{{0, 0}}, vir), Error);

  const AlgebraDef ghost = load_preset("bc-ghost", {{"L", Scalar(2)}});
  const Factor b{ghost.index_of("b"), 0}, c{ghost.index_of("c"), 0};
  CHECK_THROWS_AS(oracle_contract(Monomial{c, b}, Monomial{b}, ghost), Error);
  CHECK_THROWS_AS(oracle_contract(Monomial{b, b}, Monomial{c}, ghost), Error);
  CHECK(is_central(ghost));
}

TEST_CASE("engine agrees with the oracle") {
  for (const auto& [name, alg] : testing::presets(Scalar(2))) {
    Engine eng(alg);
    const testing::SweepResult r = testing::oracle_sweep(eng, 4, 2);
    CAPTURE(name);
    CHECK(r.checked >= 57);
    CHECK(r.mismatches.empty());
    for (std::size_t i = 0; i < r.mismatches.size() && i < 5; ++i) MESSAGE(r.mismatches[i]);
  }
}

TEST_CASE("oracle respects skew symmetry") {
  for (const auto& [name, alg] : testing::presets(Scalar(1, 3))) {
    Engine eng(alg);
    const auto monos = testing::canonical_monomials(alg, 2, 1);
    for (const auto& m : monos)
      for (const auto& n : monos) {
        const int sign = koszul_sign(alg.parity(m), alg.parity(n));
        CHECK(oracle_contract(n, m, alg) == skew_image(eng, oracle_contract(m, n, alg), sign));
      }
  }
}
