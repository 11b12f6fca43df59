#include <doctest.h>

#include "support.hpp"

#include <opecalc/oracle.hpp>

#include <fstream>

using namespace opecalc;
using opecalc::testing::nf;

namespace {

const char* kBoson = "generator J parity=0 weight=1\ncontract J J = 1/dz^2\n";

AlgebraDef ghost_table_only() {
  return parse_algebra(
      "generator b parity=1 weight=2\n"
      "generator c parity=1 weight=-1\n"
      "contract b c = 1/dz^1\n");
}

}  // namespace

TEST_CASE("boson definition") {
  const AlgebraDef alg = parse_algebra(kBoson);
  REQUIRE(alg.generators.size() == 1);
  CHECK(alg.generators[0].name == "J");
  const SingularPart& jj = alg.entry(0, 0);
  CHECK(jj.max_pole() == 2);
  CHECK(jj.at(2) == NormalForm::unit());
  CHECK(alg.central);
  CHECK(alg.degree_reducing);
}

TEST_CASE("empty input is the empty algebra") {
  const AlgebraDef alg = parse_algebra("");
  CHECK(alg.generators.empty());
  CHECK(alg.contractions.empty());
  CHECK(parse_algebra("# nothing\n\n").generators.empty());
}

TEST_CASE("missing reverse contraction is completed") {
  const AlgebraDef alg = ghost_table_only();
  const SingularPart& cb = alg.entry(alg.index_of("c"), alg.index_of("b"));
  CHECK(cb.max_pole() == 1);
  CHECK(cb.at(1) == NormalForm::unit());
}

TEST_CASE("completion is idempotent and preserves consistent pairs") {
  for (const auto& [name, alg] : testing::presets(Scalar(2))) {
    CAPTURE(name);
    CHECK(complete_contractions(alg) == alg);
    CHECK(complete_contractions(complete_contractions(alg)) == alg);
  }
  const AlgebraDef both = parse_algebra(
      "generator b parity=1 weight=2\ngenerator c parity=1 weight=-1\n"
      "contract b c = 1/dz^1\ncontract c b = 1/dz^1\n");
  CHECK(both == ghost_table_only());
}

TEST_CASE("inconsistent tables are rejected") {
  CHECK_THROWS_AS(parse_algebra("generator psi parity=1 weight=1/2\n"
                                "contract psi psi = 1/dz^1\ncontract psi psi = -1/dz^1\n"),
                  Error);
  // a fermion contracting with itself through an even pole is not skew symmetric
  CHECK_THROWS_AS(parse_algebra("generator psi parity=1 weight=1/2\ncontract psi psi = 1/dz^2\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator b parity=1 weight=1\ngenerator c parity=1 weight=0\n"
                                "contract b c = 1/dz^1\ncontract c b = -1/dz^1\n"),
                  AlgebraError);
}

TEST_CASE("structural errors") {
  CHECK_THROWS_AS(parse_algebra("generator J parity=0 weight=1\ngenerator J parity=0 weight=1\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator J parity=2 weight=1\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator J parity=0\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator J parity=0 weight=1\ncontract J K = 1/dz^2\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator J parity=0 weight=1\ncontract J J = 1/dz^0\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator J parity=0 weight=1\nfield T = :J K:\n"), Error);
  CHECK_THROWS_AS(parse_algebra("opecalc-algebra v2\n"), Error);
  CHECK_THROWS_AS(parse_algebra("bogus line\n"), Error);
  CHECK_THROWS_AS(parse_algebra("generator d parity=0 weight=1\n"), Error);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_algebra("generator J parity=0 weight=1\ncontract J J = 1/dz^2 +\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
  const AlgebraDef alg = parse_algebra(kBoson);
  try {
    parse_expr("J + * J", alg);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
}

TEST_CASE("expression grammar") {
  const AlgebraDef fermion = load_preset("free-fermion");
  const FieldExpr t = parse_expr("-1/2 * :psi d psi:", fermion);
  REQUIRE(t.kind() == FieldExpr::Kind::Sum);
  REQUIRE(t.terms().size() == 1);
  CHECK(t.terms()[0].first == Scalar(-1, 2));
  const FieldExpr& n = t.terms()[0].second;
  REQUIRE(n.kind() == FieldExpr::Kind::Nop);
  CHECK(n.left() == FieldExpr::gen("psi"));
  CHECK(n.right() == FieldExpr::deriv(1, FieldExpr::gen("psi")));

  CHECK(parse_expr("1", fermion).kind() == FieldExpr::Kind::Unit);
  CHECK_THROWS_AS(parse_expr(":psi psi psi:", fermion), ParseError);
  CHECK_THROWS_AS(parse_expr("chi", fermion), Error);
  CHECK_THROWS_AS(parse_expr(":psi", fermion), ParseError);
  CHECK_THROWS_AS(parse_expr("d{0} psi", fermion), Error);
  CHECK_THROWS_AS(parse_expr("", fermion), ParseError);
}

TEST_CASE("parameters substitute as rationals") {
  const AlgebraDef ghost = load_preset("bc-ghost", {{"L", Scalar(2)}});
  Engine eng(ghost);
  CHECK(nf(eng, "(1-L)*:d b c: - L*:b d c:") == nf(eng, "T"));
  CHECK(nf(eng, "-:d b c: - 2*:b d c:") == nf(eng, "T"));
  CHECK(ghost.generators[ghost.index_of("b")].weight == 2);
  CHECK(ghost.generators[ghost.index_of("c")].weight == -1);
}

TEST_CASE("presets are central, degree reducing and round trip") {
  for (const Scalar& lambda : {Scalar(0), Scalar(1, 2), Scalar(2), Scalar(-7, 3)}) {
    for (const auto& [name, alg] : testing::presets(lambda)) {
      CAPTURE(name);
      CHECK(alg.central);
      CHECK(alg.degree_reducing);
      CHECK(is_central(alg));
      CHECK(parse_algebra(serialize(alg)) == alg);
      CHECK(fingerprint(parse_algebra(serialize(alg))) == fingerprint(alg));
    }
  }
  CHECK(fingerprint(load_preset("bc-ghost", {{"L", Scalar(2)}})) !=
        fingerprint(load_preset("bc-ghost", {{"L", Scalar(1)}})));
}

TEST_CASE("preset errors") {
  CHECK_THROWS_AS(load_preset("virasoro"), Error);
  CHECK_THROWS_AS(load_preset("bc-ghost"), Error);
  CHECK_THROWS_AS(load_preset("free-boson", {{"L", Scalar(1)}}), Error);
  CHECK_THROWS_AS(load_preset("bc-ghost", {{"L", Scalar(1)}, {"M", Scalar(1)}}), Error);
}

TEST_CASE("shipped data files match the presets") {
  const std::string dir = OPECALC_DATA_DIR;
  CHECK(load_algebra_file(dir + "/free-boson.ope") == load_preset("free-boson"));
  CHECK(load_algebra_file(dir + "/free-fermion.ope") == load_preset("free-fermion"));
  CHECK(load_algebra_file(dir + "/bc-ghost.ope") == load_preset("bc-ghost", {{"L", Scalar(2)}}));
  CHECK_THROWS_AS(load_algebra_file(dir + "/missing.ope"), Error);
}

TEST_CASE("files must carry the version line") {
  const std::string path = "opecalc_no_header.ope";
  {
    std::ofstream out(path);
    out << kBoson;
  }
  CHECK_THROWS_AS(load_algebra_file(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("non-central tables are accepted but not degree reducing") {
  const AlgebraDef vir = parse_algebra(
      "generator T parity=0 weight=2\n"
      "contract T T = 1/2/dz^4 + 2*T/dz^2 + d T/dz^1\n");
  CHECK_FALSE(vir.central);
  CHECK(vir.degree_reducing);
  CHECK_FALSE(is_central(vir));
  const AlgebraDef quad = parse_algebra(
      "generator J parity=0 weight=1\n"
      "generator K parity=0 weight=1\n"
      "contract J K = :J J:/dz^1\n");
  CHECK_FALSE(quad.degree_reducing);
}
