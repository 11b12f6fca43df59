#include <doctest.h>

#include "support.hpp"

#include <opecalc/identities.hpp>
#include <opecalc/oracle.hpp>

using namespace opecalc;
using opecalc::testing::nf;

TEST_CASE("borcherds instances") {
  Engine boson(load_preset("free-boson"));
  Engine fermion(load_preset("free-fermion"));
  const NormalForm j = nf(boson, "J"), psi = nf(fermion, "psi");
  CHECK(borcherds_residual(boson, j, j, j, 1, -1, 0).zero());
  CHECK(borcherds_residual(fermion, psi, psi, psi, 0, -1, -1).zero());

  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  const NormalForm a = nf(ghost, "A"), b = nf(ghost, "b"), c = nf(ghost, "c");
  const IdentityResidual jac = borcherds_residual(ghost, a, b, c, 0, 0, 0);
  CHECK(jac.zero());
  // p = r = 0 collapses to the super Jacobi identity
  const NormalForm direct = ghost.nprod(a, 0, ghost.nprod(b, 0, c)) +
                            ghost.nprod(b, 0, ghost.nprod(a, 0, c)) - ghost.nprod(ghost.nprod(a, 0, b), 0, c);
  CHECK(direct.is_zero());

  CHECK_THROWS_AS(borcherds_residual(boson, j, j, j, -1, 0, -1), Error);
  CHECK_THROWS_AS(borcherds_residual(ghost, b + nf(ghost, "J"), c, c, 0, 0, 0), ParityError);
}

TEST_CASE("residuals are nonvacuous") {
  Engine boson(load_preset("free-boson"));
  const NormalForm j = nf(boson, "J"), t = nf(boson, "T");
  const IdentityResidual r = borcherds_residual(boson, t, t, j, 1, 0, 1);
  CHECK(r.zero());
  CHECK(r.terms.size() >= 3);
  NormalForm sum;
  for (const auto& x : r.terms) sum += x;
  CHECK(sum == r.residual);
  // a wrong sign on one summand is detected
  NormalForm broken;
  for (std::size_t i = 0; i < r.terms.size(); ++i) broken.add(r.terms[i], i == 0 ? Scalar(-1) : Scalar(1));
  CHECK_FALSE(broken.is_zero());
}

TEST_CASE("non-commutative Wick formula") {
  Engine boson(load_preset("free-boson"));
  const NormalForm j = nf(boson, "J");
  CHECK(ncwick_residual(boson, j, j, j, 1).zero());
  // the correction sum vanishes for free fields
  CHECK(boson.nprod(boson.nprod(j, 0, j), 0, j).is_zero());
  CHECK(ncwick_residual(boson, j, NormalForm::unit(), j, 0).zero());

  Engine fermion(load_preset("free-fermion"));
  const NormalForm psi = nf(fermion, "psi");
  const IdentityResidual r = ncwick_residual(fermion, psi, psi, nf(fermion, ":psi d psi:"), 1);
  CHECK(r.zero());
  CHECK_THROWS_AS(ncwick_residual(boson, j, j, j, -1), Error);
}

TEST_CASE("ncwick terms against the oracle") {
  Engine fermion(load_preset("free-fermion"));
  const AlgebraDef& alg = fermion.algebra();
  const NormalForm psi = nf(fermion, "psi"), x = nf(fermion, ":psi d psi:");
  // psi_(1)(psi_(-1) X) read off the oracle as the pole-2 coefficient
  const NormalForm inner = fermion.nprod(psi, -1, x);
  CHECK(fermion.nprod(psi, 1, inner) == oracle_contract(psi, inner, alg).at(2));
  CHECK(fermion.nprod(psi, 1, psi).is_zero());
  CHECK(fermion.nprod(psi, 1, x) == oracle_contract(psi, x, alg).at(2));
}

TEST_CASE("new specialization") {
  Engine boson(load_preset("free-boson"));
  const NormalForm j = nf(boson, "J");
  CHECK(newwick_residual(boson, j, j, j, 1).zero());
  // (J_(-1)J)_(1) T carries the pole-2 coefficient of the TT contraction
  const NormalForm t = nf(boson, "T");
  CHECK(Scalar(1, 2) * boson.nprod(boson.nop(j, j), 1, t) == Scalar(2) * t);
  CHECK(newwick_residual(boson, j, j, t, 1).zero());

  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  CHECK(newwick_residual(ghost, nf(ghost, "b"), nf(ghost, "c"), nf(ghost, "J"), 0).zero());
  CHECK(newwick_residual(ghost, nf(ghost, "A"), nf(ghost, "B"), NormalForm::unit(), -1).zero());
}

TEST_CASE("skew symmetry") {
  Engine boson(load_preset("free-boson"));
  CHECK(skew_residual(boson, nf(boson, "d J"), nf(boson, "J"), -1).zero());
  Engine fermion(load_preset("free-fermion"));
  CHECK(skew_residual(fermion, nf(fermion, "psi"), nf(fermion, "psi"), 0).zero());
  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  CHECK(skew_residual(ghost, nf(ghost, "A"), NormalForm::unit(), -1).zero());
  for (int m = -3; m <= 3; ++m) CHECK(skew_residual(ghost, nf(ghost, "T"), nf(ghost, "b"), m).zero());
}

TEST_CASE("specializations agree term for term") {
  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  const auto pool = identity_pool(ghost);
  for (const auto& a : pool)
    for (const auto& b : pool)
      for (const auto& c : pool) {
      for (int q = -2; q <= 2; ++q) {
        auto nw = newwick_residual(ghost, a, b, c, q);
        auto ref = borcherds_residual(ghost, a, b, c, 0, q, -1);
        CHECK(same_terms(nw, ref));
        CHECK(nw.residual == ref.residual);
      }
      for (int p = 0; p <= 2; ++p) {
        auto nc = ncwick_residual(ghost, a, b, c, p);
        auto ref = borcherds_residual(ghost, a, b, c, p, -1, 0);
        CHECK(same_terms(nc, ref, -1));
        CHECK(nc.residual == -ref.residual);
      }
    }
}

TEST_CASE("pool contents") {
  Engine boson(load_preset("free-boson"));
  Engine fermion(load_preset("free-fermion"));
  Engine ghost(load_preset("bc-ghost", {{"L", Scalar(2)}}));
  // J, dJ, :J J:, :J dJ:, :dJ dJ:
  CHECK(identity_pool(boson).size() == 5);
  // psi, d psi, :psi d psi:
  CHECK(identity_pool(fermion).size() == 3);
  // b, db, c, dc and the six products without a repeated fermion
  CHECK(identity_pool(ghost).size() == 10);
}

TEST_CASE("fuzz report does not depend on the worker count") {
  Engine fermion(load_preset("free-fermion"));
  const FuzzReport one = fuzz_identities(fermion, 2, 1);
  const FuzzReport three = fuzz_identities(fermion, 2, 3);
  CHECK(one.ok());
  CHECK(one.checked == three.checked);
  CHECK(one.failures.size() == three.failures.size());
  CHECK(one.checked.at("borcherds") > 0);
}
