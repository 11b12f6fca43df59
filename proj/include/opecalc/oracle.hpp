#ifndef OPECALC_ORACLE_HPP
#define OPECALC_ORACLE_HPP

#include <opecalc/algebra.hpp>
#include <opecalc/normal_form.hpp>

#include <map>
#include <utility>
#include <vector>

namespace opecalc {

// Reference OPE evaluator for central algebras (every contraction is a
// multiple of the unit). It shares nothing with Engine beyond the algebra
// definition: classical Wick theorem over all cross-pairings, Taylor
// expansion of the unpaired left factors, supercommutative reordering of
// what survives.

/// True iff every contraction entry is a multiple of the unit field.
bool is_central(const AlgebraDef& alg);

/// d_z^a d_w^b (z-w)^{-m} = coef * (z-w)^{-order}.
struct PoleDerivative {
  Scalar coef;
  int order;
};
PoleDerivative pole_derivative(int m, int a, int b);

/// One set of cross-pairings between the factors of M (at z) and N (at w).
struct PairingTerm {
  std::vector<std::pair<int, int>> matching;  ///< (index in M, index in N)
  int sign = 1;                               ///< Koszul sign of the reordering
  std::map<int, Scalar> laurent;              ///< exponent of (z-w) -> product of contracted pairs
  std::vector<Factor> left_survivors;         ///< unpaired factors of M, in order
  std::vector<Factor> right_survivors;        ///< unpaired factors of N, in order
};

/// Every nonempty matching with all pairs contracting. Throws Error for a
/// non-central algebra or non-canonical input.
std::vector<PairingTerm> oracle_pairings(const Monomial& m, const Monomial& n, const AlgebraDef& alg);

/// Singular part of M(z) N(w) assembled from oracle_pairings.
SingularPart oracle_contract(const Monomial& m, const Monomial& n, const AlgebraDef& alg);

/// Bilinear extension to normal forms whose monomials are all canonical.
SingularPart oracle_contract(const NormalForm& a, const NormalForm& b, const AlgebraDef& alg);

}  // namespace opecalc

#endif  // OPECALC_ORACLE_HPP
