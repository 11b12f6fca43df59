#ifndef OPECALC_IDENTITIES_HPP
#define OPECALC_IDENTITIES_HPP

#include <opecalc/engine.hpp>
#include <opecalc/normal_form.hpp>

#include <map>
#include <string>
#include <vector>

namespace opecalc {

/// LHS - RHS of one concrete identity instance.
///
/// `terms` holds every nonzero signed summand that went into the residual
/// (so residual == sum of terms); two evaluations agree term-for-term when
/// their term multisets match.
struct IdentityResidual {
  std::string identity;
  std::map<std::string, int> params;
  NormalForm a, b, c;
  NormalForm residual;
  std::vector<NormalForm> terms;

  bool zero() const { return residual.is_zero(); }
};

/// sum_i C(p,i) (A_(r+i) B)_(p+q-i) C
///   - sum_i (-1)^i C(r,i) [A_(p+r-i)(B_(q+i) C) - (-1)^r s B_(q+r-i)(A_(p+i) C)]
/// with s = (-1)^{p(A)p(B)}. Needs p >= 0 or r >= 0; otherwise the left side
/// has infinitely many nonzero terms and Error is thrown.
IdentityResidual borcherds_residual(const Engine& eng, const NormalForm& a, const NormalForm& b,
                                    const NormalForm& c, int p, int q, int r);

/// A_(p)(B_(-1)C) - (A_(p)B)_(-1)C - s B_(-1)(A_(p)C) - sum_{i<p} C(p,i) (A_(i)B)_(p-i-1)C,
/// p >= 0.
IdentityResidual ncwick_residual(const Engine& eng, const NormalForm& a, const NormalForm& b,
                                 const NormalForm& c, int p);

/// (A_(-1)B)_(q)C - sum_{i>=0} [A_(-i-1)(B_(q+i)C) + s B_(q-i-1)(A_(i)C)].
IdentityResidual newwick_residual(const Engine& eng, const NormalForm& a, const NormalForm& b,
                                  const NormalForm& c, int q);

/// B_(m)A - s sum_{i>=0} (-1)^{m+i+1} d^(i)(A_(m+i)B).
IdentityResidual skew_residual(const Engine& eng, const NormalForm& a, const NormalForm& b, int m);

// Field-expression overloads; each builds a fresh Engine.
IdentityResidual borcherds_residual(const FieldExpr& a, const FieldExpr& b, const FieldExpr& c, int p,
                                    int q, int r, const AlgebraDef& alg);
IdentityResidual ncwick_residual(const FieldExpr& a, const FieldExpr& b, const FieldExpr& c, int p,
                                 const AlgebraDef& alg);
IdentityResidual newwick_residual(const FieldExpr& a, const FieldExpr& b, const FieldExpr& c, int q,
                                  const AlgebraDef& alg);
IdentityResidual skew_residual(const FieldExpr& a, const FieldExpr& b, int m, const AlgebraDef& alg);

/// True when the nonzero terms of x and y match as multisets, with y's terms
/// multiplied by `sign` first.
bool same_terms(const IdentityResidual& x, const IdentityResidual& y, int sign = 1);

/// Generators, their first derivatives, and every nonzero canonical monomial
/// :x y: with x, y drawn from those.
std::vector<NormalForm> identity_pool(const Engine& eng);

struct FuzzFailure {
  IdentityResidual instance;
  std::string what;
};

struct FuzzReport {
  std::map<std::string, long> checked;
  std::vector<FuzzFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Exhaustive residual sweep over the pool: Borcherds for (p,q,r) in
/// [-range, range]^3 with p >= 0 or r >= 0, skew symmetry for m in range,
/// both specializations on the pool, and their term-for-term agreement with
/// the corresponding Borcherds instance. The report does not depend on
/// `jobs`.
FuzzReport fuzz_identities(const Engine& eng, int range = 3, unsigned jobs = 1);

}  // namespace opecalc

#endif  // OPECALC_IDENTITIES_HPP
