#ifndef OPECALC_WICK_HPP
#define OPECALC_WICK_HPP

#include <opecalc/algebra.hpp>
#include <opecalc/engine.hpp>
#include <opecalc/field_expr.hpp>
#include <opecalc/normal_form.hpp>

#include <map>
#include <optional>
#include <variant>

namespace opecalc {

// Field-expression level operations. Each builds a fresh Engine; callers that
// evaluate many products should hold an Engine and use the overloads below.

NormalForm normal_form(const FieldExpr& e, const AlgebraDef& alg);
NormalForm derive(const FieldExpr& e, int k, const AlgebraDef& alg);

struct Inhomogeneous {
  friend bool operator==(Inhomogeneous, Inhomogeneous) { return true; }
};
/// 0, 1, or Inhomogeneous when the normal form mixes parities.
using ParityResult = std::variant<int, Inhomogeneous>;
ParityResult parity_of(const FieldExpr& e, const AlgebraDef& alg);

bool equals(const FieldExpr& a, const FieldExpr& b, const AlgebraDef& alg);

/// A_(n) B. Throws ParityError for mixed-parity operands.
NormalForm nth_product(const FieldExpr& a, int n, const FieldExpr& b, const AlgebraDef& alg);
SingularPart contract(const FieldExpr& a, const FieldExpr& b, const AlgebraDef& alg);

struct OpeResult {
  SingularPart singular;
  NormalForm regular0;  ///< :AB: = A_(-1) B
};
OpeResult ope(const FieldExpr& a, const FieldExpr& b, const AlgebraDef& alg);

NormalForm nth_product(const Engine& eng, const NormalForm& a, int n, const NormalForm& b);
SingularPart contract(const Engine& eng, const NormalForm& a, const NormalForm& b);
OpeResult ope(const Engine& eng, const NormalForm& a, const NormalForm& b);

/// Outcome of a Virasoro or primary-field check. `value` is the central
/// charge (or conformal weight) when the OPE has the required shape;
/// otherwise `residuals` lists each offending pole with what is left after
/// subtracting the expected term.
struct Classification {
  std::optional<Scalar> value;
  std::map<int, NormalForm> residuals;

  bool ok() const { return value.has_value(); }
};

/// T(z)T(w) ~ (c/2)/(z-w)^4 + 2T/(z-w)^2 + dT/(z-w).
Classification check_virasoro(const Engine& eng, const NormalForm& t);
Classification check_virasoro(const FieldExpr& t, const AlgebraDef& alg);

/// T(z)phi(w) ~ D phi/(z-w)^2 + d phi/(z-w).
Classification check_primary(const Engine& eng, const NormalForm& t, const NormalForm& phi);
Classification check_primary(const FieldExpr& t, const FieldExpr& phi, const AlgebraDef& alg);

}  // namespace opecalc

#endif  // OPECALC_WICK_HPP
