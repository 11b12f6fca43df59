#include <opecalc/wick.hpp>

namespace opecalc {

NormalForm normal_form(const FieldExpr& e, const AlgebraDef& alg) { return Engine(alg).normal_form(e); }

NormalForm derive(const FieldExpr& e, int k, const AlgebraDef& alg) {
  Engine eng(alg);
  return eng.derive(eng.normal_form(e), k);
}

ParityResult parity_of(const FieldExpr& e, const AlgebraDef& alg) {
  Engine eng(alg);
  auto p = eng.parity(eng.normal_form(e));
  if (!p) return Inhomogeneous{};
  return *p;
}

bool equals(const FieldExpr& a, const FieldExpr& b, const AlgebraDef& alg) {
  Engine eng(alg);
  return eng.normal_form(a) == eng.normal_form(b);
}

NormalForm nth_product(const Engine& eng, const NormalForm& a, int n, const NormalForm& b) {
  eng.homogeneous_parity(a);
  eng.homogeneous_parity(b);
  return eng.nprod(a, n, b);
}

SingularPart contract(const Engine& eng, const NormalForm& a, const NormalForm& b) {
  eng.homogeneous_parity(a);
  eng.homogeneous_parity(b);
  return eng.contract(a, b);
}

OpeResult ope(const Engine& eng, const NormalForm& a, const NormalForm& b) {
  return {contract(eng, a, b), nth_product(eng, a, -1, b)};
}

NormalForm nth_product(const FieldExpr& a, int n, const FieldExpr& b, const AlgebraDef& alg) {
  Engine eng(alg);
  return nth_product(eng, eng.normal_form(a), n, eng.normal_form(b));
}

SingularPart contract(const FieldExpr& a, const FieldExpr& b, const AlgebraDef& alg) {
  Engine eng(alg);
  return contract(eng, eng.normal_form(a), eng.normal_form(b));
}

OpeResult ope(const FieldExpr& a, const FieldExpr& b, const AlgebraDef& alg) {
  Engine eng(alg);
  return ope(eng, eng.normal_form(a), eng.normal_form(b));
}

Classification check_virasoro(const Engine& eng, const NormalForm& t) {
  const SingularPart tt = contract(eng, t, t);
  Classification out;
  for (const auto& [pole, nf] : tt)
    if (pole == 3 || pole > 4) out.residuals[pole] = nf;

  NormalForm quartic = tt.at(4);
  const Scalar half_c = quartic.coefficient(Monomial{});
  quartic.add(Monomial{}, -half_c);
  if (!quartic.is_zero()) out.residuals[4] = quartic;

  NormalForm r2 = tt.at(2) - Scalar(2) * t;
  if (!r2.is_zero()) out.residuals[2] = r2;
  NormalForm r1 = tt.at(1) - eng.derive(t);
  if (!r1.is_zero()) out.residuals[1] = r1;

  if (t.is_zero()) out.residuals[2] = NormalForm{};  // zero is not a Virasoro field
  if (out.residuals.empty()) out.value = Scalar(2 * half_c);
  return out;
}

Classification check_primary(const Engine& eng, const NormalForm& t, const NormalForm& phi) {
  const SingularPart tp = contract(eng, t, phi);
  Classification out;
  for (const auto& [pole, nf] : tp)
    if (pole >= 3) out.residuals[pole] = nf;

  // weight from any monomial of phi; the pole-2 term must be exactly D phi
  Scalar weight(0);
  NormalForm quadratic = tp.at(2);
  if (!phi.is_zero()) {
    const auto& [m, c] = *phi.begin();
    weight = quadratic.coefficient(m) / c;
  }
  NormalForm r2 = quadratic - weight * phi;
  if (!r2.is_zero()) out.residuals[2] = r2;
  NormalForm r1 = tp.at(1) - eng.derive(phi);
  if (!r1.is_zero()) out.residuals[1] = r1;

  if (out.residuals.empty()) out.value = weight;
  return out;
}

Classification check_virasoro(const FieldExpr& t, const AlgebraDef& alg) {
  Engine eng(alg);
  return check_virasoro(eng, eng.normal_form(t));
}

Classification check_primary(const FieldExpr& t, const FieldExpr& phi, const AlgebraDef& alg) {
  Engine eng(alg);
  return check_primary(eng, eng.normal_form(t), eng.normal_form(phi));
}

}  // namespace opecalc
