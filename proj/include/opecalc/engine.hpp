#ifndef OPECALC_ENGINE_HPP
#define OPECALC_ENGINE_HPP

#include <opecalc/algebra.hpp>
#include <opecalc/field_expr.hpp>
#include <opecalc/normal_form.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>
#include <utility>

namespace opecalc {

/// Raised when a sign rule needs a parity-homogeneous operand and gets a
/// mixed one.
class ParityError : public Error {
 public:
  using Error::Error;
};

/// Which generalized Wick formula evaluates A_(n) B (n >= 0) when both
/// operands are composite. All routes agree; the choice only matters for
/// cross-checking.
enum class Route {
  Auto,       ///< left-composite formula when A is composite, else right
  RightWick,  ///< expand the right operand :b R: (non-commutative Wick formula)
  LeftWick,   ///< expand the left operand :a R: (p = 0, r = -1 specialization)
};

/// Residue-product calculus over one algebra.
///
/// Everything is computed on right-nested monomials. Products with n < 0
/// reduce to :d^(k)A B:, normally ordered products with a composite left
/// factor are re-associated, adjacent factors are sorted with the m = -1
/// skew-symmetry rule (degree-reducing algebras only), and n >= 0 products
/// recurse through the two generalized Wick formulas down to the
/// contraction table.
///
/// Results are memoized per monomial; the memo is guarded by a mutex so one
/// Engine may be shared between threads.
class Engine {
 public:
  explicit Engine(AlgebraDef alg);
  explicit Engine(std::shared_ptr<const AlgebraDef> alg);

  const AlgebraDef& algebra() const { return *alg_; }
  bool sorting() const { return alg_->degree_reducing; }

  NormalForm normal_form(const FieldExpr& e) const;
  NormalForm derive(const NormalForm& a, int k = 1) const;

  /// A_(n) B for any integer n.
  NormalForm nprod(const NormalForm& a, int n, const NormalForm& b, Route route = Route::Auto) const;
  NormalForm nop(const NormalForm& a, const NormalForm& b) const { return nprod(a, -1, b); }

  /// Upper bound on the largest n >= 0 with A_(n) B != 0; -1 if the OPE is
  /// regular. The bound follows the recursion and is never too small.
  int max_index(const NormalForm& a, const NormalForm& b) const;

  /// Pole order n+1 -> A_(n) B for every nonzero n >= 0 product.
  SingularPart contract(const NormalForm& a, const NormalForm& b) const;

  /// 0 or 1 when every monomial shares it; nullopt for a mixed sum. The
  /// zero field counts as even.
  std::optional<int> parity(const NormalForm& a) const;
  /// Throws ParityError for a mixed sum.
  int homogeneous_parity(const NormalForm& a) const;

  std::size_t cache_size() const;

 private:
  NormalForm gen_prod(const Factor& f, int n, const Factor& g) const;
  NormalForm base_prod(std::uint32_t g, int m, const Factor& h) const;
  int gen_bound(const Factor& f, const Factor& g) const;

  NormalForm insert(const Factor& f, const Monomial& m) const;
  NormalForm insert_all(const Factor& f, const NormalForm& nf) const;
  NormalForm nop_mono(const Monomial& x, const Monomial& y) const;
  NormalForm nprod_mono(const Monomial& x, int n, const Monomial& y, Route route) const;
  NormalForm left_wick(const Monomial& x, int n, const Monomial& y) const;
  NormalForm right_wick(const Monomial& x, int n, const Monomial& y) const;
  NormalForm derive_mono(const Monomial& m) const;
  int bound_mono(const Monomial& x, const Monomial& y) const;

  std::shared_ptr<const AlgebraDef> alg_;

  using ProdKey = std::tuple<Monomial, int, Monomial>;
  mutable std::mutex mu_;
  mutable std::map<ProdKey, NormalForm> prod_cache_;
  mutable std::map<std::pair<Factor, Monomial>, NormalForm> insert_cache_;
  mutable std::map<Monomial, NormalForm> derive_cache_;
  mutable std::map<std::pair<Monomial, Monomial>, int> bound_cache_;
};

}  // namespace opecalc

#endif  // OPECALC_ENGINE_HPP
