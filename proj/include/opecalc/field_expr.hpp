#ifndef OPECALC_FIELD_EXPR_HPP
#define OPECALC_FIELD_EXPR_HPP

#include <opecalc/scalar.hpp>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace opecalc {

/// Unevaluated field expression: unit, generator, k-th derivative, normally
/// ordered product :L R:, or a rational linear combination.
///
/// Nodes are immutable and shared; copying a FieldExpr is cheap.
class FieldExpr {
 public:
  enum class Kind { Unit, Gen, Deriv, Nop, Sum };
  using Term = std::pair<Scalar, FieldExpr>;

  FieldExpr();  // the unit field

  static FieldExpr unit() { return FieldExpr(); }
  static FieldExpr gen(std::string name);
  /// Throws Error when k < 1.
  static FieldExpr deriv(int k, FieldExpr child);
  static FieldExpr nop(FieldExpr left, FieldExpr right);
  /// Throws Error on an empty term list. A single term with coefficient 1
  /// collapses to the term itself, so printing and re-parsing preserves the
  /// tree.
  static FieldExpr sum(std::vector<Term> terms);
  static FieldExpr scaled(Scalar c, FieldExpr e) { return sum({{std::move(c), std::move(e)}}); }

  Kind kind() const;
  const std::string& name() const;   // Gen
  int order() const;                 // Deriv
  const FieldExpr& child() const;    // Deriv
  const FieldExpr& left() const;     // Nop
  const FieldExpr& right() const;    // Nop
  const std::vector<Term>& terms() const;  // Sum

  friend bool operator==(const FieldExpr& a, const FieldExpr& b);

 private:
  struct Node;
  explicit FieldExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);
FieldExpr operator*(const Scalar& c, const FieldExpr& e);

/// Prints in the expression grammar accepted by parse_expr:
/// "d X", "d{k} X", ":L R:", "1", "c*X + Y - Z".
std::string to_string(const FieldExpr& e);

}  // namespace opecalc

#endif  // OPECALC_FIELD_EXPR_HPP
