#ifndef OPECALC_NORMAL_FORM_HPP
#define OPECALC_NORMAL_FORM_HPP

#include <opecalc/scalar.hpp>

#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace opecalc {

/// A derivative of a generator, d^{deriv} g. `gen` indexes the algebra's
/// generator list, which is kept sorted by name, so the natural order on
/// Factor is the (name, derivative order) order.
struct Factor {
  std::uint32_t gen = 0;
  std::uint32_t deriv = 0;

  friend auto operator<=>(const Factor&, const Factor&) = default;
};

/// Right-nested normally ordered product :f1 :f2 (... fk)::. Empty is the
/// unit field.
using Monomial = std::vector<Factor>;

/// Canonical finite linear combination of monomials.
///
/// Terms are kept in a map, so iteration is in lexicographic order on the
/// factor lists and no zero coefficient is ever stored. The `unsorted` flag
/// is raised when the result was produced in an algebra where factor sorting
/// is not guaranteed to terminate; equality is then syntactic.
class NormalForm {
 public:
  using Terms = std::map<Monomial, Scalar>;

  NormalForm() = default;
  explicit NormalForm(Monomial m, Scalar c = Scalar(1)) { add(std::move(m), c); }

  static NormalForm unit(Scalar c = Scalar(1)) { return NormalForm(Monomial{}, std::move(c)); }

  void add(const Monomial& m, const Scalar& c);
  void add(const NormalForm& other, const Scalar& c = Scalar(1));

  bool empty() const { return terms_.empty(); }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  /// Coefficient of `m` (zero when absent).
  Scalar coefficient(const Monomial& m) const;

  bool unsorted() const { return unsorted_; }
  void mark_unsorted() { unsorted_ = true; }

  /// Maximum number of factors over all monomials (0 for zero or unit).
  std::size_t degree() const;

  NormalForm& operator+=(const NormalForm& o) { add(o); return *this; }
  NormalForm& operator-=(const NormalForm& o) { add(o, Scalar(-1)); return *this; }
  NormalForm& operator*=(const Scalar& c);

  friend NormalForm operator+(NormalForm a, const NormalForm& b) { return a += b; }
  friend NormalForm operator-(NormalForm a, const NormalForm& b) { return a -= b; }
  friend NormalForm operator*(const Scalar& c, NormalForm a) { return a *= c; }
  friend NormalForm operator-(NormalForm a) { return a *= Scalar(-1); }

  friend bool operator==(const NormalForm& a, const NormalForm& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
  bool unsorted_ = false;
};

/// Singular part of an OPE: pole order (n+1) -> A_(n) B. Zero entries are
/// never stored.
class SingularPart {
 public:
  using Poles = std::map<int, NormalForm>;

  void set(int pole, NormalForm nf);
  void add(int pole, const NormalForm& nf, const Scalar& c = Scalar(1));

  bool empty() const { return poles_.empty(); }
  const Poles& poles() const { return poles_; }
  auto begin() const { return poles_.begin(); }
  auto end() const { return poles_.end(); }
  /// Entry at `pole`; the zero field when absent.
  NormalForm at(int pole) const;
  int max_pole() const { return poles_.empty() ? 0 : poles_.rbegin()->first; }

  SingularPart& operator*=(const Scalar& c);
  friend bool operator==(const SingularPart& a, const SingularPart& b) { return a.poles_ == b.poles_; }

 private:
  Poles poles_;
};

}  // namespace opecalc

#endif  // OPECALC_NORMAL_FORM_HPP
