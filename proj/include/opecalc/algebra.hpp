#ifndef OPECALC_ALGEBRA_HPP
#define OPECALC_ALGEBRA_HPP

#include <opecalc/field_expr.hpp>
#include <opecalc/normal_form.hpp>
#include <opecalc/scalar.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace opecalc {

struct Generator {
  std::string name;
  int parity = 0;
  Scalar weight;

  friend bool operator==(const Generator&, const Generator&) = default;
};

/// Raised for structural problems with an algebra: duplicate or unknown
/// names, bad parity, bad pole orders, inconsistent contraction pairs.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Generators, their pairwise contraction table and named composite fields.
///
/// Generators are kept sorted by name; Factor::gen indexes into that list.
/// Contraction entries are keyed by the ordered pair (left, right) and hold
/// the singular part of left(z) right(w).
struct AlgebraDef {
  using Pair = std::pair<std::uint32_t, std::uint32_t>;

  std::vector<Generator> generators;
  std::map<Pair, SingularPart> contractions;
  std::map<std::string, FieldExpr> named_fields;
  std::map<std::string, Scalar> params;
  /// Every table entry has fewer than two generator factors.
  bool degree_reducing = true;
  /// Every table entry is a multiple of the unit field.
  bool central = true;

  std::optional<std::uint32_t> find(std::string_view name) const;
  /// Throws AlgebraError when the name is not a declared generator.
  std::uint32_t index_of(std::string_view name) const;

  int parity(const Factor& f) const { return generators.at(f.gen).parity; }
  int parity(const Monomial& m) const;
  Scalar weight(const Factor& f) const { return generators.at(f.gen).weight + f.deriv; }
  Scalar weight(const Monomial& m) const;

  /// Table entry for (g, h); empty when the pair does not contract.
  const SingularPart& entry(std::uint32_t g, std::uint32_t h) const;

  friend bool operator==(const AlgebraDef&, const AlgebraDef&) = default;
};

/// Builds an algebra from unsorted generators; reorders them by name.
/// Throws AlgebraError on duplicates or parity outside {0, 1}.
AlgebraDef make_algebra(std::vector<Generator> generators);

/// Adds the skew-symmetric image of every declared pair whose reverse is
/// missing, checks pairs declared in both orientations (and self pairs) for
/// consistency, and recomputes the degree-reducing and central flags.
/// Idempotent.
AlgebraDef complete_contractions(AlgebraDef alg);

/// Reverse orientation of a table entry:
/// h_(m) g = (-1)^{p(g)p(h)} sum_i (-1)^{m+i+1} d^(i) (g_(m+i) h).
SingularPart skew_entry(const AlgebraDef& alg, std::uint32_t g, std::uint32_t h,
                        const SingularPart& gh);

/// Derivative of a table-level normal form by the Leibniz rule on the
/// right-nested factor list, without reordering factors. Exact for entries
/// of degree <= 1.
NormalForm raw_derive(const NormalForm& nf, int k = 1);

/// v1 text serialization; parse_algebra(serialize(a)) == a.
std::string serialize(const AlgebraDef& alg);

/// FNV-1a 64-bit hash of the serialization, as 16 hex digits.
std::string fingerprint(const AlgebraDef& alg);

/// Renders a monomial or normal form in the expression grammar, with raw
/// generator factors ("d{2} b", ":J d J:", "1/2*1").
std::string to_string(const Monomial& m, const AlgebraDef& alg);
std::string to_string(const NormalForm& nf, const AlgebraDef& alg);

}  // namespace opecalc

#endif  // OPECALC_ALGEBRA_HPP
