#ifndef OPECALC_PARSER_HPP
#define OPECALC_PARSER_HPP

#include <opecalc/algebra.hpp>
#include <opecalc/field_expr.hpp>

#include <string>
#include <string_view>

namespace opecalc {

/// Syntax or semantic error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the line-oriented algebra format:
///
///     opecalc-algebra v1
///     # comment
///     param L = 1/2
///     generator b parity=1 weight=L
///     generator c parity=1 weight=1-L
///     contract b c = 1/dz^1
///     field J = :b c:
///
/// The version line is optional here (CLI files must carry it). Missing
/// reverse contractions are completed by skew symmetry.
AlgebraDef parse_algebra(std::string_view text);

/// Reads a file and parses it; the first non-blank line must be
/// "opecalc-algebra v1". Throws Error when the file cannot be read.
AlgebraDef load_algebra_file(const std::string& path);

/// Parses an expression in the grammar
///
///     expr   := ['+'|'-'] term (('+'|'-') term)*
///     term   := unary (('*' | '/') unary)*      // at most one non-scalar
///     unary  := rational | name | '1' | 'd' unary | 'd{' int '}' unary
///             | ':' unary unary ':' | '(' expr ')'
///
/// Parameters are substituted as rationals and named fields expand by
/// reference. ':a b c:' is rejected.
FieldExpr parse_expr(std::string_view text, const AlgebraDef& alg);

}  // namespace opecalc

#endif  // OPECALC_PARSER_HPP
