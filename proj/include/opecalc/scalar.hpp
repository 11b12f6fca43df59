#ifndef OPECALC_SCALAR_HPP
#define OPECALC_SCALAR_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opecalc {

/// Exact rational coefficient. Always kept canonical (reduced, positive
/// denominator); no floating point is used anywhere in the engine. Note that
/// the two-argument constructor does not reduce: write Scalar(1, 2), never
/// Scalar(2, 4), or go through parse_scalar.
using Scalar = mpq_class;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Renders as "p" for integers and "p/q" otherwise.
std::string to_string(const Scalar& s);

/// Parses "p", "-p" or "p/q". Throws Error on malformed input or zero
/// denominator.
Scalar parse_scalar(std::string_view text);

/// Generalized binomial coefficient (top choose k) for any integer top and
/// k >= 0; zero for k < 0.
Scalar binomial(std::int64_t top, std::int64_t k);

Scalar factorial(std::int64_t n);

/// n (n-1) ... (n-k+1); equals 1 when k == 0.
Scalar falling_factorial(std::int64_t n, std::int64_t k);

inline int koszul_sign(int p, int q) { return (p & q & 1) ? -1 : 1; }

}  // namespace opecalc

#endif  // OPECALC_SCALAR_HPP
