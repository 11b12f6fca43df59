#include <opecalc/scalar.hpp>

#include <cctype>

namespace opecalc {

std::string to_string(const Scalar& s) {
  if (s.get_den() == 1) return s.get_num().get_str();
  return s.get_num().get_str() + "/" + s.get_den().get_str();
}

namespace {

bool all_digits(std::string_view t) {
  if (t.empty()) return false;
  for (char c : t)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Scalar parse_scalar(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error("malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw Error("zero denominator in '" + std::string(text) + "'");
  Scalar out(n, d);
  out.canonicalize();
  return negative ? Scalar(-out) : out;
}

Scalar factorial(std::int64_t n) {
  if (n < 0) throw Error("factorial of a negative number");
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return Scalar(out);
}

Scalar falling_factorial(std::int64_t n, std::int64_t k) {
  mpz_class out = 1;
  for (std::int64_t j = 0; j < k; ++j) out *= mpz_class(static_cast<long>(n - j));
  return Scalar(out);
}

Scalar binomial(std::int64_t top, std::int64_t k) {
  if (k < 0) return Scalar(0);
  Scalar out = falling_factorial(top, k) / factorial(k);
  out.canonicalize();
  return out;
}

}  // namespace opecalc
