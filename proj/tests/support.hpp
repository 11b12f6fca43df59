#ifndef OPECALC_TESTS_SUPPORT_HPP
#define OPECALC_TESTS_SUPPORT_HPP

#include <opecalc/engine.hpp>
#include <opecalc/parser.hpp>
#include <opecalc/presets.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace opecalc::testing {

inline NormalForm nf(const Engine& eng, const std::string& expr) {
  return eng.normal_form(parse_expr(expr, eng.algebra()));
}

/// The three presets; the ghost at the given weight.
std::vector<std::pair<std::string, AlgebraDef>> presets(const Scalar& lambda = Scalar(1, 2));

/// Every canonical monomial with at most `max_degree` factors and at most
/// `max_deriv` derivatives on each factor.
std::vector<Monomial> canonical_monomials(const AlgebraDef& alg, int max_degree, int max_deriv);

struct SweepResult {
  long checked = 0;
  std::vector<std::string> mismatches;
};

/// contract == oracle_contract for all canonical monomial pairs of total
/// degree <= max_total.
SweepResult oracle_sweep(const Engine& eng, int max_total = 4, int max_deriv = 2);

/// Random expressions in the surface grammar, built from the generators
/// and named fields of an algebra.
class ExprGen {
 public:
  ExprGen(const AlgebraDef& alg, std::uint64_t seed);
  std::string expr(int depth = 3);
  std::string factor(int depth);

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string coefficient();

  std::vector<std::string> atoms_;
  std::mt19937_64 rng_;
};

struct PropertyReport {
  std::map<std::string, long> checked;
  std::vector<std::string> failures;
};

/// Structural property suites (idempotence, round trip, parity, weight,
/// derivative and translation covariance, linearity, Leibniz, skew and
/// commutator consistency), `per_property` generated cases each, spread
/// over the presets.
PropertyReport run_properties(int per_property, std::uint64_t seed);

}  // namespace opecalc::testing

#endif  // OPECALC_TESTS_SUPPORT_HPP
