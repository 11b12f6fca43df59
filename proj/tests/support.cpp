#include "support.hpp"

#include <opecalc/identities.hpp>
#include <opecalc/oracle.hpp>

#include <functional>
#include <optional>

namespace opecalc::testing {

std::vector<std::pair<std::string, AlgebraDef>> presets(const Scalar& lambda) {
  return {{"free-boson", load_preset("free-boson")},
          {"free-fermion", load_preset("free-fermion")},
          {"bc-ghost", load_preset("bc-ghost", {{"L", lambda}})}};
}

std::vector<Monomial> canonical_monomials(const AlgebraDef& alg, int max_degree, int max_deriv) {
  std::vector<Factor> factors;
  for (std::uint32_t g = 0; g < alg.generators.size(); ++g)
    for (int d = 0; d <= max_deriv; ++d) factors.push_back({g, static_cast<std::uint32_t>(d)});

  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_degree) return;
    for (std::size_t i = from; i < factors.size(); ++i) {
      cur.push_back(factors[i]);
      // an odd factor cannot repeat
      grow(alg.parity(factors[i]) ? i + 1 : i);
      cur.pop_back();
    }
  };
  grow(0);
  return out;
}

SweepResult oracle_sweep(const Engine& eng, int max_total, int max_deriv) {
  const AlgebraDef& alg = eng.algebra();
  const auto monos = canonical_monomials(alg, max_total, max_deriv);
  SweepResult res;
  for (const auto& m : monos)
    for (const auto& n : monos) {
      if (static_cast<int>(m.size() + n.size()) > max_total) continue;
      ++res.checked;
      const SingularPart want = oracle_contract(m, n, alg);
      const SingularPart got = eng.contract(NormalForm(m), NormalForm(n));
      if (!(want == got))
        res.mismatches.push_back(to_string(m, alg) + " x " + to_string(n, alg));
    }
  return res;
}

ExprGen::ExprGen(const AlgebraDef& alg, std::uint64_t seed) : rng_(seed) {
  for (const auto& g : alg.generators) atoms_.push_back(g.name);
  for (const auto& [name, e] : alg.named_fields) atoms_.push_back(name);
  atoms_.push_back("1");
}

std::string ExprGen::coefficient() {
  static const char* coefs[] = {"2", "-1", "1/2", "3/4", "-5/3"};
  return coefs[pick(5)];
}

std::string ExprGen::factor(int depth) {
  if (depth <= 0) return atoms_[pick(static_cast<int>(atoms_.size()))];
  switch (pick(6)) {
    case 0:
    case 1: return atoms_[pick(static_cast<int>(atoms_.size()))];
    case 2: return "d " + factor(depth - 1);
    case 3: return "d{" + std::to_string(2 + pick(2)) + "} " + factor(depth - 1);
    case 4: return ":" + factor(depth - 1) + " " + factor(depth - 1) + ":";
    default: return "(" + expr(depth - 1) + ")";
  }
}

std::string ExprGen::expr(int depth) {
  std::string out = factor(depth);
  if (pick(3) == 0) out = coefficient() + "*" + out;
  if (depth > 0 && pick(3) == 0) {
    std::string c = coefficient();
    if (c.front() == '-') c.erase(0, 1);
    out += (pick(2) ? " + " : " - ") + c + "*" + factor(depth - 1);
  }
  return out;
}

namespace {

struct Case {
  const Engine* eng;
  std::string text;
  NormalForm value;
  int parity;
  Scalar weight;
};

std::optional<Scalar> homogeneous_weight(const NormalForm& x, const AlgebraDef& alg) {
  std::optional<Scalar> w;
  for (const auto& [m, c] : x) {
    const Scalar wm = alg.weight(m);
    if (w && *w != wm) return std::nullopt;
    w = wm;
  }
  return w;
}

}  // namespace

PropertyReport run_properties(int per_property, std::uint64_t seed) {
  PropertyReport rep;
  std::vector<std::unique_ptr<Engine>> engines;
  for (const Scalar& lambda : {Scalar(0), Scalar(1, 2), Scalar(1), Scalar(2)})
    engines.push_back(std::make_unique<Engine>(load_preset("bc-ghost", {{"L", lambda}})));
  engines.push_back(std::make_unique<Engine>(load_preset("free-boson")));
  engines.push_back(std::make_unique<Engine>(load_preset("free-fermion")));

  std::vector<ExprGen> gens;
  for (std::size_t i = 0; i < engines.size(); ++i) gens.emplace_back(engines[i]->algebra(), seed + 7919 * i);
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  // a nonzero, parity- and weight-homogeneous expression of degree <= 3
  auto draw = [&](std::size_t which, int max_degree = 3) -> Case {
    const Engine& eng = *engines[which];
    for (;;) {
      std::string text = gens[which].expr(3);
      NormalForm v = eng.normal_form(parse_expr(text, eng.algebra()));
      if (v.is_zero() || static_cast<int>(v.degree()) > max_degree) continue;
      auto p = eng.parity(v);
      auto w = homogeneous_weight(v, eng.algebra());
      if (!p || !w) continue;
      return {&eng, std::move(text), std::move(v), *p, *w};
    }
  };

  auto check = [&](const std::string& prop, bool ok, const std::string& detail) {
    ++rep.checked[prop];
    if (!ok) rep.failures.push_back(prop + ": " + detail);
  };

  for (int i = 0; i < per_property; ++i) {
    const std::size_t which = static_cast<std::size_t>(i) % engines.size();
    const Engine& eng = *engines[which];
    const AlgebraDef& alg = eng.algebra();
    Case a = draw(which);
    Case b = draw(which);
    const int n = pick(-2, 3);
    const std::string label = a.text + " | " + b.text + " | n=" + std::to_string(n);

    // normal form of a printed normal form is itself
    check("idempotence", eng.normal_form(parse_expr(to_string(a.value, alg), alg)) == a.value, a.text);

    // printing a parsed expression and parsing it again changes nothing
    {
      const FieldExpr e = parse_expr(a.text, alg);
      const std::string printed = to_string(e);
      const FieldExpr again = parse_expr(printed, alg);
      check("round-trip", to_string(again) == printed && eng.normal_form(again) == a.value, a.text);
    }

    const NormalForm prod = eng.nprod(a.value, n, b.value);
    {
      bool ok = true;
      for (const auto& [m, c] : a.value) ok = ok && alg.parity(m) == a.parity;
      for (const auto& [m, c] : prod) ok = ok && alg.parity(m) == (a.parity ^ b.parity);
      check("parity", ok, label);
    }
    {
      bool ok = true;
      for (const auto& [m, c] : prod) ok = ok && alg.weight(m) == a.weight + b.weight - n - 1;
      check("weight", ok, label);
    }

    const NormalForm da = eng.derive(a.value);
    check("derivative-covariance", eng.nprod(da, n, b.value) == Scalar(-n) * eng.nprod(a.value, n - 1, b.value),
          label);
    check("translation-covariance",
          eng.derive(prod) == eng.nprod(da, n, b.value) + eng.nprod(a.value, n, eng.derive(b.value)), label);

    {
      const FieldExpr sum = parse_expr("2*(" + a.text + ") - 3/2*(" + b.text + ")", alg);
      bool ok = eng.normal_form(sum) == Scalar(2) * a.value - Scalar(3, 2) * b.value;
      Case c = draw(which);
      while (c.parity != a.parity) c = draw(which);
      ok = ok && eng.nprod(a.value + Scalar(5) * c.value, n, b.value) ==
                     eng.nprod(a.value, n, b.value) + Scalar(5) * eng.nprod(c.value, n, b.value);
      check("linearity", ok, label);
    }

    check("leibniz",
          eng.derive(eng.nop(a.value, b.value)) == eng.nop(da, b.value) + eng.nop(a.value, eng.derive(b.value)),
          label);

    check("skew", skew_residual(eng, a.value, b.value, n).zero(), label);

    if (n >= 0)
      check("commutator",
            eng.nprod(a.value, n, b.value, Route::RightWick) == eng.nprod(a.value, n, b.value, Route::LeftWick),
            label);
    else
      check("commutator",
            eng.nprod(a.value, -n - 1, b.value, Route::RightWick) ==
                eng.nprod(a.value, -n - 1, b.value, Route::LeftWick),
            label);
  }
  return rep;
}

}  // namespace opecalc::testing
