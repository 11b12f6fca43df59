#include <opecalc/oracle.hpp>

#include <algorithm>
#include <functional>

namespace opecalc {

bool is_central(const AlgebraDef& alg) {
  for (const auto& [pair, sp] : alg.contractions)
    for (const auto& [pole, nf] : sp)
      for (const auto& [mono, c] : nf)
        if (!mono.empty()) return false;
  return true;
}

PoleDerivative pole_derivative(int m, int a, int b) {
  // d_z (z-w)^e = e (z-w)^{e-1} and d_w (z-w)^e = -e (z-w)^{e-1}, so with
  // e = -m every step contributes -(m + j) for d_z and (m + j) for d_w.
  Scalar c(1);
  for (int j = 0; j < a + b; ++j) c *= m + j;
  if (a % 2) c = -c;
  return {c, m + a + b};
}

namespace {

Scalar scalar_entry(const NormalForm& nf) { return nf.coefficient(Monomial{}); }

void check_canonical(const Monomial& m, const AlgebraDef& alg) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].gen >= alg.generators.size()) throw Error("oracle: unknown generator index");
    if (i == 0) continue;
    if (m[i] < m[i - 1] || (m[i] == m[i - 1] && alg.parity(m[i]) == 1))
      throw Error("oracle: monomial is not canonical");
  }
}

// Sorts factors into canonical order. Returns the Koszul sign, or 0 when an
// odd factor repeats.
int supersort(std::vector<Factor>& fs, const AlgebraDef& alg) {
  int sign = 1;
  for (std::size_t i = 1; i < fs.size(); ++i)
    for (std::size_t j = i; j > 0 && fs[j] < fs[j - 1]; --j) {
      if (alg.parity(fs[j]) && alg.parity(fs[j - 1])) sign = -sign;
      std::swap(fs[j], fs[j - 1]);
    }
  for (std::size_t i = 1; i < fs.size(); ++i)
    if (fs[i] == fs[i - 1] && alg.parity(fs[i])) return 0;
  return sign;
}

}  // namespace

std::vector<PairingTerm> oracle_pairings(const Monomial& m, const Monomial& n, const AlgebraDef& alg) {
  if (!is_central(alg)) throw Error("oracle: algebra is not central");
  check_canonical(m, alg);
  check_canonical(n, alg);

  const int k = static_cast<int>(m.size());
  const int l = static_cast<int>(n.size());
  std::vector<PairingTerm> out;
  std::vector<std::pair<int, int>> matching;
  std::vector<bool> used(l, false);

  std::function<void(int)> walk = [&](int i) {
    if (i == k) {
      if (matching.empty()) return;
      PairingTerm t;
      t.matching = matching;

      // original order: M's factors then N's; target: each pair adjacent,
      // then the survivors of M, then those of N
      std::vector<int> target;
      std::vector<bool> paired_left(k, false);
      for (const auto& [a, b] : matching) {
        target.push_back(a);
        target.push_back(k + b);
        paired_left[a] = true;
      }
      for (int a = 0; a < k; ++a)
        if (!paired_left[a]) {
          target.push_back(a);
          t.left_survivors.push_back(m[a]);
        }
      for (int b = 0; b < l; ++b)
        if (!used[b]) {
          target.push_back(k + b);
          t.right_survivors.push_back(n[b]);
        }
      auto odd = [&](int idx) { return alg.parity(idx < k ? m[idx] : n[idx - k]) == 1; };
      for (std::size_t x = 0; x < target.size(); ++x)
        for (std::size_t y = x + 1; y < target.size(); ++y)
          if (target[x] > target[y] && odd(target[x]) && odd(target[y])) t.sign = -t.sign;

      std::map<int, Scalar> poly{{0, Scalar(1)}};
      for (const auto& [a, b] : matching) {
        const Factor& f = m[a];
        const Factor& g = n[b];
        std::map<int, Scalar> pair_terms;
        for (const auto& [pole, nf] : alg.entry(f.gen, g.gen)) {
          const PoleDerivative d = pole_derivative(pole, static_cast<int>(f.deriv), static_cast<int>(g.deriv));
          pair_terms[-d.order] += d.coef * scalar_entry(nf);
        }
        std::map<int, Scalar> next;
        for (const auto& [e1, c1] : poly)
          for (const auto& [e2, c2] : pair_terms) next[e1 + e2] += c1 * c2;
        poly = std::move(next);
      }
      std::erase_if(poly, [](const auto& kv) { return kv.second == 0; });
      t.laurent = std::move(poly);
      out.push_back(std::move(t));
      return;
    }
    walk(i + 1);
    for (int j = 0; j < l; ++j) {
      if (used[j] || alg.entry(m[i].gen, n[j].gen).empty()) continue;
      used[j] = true;
      matching.emplace_back(i, j);
      walk(i + 1);
      matching.pop_back();
      used[j] = false;
    }
  };
  walk(0);
  return out;
}

SingularPart oracle_contract(const Monomial& m, const Monomial& n, const AlgebraDef& alg) {
  SingularPart out;
  for (const PairingTerm& t : oracle_pairings(m, n, alg)) {
    if (t.laurent.empty()) continue;
    const int lowest = t.laurent.begin()->first;
    const int budget = -lowest - 1;  // total Taylor order that can still be singular
    const std::size_t s = t.left_survivors.size();
    std::vector<int> shift(s, 0);

    std::function<void(std::size_t, int, Scalar)> taylor = [&](std::size_t i, int used, Scalar weight) {
      if (i == s) {
        std::vector<Factor> fs;
        for (std::size_t x = 0; x < s; ++x) {
          Factor f = t.left_survivors[x];
          f.deriv += static_cast<std::uint32_t>(shift[x]);
          fs.push_back(f);
        }
        fs.insert(fs.end(), t.right_survivors.begin(), t.right_survivors.end());
        const int sign = supersort(fs, alg);
        if (sign == 0) return;
        for (const auto& [e, c] : t.laurent) {
          const int exponent = e + used;
          if (exponent >= 0) continue;
          out.add(-exponent, NormalForm(Monomial(fs), c * weight * (sign * t.sign)));
        }
        return;
      }
      for (int step = 0; used + step <= budget; ++step) {
        shift[i] = step;
        taylor(i + 1, used + step, weight / factorial(step));
      }
      shift[i] = 0;
    };
    taylor(0, 0, Scalar(1));
  }
  return out;
}

SingularPart oracle_contract(const NormalForm& a, const NormalForm& b, const AlgebraDef& alg) {
  SingularPart out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b)
      for (const auto& [pole, nf] : oracle_contract(ma, mb, alg)) out.add(pole, nf, ca * cb);
  return out;
}

}  // namespace opecalc
