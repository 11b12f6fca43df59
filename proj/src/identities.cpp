#include <opecalc/identities.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <thread>

namespace opecalc {

namespace {

// Signed summands plus their total.
struct Sum {
  std::vector<NormalForm> terms;
  NormalForm total;

  void add(const NormalForm& v, const Scalar& c) {
    if (v.is_zero() || c == 0) return;
    NormalForm t = c * v;
    total += t;
    terms.push_back(std::move(t));
  }
};

IdentityResidual finish(std::string name, std::map<std::string, int> params, const NormalForm& a,
                        const NormalForm& b, const NormalForm& c, Sum sum) {
  IdentityResidual out;
  out.identity = std::move(name);
  out.params = std::move(params);
  out.a = a;
  out.b = b;
  out.c = c;
  out.residual = std::move(sum.total);
  out.terms = std::move(sum.terms);
  return out;
}

int sign_pow(long k) { return (k % 2 == 0) ? 1 : -1; }

// A_(n) B vanishes for n >= 0 beyond the engine's bound; skipping those
// saves evaluating products known to be zero.
bool vanishes(const Engine& eng, const NormalForm& x, int n, const NormalForm& y) {
  return n >= 0 && n > eng.max_index(x, y);
}

}  // namespace

IdentityResidual borcherds_residual(const Engine& eng, const NormalForm& a, const NormalForm& b,
                                    const NormalForm& c, int p, int q, int r) {
  if (p < 0 && r < 0)
    throw Error("borcherds: rejected parameter range (p < 0 and r < 0)");
  const int pa = eng.homogeneous_parity(a);
  const int pb = eng.homogeneous_parity(b);
  eng.homogeneous_parity(c);
  const int s = koszul_sign(pa, pb);

  Sum sum;
  // left side: sum_i C(p,i) (A_(r+i) B)_(p+q-i) C
  const int lhs_end = p >= 0 ? p : eng.max_index(a, b) - r;
  for (int i = 0; i <= lhs_end; ++i) {
    if (vanishes(eng, a, r + i, b)) continue;
    const NormalForm ab = eng.nprod(a, r + i, b);
    if (vanishes(eng, ab, p + q - i, c)) continue;
    sum.add(eng.nprod(ab, p + q - i, c), binomial(p, i));
  }

  // right side: sum_i (-1)^i C(r,i) [A_(p+r-i)(B_(q+i) C) - (-1)^r s B_(q+r-i)(A_(p+i) C)]
  int rhs_end = r;
  if (r < 0)
    rhs_end = std::max({-q - 1, eng.max_index(b, c) - q, eng.max_index(a, c) - p});
  for (int i = 0; i <= rhs_end; ++i) {
    const Scalar coef = sign_pow(i) * binomial(r, i);
    if (coef == 0) continue;
    if (!vanishes(eng, b, q + i, c)) {
      const NormalForm bc = eng.nprod(b, q + i, c);
      if (!vanishes(eng, a, p + r - i, bc)) sum.add(eng.nprod(a, p + r - i, bc), -coef);
    }
    if (!vanishes(eng, a, p + i, c)) {
      const NormalForm ac = eng.nprod(a, p + i, c);
      if (!vanishes(eng, b, q + r - i, ac))
        sum.add(eng.nprod(b, q + r - i, ac), coef * sign_pow(r) * s);
    }
  }
  return finish("borcherds", {{"p", p}, {"q", q}, {"r", r}}, a, b, c, std::move(sum));
}

IdentityResidual ncwick_residual(const Engine& eng, const NormalForm& a, const NormalForm& b,
                                 const NormalForm& c, int p) {
  if (p < 0) throw Error("ncwick: p must be non-negative");
  const int pa = eng.homogeneous_parity(a);
  const int pb = eng.homogeneous_parity(b);
  eng.homogeneous_parity(c);
  const int s = koszul_sign(pa, pb);

  Sum sum;
  const NormalForm bc = eng.nprod(b, -1, c);
  if (!vanishes(eng, a, p, bc)) sum.add(eng.nprod(a, p, bc), 1);
  if (!vanishes(eng, a, p, b)) sum.add(eng.nprod(eng.nprod(a, p, b), -1, c), -1);
  if (!vanishes(eng, a, p, c)) sum.add(eng.nprod(b, -1, eng.nprod(a, p, c)), -s);
  for (int i = 0; i < p; ++i) {
    if (vanishes(eng, a, i, b)) continue;
    const NormalForm ab = eng.nprod(a, i, b);
    if (vanishes(eng, ab, p - i - 1, c)) continue;
    sum.add(eng.nprod(ab, p - i - 1, c), -binomial(p, i));
  }
  return finish("ncwick", {{"p", p}}, a, b, c, std::move(sum));
}

IdentityResidual newwick_residual(const Engine& eng, const NormalForm& a, const NormalForm& b,
                                  const NormalForm& c, int q) {
  const int pa = eng.homogeneous_parity(a);
  const int pb = eng.homogeneous_parity(b);
  eng.homogeneous_parity(c);
  const int s = koszul_sign(pa, pb);

  Sum sum;
  const NormalForm ab = eng.nprod(a, -1, b);
  if (!vanishes(eng, ab, q, c)) sum.add(eng.nprod(ab, q, c), 1);
  const int end = std::max({-q - 1, eng.max_index(b, c) - q, eng.max_index(a, c)});
  for (int i = 0; i <= end; ++i) {
    if (!vanishes(eng, b, q + i, c)) {
      const NormalForm bc = eng.nprod(b, q + i, c);
      sum.add(eng.nprod(a, -i - 1, bc), -1);
    }
    if (!vanishes(eng, a, i, c)) {
      const NormalForm ac = eng.nprod(a, i, c);
      if (!vanishes(eng, b, q - i - 1, ac)) sum.add(eng.nprod(b, q - i - 1, ac), -s);
    }
  }
  return finish("newwick", {{"q", q}}, a, b, c, std::move(sum));
}

IdentityResidual skew_residual(const Engine& eng, const NormalForm& a, const NormalForm& b, int m) {
  const int pa = eng.homogeneous_parity(a);
  const int pb = eng.homogeneous_parity(b);
  const int s = koszul_sign(pa, pb);

  Sum sum;
  if (!vanishes(eng, b, m, a)) sum.add(eng.nprod(b, m, a), 1);
  const int end = std::max(-m - 1, eng.max_index(a, b) - m);
  for (int i = 0; i <= end; ++i) {
    if (vanishes(eng, a, m + i, b)) continue;
    const NormalForm ab = eng.nprod(a, m + i, b);
    sum.add(eng.derive(ab, i), -Scalar(s * sign_pow(m + i + 1)) / factorial(i));
  }
  return finish("skew", {{"m", m}}, a, b, NormalForm{}, std::move(sum));
}

IdentityResidual borcherds_residual(const FieldExpr& a, const FieldExpr& b, const FieldExpr& c, int p,
                                    int q, int r, const AlgebraDef& alg) {
  Engine eng(alg);
  return borcherds_residual(eng, eng.normal_form(a), eng.normal_form(b), eng.normal_form(c), p, q, r);
}

IdentityResidual ncwick_residual(const FieldExpr& a, const FieldExpr& b, const FieldExpr& c, int p,
                                 const AlgebraDef& alg) {
  Engine eng(alg);
  return ncwick_residual(eng, eng.normal_form(a), eng.normal_form(b), eng.normal_form(c), p);
}

IdentityResidual newwick_residual(const FieldExpr& a, const FieldExpr& b, const FieldExpr& c, int q,
                                  const AlgebraDef& alg) {
  Engine eng(alg);
  return newwick_residual(eng, eng.normal_form(a), eng.normal_form(b), eng.normal_form(c), q);
}

IdentityResidual skew_residual(const FieldExpr& a, const FieldExpr& b, int m, const AlgebraDef& alg) {
  Engine eng(alg);
  return skew_residual(eng, eng.normal_form(a), eng.normal_form(b), m);
}

bool same_terms(const IdentityResidual& x, const IdentityResidual& y, int sign) {
  auto key = [](const NormalForm& nf) { return nf.terms(); };
  std::multiset<NormalForm::Terms> lhs, rhs;
  for (const auto& t : x.terms) lhs.insert(key(t));
  for (const auto& t : y.terms) rhs.insert(key(Scalar(sign) * t));
  return lhs == rhs;
}

std::vector<NormalForm> identity_pool(const Engine& eng) {
  const auto n = static_cast<std::uint32_t>(eng.algebra().generators.size());
  std::vector<Factor> singles;
  for (std::uint32_t g = 0; g < n; ++g) {
    singles.push_back({g, 0});
    singles.push_back({g, 1});
  }
  std::sort(singles.begin(), singles.end());

  std::vector<NormalForm> pool;
  for (const auto& f : singles) pool.emplace_back(Monomial{f});
  std::set<Monomial> seen;
  for (std::size_t i = 0; i < singles.size(); ++i) {
    for (std::size_t j = i; j < singles.size(); ++j) {
      const NormalForm nf = eng.nop(NormalForm(Monomial{singles[i]}), NormalForm(Monomial{singles[j]}));
      if (nf.size() != 1) continue;
      const auto& [m, c] = *nf.begin();
      if (m.size() != 2 || c != 1) continue;
      if (seen.insert(m).second) pool.emplace_back(m);
    }
  }
  return pool;
}

FuzzReport fuzz_identities(const Engine& eng, int range, unsigned jobs) {
  const std::vector<NormalForm> pool = identity_pool(eng);
  const std::size_t n = pool.size();

  // One task per (A, B); each covers every C and every parameter choice.
  struct Outcome {
    std::map<std::string, long> checked;
    std::vector<FuzzFailure> failures;
  };
  std::vector<Outcome> outcomes(n * n);

  auto run = [&](std::size_t task) {
    const NormalForm& a = pool[task / n];
    const NormalForm& b = pool[task % n];
    Outcome& out = outcomes[task];
    auto record = [&](IdentityResidual res, std::string what) {
      out.failures.push_back({std::move(res), std::move(what)});
    };
    auto guarded = [&](const std::string& name, const std::function<void()>& body) {
      ++out.checked[name];
      try {
        body();
      } catch (const std::exception& e) {
        IdentityResidual res;
        res.identity = name;
        res.a = a;
        res.b = b;
        record(std::move(res), std::string("error: ") + e.what());
      }
    };

    for (int m = -range; m <= range; ++m) {
      guarded("skew", [&] {
        auto res = skew_residual(eng, a, b, m);
        if (!res.zero()) record(std::move(res), "nonzero residual");
      });
    }
    for (const auto& c : pool) {
      for (int p = -range; p <= range; ++p)
        for (int q = -range; q <= range; ++q)
          for (int r = -range; r <= range; ++r) {
            if (p < 0 && r < 0) continue;
            guarded("borcherds", [&] {
              auto res = borcherds_residual(eng, a, b, c, p, q, r);
              if (!res.zero()) record(std::move(res), "nonzero residual");
            });
          }
      for (int p = 0; p <= range; ++p) {
        guarded("ncwick", [&] {
          auto res = ncwick_residual(eng, a, b, c, p);
          auto ref = borcherds_residual(eng, a, b, c, p, -1, 0);
          if (!res.zero()) record(res, "nonzero residual");
          if (!same_terms(res, ref, -1)) record(std::move(res), "terms differ from borcherds(p,-1,0)");
        });
      }
      for (int q = -range; q <= range; ++q) {
        guarded("newwick", [&] {
          auto res = newwick_residual(eng, a, b, c, q);
          auto ref = borcherds_residual(eng, a, b, c, 0, q, -1);
          if (!res.zero()) record(res, "nonzero residual");
          if (!same_terms(res, ref)) record(std::move(res), "terms differ from borcherds(0,q,-1)");
        });
      }
    }
  };

  const std::size_t tasks = outcomes.size();
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks ? tasks : 1)));
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) run(t);
      });
    for (auto& w : workers) w.join();
  }

  FuzzReport report;
  for (auto& o : outcomes) {
    for (const auto& [k, v] : o.checked) report.checked[k] += v;
    for (auto& f : o.failures) report.failures.push_back(std::move(f));
  }
  return report;
}

}  // namespace opecalc
