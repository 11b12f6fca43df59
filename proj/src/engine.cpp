#include <opecalc/engine.hpp>

#include <algorithm>

namespace opecalc {

namespace {

// Recursion guard. Degree-reducing algebras always terminate; this only
// trips for pathological tables outside that class.
thread_local int depth = 0;
constexpr int kMaxDepth = 20000;

struct DepthGuard {
  DepthGuard() {
    if (++depth > kMaxDepth) {
      depth = 0;
      throw Error("residue-product recursion did not terminate (table is not degree-reducing?)");
    }
  }
  ~DepthGuard() {
    if (depth > 0) --depth;
  }
};

Monomial tail(const Monomial& m) { return Monomial(m.begin() + 1, m.end()); }

Monomial prepend(const Factor& f, const Monomial& m) {
  Monomial out;
  out.reserve(m.size() + 1);
  out.push_back(f);
  out.insert(out.end(), m.begin(), m.end());
  return out;
}

Factor derived(Factor f, int k) {
  f.deriv += static_cast<std::uint32_t>(k);
  return f;
}

int sign_pow(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

Engine::Engine(AlgebraDef alg) : alg_(std::make_shared<const AlgebraDef>(std::move(alg))) {}
Engine::Engine(std::shared_ptr<const AlgebraDef> alg) : alg_(std::move(alg)) {}

std::size_t Engine::cache_size() const {
  std::lock_guard lock(mu_);
  return prod_cache_.size() + insert_cache_.size() + derive_cache_.size() + bound_cache_.size();
}

std::optional<int> Engine::parity(const NormalForm& a) const {
  std::optional<int> p;
  for (const auto& [m, c] : a) {
    int q = alg_->parity(m);
    if (p && *p != q) return std::nullopt;
    p = q;
  }
  return p.value_or(0);
}

int Engine::homogeneous_parity(const NormalForm& a) const {
  auto p = parity(a);
  if (!p) throw ParityError("operand " + to_string(a, *alg_) + " has inhomogeneous parity");
  return *p;
}

NormalForm Engine::normal_form(const FieldExpr& e) const {
  switch (e.kind()) {
    case FieldExpr::Kind::Unit:
      return NormalForm::unit();
    case FieldExpr::Kind::Gen: {
      if (auto g = alg_->find(e.name())) return NormalForm(Monomial{Factor{*g, 0}});
      auto named = alg_->named_fields.find(e.name());
      if (named != alg_->named_fields.end()) return normal_form(named->second);
      throw AlgebraError("unknown generator '" + e.name() + "'");
    }
    case FieldExpr::Kind::Deriv:
      return derive(normal_form(e.child()), e.order());
    case FieldExpr::Kind::Nop:
      return nop(normal_form(e.left()), normal_form(e.right()));
    case FieldExpr::Kind::Sum: {
      NormalForm out;
      for (const auto& [c, t] : e.terms()) out.add(normal_form(t), c);
      return out;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Generator-level products, straight from the table.

NormalForm Engine::base_prod(std::uint32_t g, int m, const Factor& h) const {
  if (h.deriv == 0) return alg_->entry(g, h.gen).at(m + 1);
  // g_(m) dH = d(g_(m) H) + m g_(m-1) H
  Factor lower{h.gen, h.deriv - 1};
  NormalForm out = derive(base_prod(g, m, lower));
  if (m > 0) out.add(base_prod(g, m - 1, lower), Scalar(m));
  return out;
}

NormalForm Engine::gen_prod(const Factor& f, int n, const Factor& g) const {
  const int a = static_cast<int>(f.deriv);
  if (n < a) return {};
  // (d^a F)_(n) X = (-1)^a n!/(n-a)! F_(n-a) X
  Scalar c = falling_factorial(n, a) * sign_pow(a);
  return c * base_prod(f.gen, n - a, g);
}

int Engine::gen_bound(const Factor& f, const Factor& g) const {
  const auto& e = alg_->entry(f.gen, g.gen);
  if (e.empty()) return -1;
  return e.max_pole() - 1 + static_cast<int>(f.deriv + g.deriv);
}

// ---------------------------------------------------------------------------
// Normal ordering.

NormalForm Engine::insert(const Factor& f, const Monomial& m) const {
  if (m.empty()) return NormalForm(Monomial{f});
  if (!sorting()) {
    NormalForm out(prepend(f, m));
    out.mark_unsorted();
    return out;
  }
  const Factor& first = m.front();
  const bool odd = alg_->parity(f) == 1;
  if (f < first || (f == first && !odd)) return NormalForm(prepend(f, m));

  auto key = std::make_pair(f, m);
  {
    std::lock_guard lock(mu_);
    if (auto it = insert_cache_.find(key); it != insert_cache_.end()) return it->second;
  }
  DepthGuard guard;

  // :f :g R:: = s :g :f R:: + sum_i (-1)^i (f_(i) g)_(-2-i) R
  const Monomial rest = tail(m);
  const NormalForm rest_nf(rest);
  NormalForm correction;
  for (int i = 0, top = gen_bound(f, first); i <= top; ++i) {
    NormalForm x = gen_prod(f, i, first);
    if (x.is_zero()) continue;
    correction.add(nop(derive(x, i + 1), rest_nf), Scalar(sign_pow(i)) / factorial(i + 1));
  }

  NormalForm out;
  if (f == first) {
    // odd f: the swap term is -(itself)
    out.add(correction, Scalar(1, 2));
  } else {
    const int s = koszul_sign(alg_->parity(f), alg_->parity(first));
    out.add(insert_all(first, insert(f, rest)), Scalar(s));
    out.add(correction);
  }

  std::lock_guard lock(mu_);
  insert_cache_.emplace(std::move(key), out);
  return out;
}

NormalForm Engine::insert_all(const Factor& f, const NormalForm& nf) const {
  NormalForm out;
  if (nf.unsorted()) out.mark_unsorted();
  for (const auto& [m, c] : nf) out.add(insert(f, m), c);
  return out;
}

NormalForm Engine::nop_mono(const Monomial& x, const Monomial& y) const {
  if (x.empty()) return NormalForm(y);
  if (y.empty()) return NormalForm(x);
  if (x.size() == 1) return insert(x.front(), y);

  // (:a R:)_(-1) C = sum_{i>=0} a_(-i-1) (R_(i-1) C) + s R_(-i-2) (a_(i) C)
  const Factor& a = x.front();
  const NormalForm rest(tail(x));
  const NormalForm rhs(y);
  NormalForm out = insert_all(a, nop(rest, rhs));
  for (int i = 1, top = max_index(rest, rhs) + 1; i <= top; ++i) {
    NormalForm inner = nprod(rest, i - 1, rhs);
    if (!inner.is_zero()) out.add(insert_all(derived(a, i), inner), Scalar(1) / factorial(i));
  }
  const int s = koszul_sign(alg_->parity(a), alg_->parity(tail(x)));
  const NormalForm head(Monomial{a});
  for (int i = 0, top = max_index(head, rhs); i <= top; ++i) {
    NormalForm inner = nprod(head, i, rhs);
    if (inner.is_zero()) continue;
    out.add(nop(derive(rest, i + 1), inner), Scalar(s) / factorial(i + 1));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Residue products.

NormalForm Engine::nprod(const NormalForm& a, int n, const NormalForm& b, Route route) const {
  NormalForm out;
  if (a.unsorted() || b.unsorted()) out.mark_unsorted();
  for (const auto& [x, c] : a)
    for (const auto& [y, d] : b) out.add(nprod_mono(x, n, y, route), Scalar(c * d));
  return out;
}

NormalForm Engine::nprod_mono(const Monomial& x, int n, const Monomial& y, Route route) const {
  if (n >= 0 && (x.empty() || y.empty())) return {};
  if (n >= 0 && x.size() == 1 && y.size() == 1) return gen_prod(x.front(), n, y.front());

  ProdKey key{x, n, y};
  const bool cacheable = route == Route::Auto;
  if (cacheable) {
    std::lock_guard lock(mu_);
    if (auto it = prod_cache_.find(key); it != prod_cache_.end()) return it->second;
  }
  DepthGuard guard;

  NormalForm out;
  if (n < 0) {
    // A_(-k-1) B = :d^(k)A B:
    const int k = -n - 1;
    NormalForm left = derive(NormalForm(x), k);
    left *= Scalar(1) / factorial(k);
    for (const auto& [m, c] : left) out.add(nop_mono(m, y), c);
  } else {
    bool use_left = x.size() >= 2;
    if (route == Route::RightWick && y.size() >= 2) use_left = false;
    if (route == Route::LeftWick && x.size() >= 2) use_left = true;
    out = use_left ? left_wick(x, n, y) : right_wick(x, n, y);
  }

  if (cacheable) {
    std::lock_guard lock(mu_);
    prod_cache_.emplace(std::move(key), out);
  }
  return out;
}

// (:a R:)_(q) C = sum_{i>=0} a_(-i-1) (R_(q+i) C) + s R_(q-i-1) (a_(i) C)
NormalForm Engine::left_wick(const Monomial& x, int q, const Monomial& y) const {
  const Factor& a = x.front();
  const NormalForm rest(tail(x));
  const NormalForm rhs(y);
  NormalForm out;
  for (int i = 0, top = max_index(rest, rhs) - q; i <= top; ++i) {
    NormalForm inner = nprod(rest, q + i, rhs);
    if (!inner.is_zero()) out.add(insert_all(derived(a, i), inner), Scalar(1) / factorial(i));
  }
  const int s = koszul_sign(alg_->parity(a), alg_->parity(tail(x)));
  const NormalForm head(Monomial{a});
  for (int i = 0, top = max_index(head, rhs); i <= top; ++i) {
    NormalForm inner = nprod(head, i, rhs);
    if (inner.is_zero()) continue;
    out.add(nprod(rest, q - i - 1, inner), Scalar(s));
  }
  return out;
}

// A_(n) :b R: = :(A_(n) b) R: + s :b (A_(n) R): + sum_{i<n} C(n,i) (A_(i) b)_(n-i-1) R
NormalForm Engine::right_wick(const Monomial& x, int n, const Monomial& y) const {
  const NormalForm lhs(x);
  const Factor& b = y.front();
  const NormalForm head(Monomial{b});
  const NormalForm rest(tail(y));
  const int s = koszul_sign(alg_->parity(x), alg_->parity(b));

  NormalForm out = nop(nprod(lhs, n, head), rest);
  out.add(insert_all(b, nprod(lhs, n, rest)), Scalar(s));
  for (int i = 0, top = std::min(n - 1, max_index(lhs, head)); i <= top; ++i) {
    NormalForm ab = nprod(lhs, i, head);
    if (ab.is_zero()) continue;
    out.add(nprod(ab, n - i - 1, rest), binomial(n, i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Derivatives.

NormalForm Engine::derive_mono(const Monomial& m) const {
  if (m.empty()) return {};
  if (m.size() == 1) return NormalForm(Monomial{derived(m.front(), 1)});
  {
    std::lock_guard lock(mu_);
    if (auto it = derive_cache_.find(m); it != derive_cache_.end()) return it->second;
  }
  DepthGuard guard;
  // d:f R: = :(df) R: + :f (dR):
  const Monomial rest = tail(m);
  NormalForm out = insert(derived(m.front(), 1), rest);
  out.add(insert_all(m.front(), derive_mono(rest)));
  std::lock_guard lock(mu_);
  derive_cache_.emplace(m, out);
  return out;
}

NormalForm Engine::derive(const NormalForm& a, int k) const {
  if (k < 0) throw Error("negative derivative order");
  NormalForm cur = a;
  for (int step = 0; step < k; ++step) {
    NormalForm next;
    if (cur.unsorted()) next.mark_unsorted();
    for (const auto& [m, c] : cur) next.add(derive_mono(m), c);
    cur = std::move(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Pole bounds, mirroring the recursion above.

int Engine::bound_mono(const Monomial& x, const Monomial& y) const {
  if (x.empty() || y.empty()) return -1;
  if (x.size() == 1 && y.size() == 1) return gen_bound(x.front(), y.front());
  auto key = std::make_pair(x, y);
  {
    std::lock_guard lock(mu_);
    if (auto it = bound_cache_.find(key); it != bound_cache_.end()) return it->second;
  }
  DepthGuard guard;

  int out = -1;
  if (x.size() >= 2) {
    const NormalForm head(Monomial{x.front()});
    const NormalForm rest(tail(x));
    const NormalForm rhs(y);
    out = max_index(rest, rhs);
    for (int i = 0, top = max_index(head, rhs); i <= top; ++i) {
      NormalForm inner = nprod(head, i, rhs);
      if (inner.is_zero()) continue;
      out = std::max({out, i, i + 1 + max_index(rest, inner)});
    }
  } else {
    const NormalForm lhs(x);
    const NormalForm head(Monomial{y.front()});
    const NormalForm rest(tail(y));
    out = std::max(max_index(lhs, head), max_index(lhs, rest));
    for (int i = 0, top = max_index(lhs, head); i <= top; ++i) {
      NormalForm ab = nprod(lhs, i, head);
      if (ab.is_zero()) continue;
      out = std::max(out, i + 1 + max_index(ab, rest));
    }
  }

  std::lock_guard lock(mu_);
  bound_cache_.emplace(std::move(key), out);
  return out;
}

int Engine::max_index(const NormalForm& a, const NormalForm& b) const {
  int out = -1;
  for (const auto& [x, c] : a)
    for (const auto& [y, d] : b) out = std::max(out, bound_mono(x, y));
  return out;
}

SingularPart Engine::contract(const NormalForm& a, const NormalForm& b) const {
  SingularPart out;
  for (int n = 0, top = max_index(a, b); n <= top; ++n) out.set(n + 1, nprod(a, n, b));
  return out;
}

}  // namespace opecalc
