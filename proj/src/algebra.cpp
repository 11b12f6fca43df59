#include <opecalc/algebra.hpp>

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace opecalc {

std::optional<std::uint32_t> AlgebraDef::find(std::string_view name) const {
  auto it = std::lower_bound(generators.begin(), generators.end(), name,
                             [](const Generator& g, std::string_view n) { return g.name < n; });
  if (it == generators.end() || it->name != name) return std::nullopt;
  return static_cast<std::uint32_t>(it - generators.begin());
}

std::uint32_t AlgebraDef::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw AlgebraError("unknown generator '" + std::string(name) + "'");
  return *i;
}

int AlgebraDef::parity(const Monomial& m) const {
  int p = 0;
  for (const auto& f : m) p ^= parity(f);
  return p;
}

Scalar AlgebraDef::weight(const Monomial& m) const {
  Scalar w(0);
  for (const auto& f : m) w += weight(f);
  return w;
}

const SingularPart& AlgebraDef::entry(std::uint32_t g, std::uint32_t h) const {
  static const SingularPart none;
  auto it = contractions.find({g, h});
  return it == contractions.end() ? none : it->second;
}

AlgebraDef make_algebra(std::vector<Generator> generators) {
  std::sort(generators.begin(), generators.end(),
            [](const Generator& a, const Generator& b) { return a.name < b.name; });
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].parity != 0 && generators[i].parity != 1)
      throw AlgebraError("generator '" + generators[i].name + "' has parity outside {0,1}");
    if (i > 0 && generators[i].name == generators[i - 1].name)
      throw AlgebraError("duplicate generator '" + generators[i].name + "'");
  }
  AlgebraDef alg;
  alg.generators = std::move(generators);
  return alg;
}

NormalForm raw_derive(const NormalForm& nf, int k) {
  NormalForm cur = nf;
  for (int step = 0; step < k; ++step) {
    NormalForm next;
    if (cur.unsorted()) next.mark_unsorted();
    for (const auto& [m, c] : cur) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        Monomial d = m;
        ++d[j].deriv;
        next.add(d, c);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

SingularPart skew_entry(const AlgebraDef& alg, std::uint32_t g, std::uint32_t h,
                        const SingularPart& gh) {
  const int sign = koszul_sign(alg.generators.at(g).parity, alg.generators.at(h).parity);
  const int top = gh.max_pole() - 1;  // largest n with g_(n) h != 0
  SingularPart out;
  for (int m = 0; m <= top; ++m) {
    NormalForm v;
    for (int i = 0; m + i <= top; ++i) {
      NormalForm term = raw_derive(gh.at(m + i + 1), i);
      Scalar c = Scalar(((m + i + 1) % 2 == 0 ? 1 : -1) * sign) / factorial(i);
      v.add(term, c);
    }
    out.set(m + 1, std::move(v));
  }
  return out;
}

namespace {

std::string describe(const SingularPart& sp, const AlgebraDef& alg) {
  if (sp.empty()) return "{}";
  std::string out = "{";
  bool first = true;
  for (auto it = sp.poles().rbegin(); it != sp.poles().rend(); ++it) {
    if (!first) out += ", ";
    out += std::to_string(it->first) + ": " + to_string(it->second, alg);
    first = false;
  }
  return out + "}";
}

}  // namespace

AlgebraDef complete_contractions(AlgebraDef alg) {
  std::vector<std::pair<AlgebraDef::Pair, SingularPart>> added;
  for (const auto& [key, sp] : alg.contractions) {
    auto [g, h] = key;
    SingularPart image = skew_entry(alg, g, h, sp);
    auto rev = alg.contractions.find({h, g});
    if (rev == alg.contractions.end()) {
      if (!image.empty()) added.emplace_back(AlgebraDef::Pair{h, g}, std::move(image));
    } else if (!(rev->second == image)) {
      throw AlgebraError("inconsistent contraction pair (" + alg.generators[g].name + ", " +
                         alg.generators[h].name + "): declared " + alg.generators[h].name + " " +
                         alg.generators[g].name + " = " + describe(rev->second, alg) +
                         ", skew symmetry requires " + describe(image, alg));
    }
  }
  for (auto& [key, sp] : added) alg.contractions.emplace(key, std::move(sp));

  alg.degree_reducing = true;
  alg.central = true;
  for (const auto& [key, sp] : alg.contractions)
    for (const auto& [pole, nf] : sp)
      for (const auto& [m, c] : nf) {
        if (!m.empty()) alg.central = false;
        if (m.size() >= 2) alg.degree_reducing = false;
      }
  return alg;
}

std::string to_string(const Monomial& m, const AlgebraDef& alg) {
  if (m.empty()) return "1";
  auto factor = [&](const Factor& f) {
    const std::string& name = alg.generators.at(f.gen).name;
    if (f.deriv == 0) return name;
    if (f.deriv == 1) return "d " + name;
    return "d{" + std::to_string(f.deriv) + "} " + name;
  };
  if (m.size() == 1) return factor(m.front());
  Monomial tail(m.begin() + 1, m.end());
  return ":" + factor(m.front()) + " " + to_string(tail, alg) + ":";
}

std::string to_string(const NormalForm& nf, const AlgebraDef& alg) {
  if (nf.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : nf) {
    Scalar mag = abs(c);
    if (first)
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    if (mag != 1) out += to_string(mag) + "*";
    out += to_string(m, alg);
    first = false;
  }
  return out;
}

std::string serialize(const AlgebraDef& alg) {
  std::ostringstream os;
  os << "opecalc-algebra v1\n";
  for (const auto& [name, value] : alg.params) os << "param " << name << " = " << to_string(value) << "\n";
  for (const auto& g : alg.generators)
    os << "generator " << g.name << " parity=" << g.parity << " weight=" << to_string(g.weight) << "\n";
  for (const auto& [key, sp] : alg.contractions) {
    if (sp.empty()) continue;
    os << "contract " << alg.generators[key.first].name << " " << alg.generators[key.second].name << " =";
    bool first = true;
    for (auto it = sp.poles().rbegin(); it != sp.poles().rend(); ++it) {
      for (const auto& [m, c] : it->second) {
        Scalar mag = abs(c);
        if (first)
          os << (c < 0 ? " -" : " ");
        else
          os << (c < 0 ? " - " : " + ");
        if (mag != 1) os << to_string(mag) << "*";
        os << to_string(m, alg) << "/dz^" << it->first;
        first = false;
      }
    }
    os << "\n";
  }
  for (const auto& [name, e] : alg.named_fields) os << "field " << name << " = " << to_string(e) << "\n";
  return os.str();
}

std::string fingerprint(const AlgebraDef& alg) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : serialize(alg)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace opecalc
