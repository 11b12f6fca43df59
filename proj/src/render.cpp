#include <opecalc/render.hpp>

#include <algorithm>

namespace opecalc {

Renderer::Renderer(const Engine& eng, std::string times) : eng_(eng), times_(std::move(times)) {
  for (const auto& [name, expr] : eng.algebra().named_fields) {
    NormalForm nf = eng.normal_form(expr);
    if (nf.is_zero()) continue;
    named_.emplace_back("d " + name, eng.derive(nf));
    named_.emplace_back(name, std::move(nf));
  }
  // plain names before derivatives
  std::stable_partition(named_.begin(), named_.end(),
                        [](const auto& e) { return e.first.rfind("d ", 0) != 0; });
}

std::string Renderer::scaled(const Scalar& c, const std::string& name) const {
  if (c == 1) return name;
  if (c == -1) return "-" + name;
  return to_string(c) + times_ + name;
}

std::string Renderer::field(const NormalForm& nf) const {
  if (nf.is_zero()) return "0";
  if (nf.size() == 1 && nf.begin()->first.empty()) {
    const Scalar& c = nf.begin()->second;
    return (c == 1 || c == -1) ? to_string(c) : to_string(c) + times_ + "1";
  }
  const auto& [mono, coef] = *nf.begin();
  for (const auto& [name, ref] : named_) {
    if (ref.size() != nf.size()) continue;
    const Scalar base = ref.coefficient(mono);
    if (base == 0) continue;
    const Scalar ratio = coef / base;
    if (ratio * ref == nf) return scaled(ratio, name);
  }
  if (nf.size() == 1) return scaled(coef, to_string(mono, eng_.algebra()));
  return to_string(nf, eng_.algebra());
}

std::string Renderer::poles(const SingularPart& sp) const {
  if (sp.empty()) return "0";
  std::string out;
  for (auto it = sp.poles().rbegin(); it != sp.poles().rend(); ++it) {
    if (!out.empty()) out += " | ";
    out += std::to_string(it->first) + ": " + field(it->second);
  }
  return out;
}

}  // namespace opecalc
