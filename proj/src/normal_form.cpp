#include <opecalc/normal_form.hpp>

#include <algorithm>

namespace opecalc {

void NormalForm::add(const Monomial& m, const Scalar& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void NormalForm::add(const NormalForm& other, const Scalar& c) {
  if (other.unsorted_) unsorted_ = true;
  if (c == 0) return;
  for (const auto& [m, k] : other.terms_) add(m, Scalar(k * c));
}

Scalar NormalForm::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::size_t NormalForm::degree() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.size());
  return d;
}

NormalForm& NormalForm::operator*=(const Scalar& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, k] : terms_) k *= c;
  return *this;
}

void SingularPart::set(int pole, NormalForm nf) {
  if (nf.is_zero())
    poles_.erase(pole);
  else
    poles_[pole] = std::move(nf);
}

void SingularPart::add(int pole, const NormalForm& nf, const Scalar& c) {
  NormalForm sum = at(pole);
  sum.add(nf, c);
  set(pole, std::move(sum));
}

NormalForm SingularPart::at(int pole) const {
  auto it = poles_.find(pole);
  return it == poles_.end() ? NormalForm{} : it->second;
}

SingularPart& SingularPart::operator*=(const Scalar& c) {
  Poles scaled;
  for (auto& [p, nf] : poles_) {
    NormalForm v = c * nf;
    if (!v.is_zero()) scaled.emplace(p, std::move(v));
  }
  poles_ = std::move(scaled);
  return *this;
}

}  // namespace opecalc
