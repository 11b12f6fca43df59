#ifndef OPECALC_RENDER_HPP
#define OPECALC_RENDER_HPP

#include <opecalc/engine.hpp>
#include <opecalc/normal_form.hpp>

#include <string>
#include <utility>
#include <vector>

namespace opecalc {

/// Human-facing rendering. A field that is a rational multiple of a named
/// field, its derivative, or the unit prints as "a·F", "a·d F", "a·1" (the
/// coefficient is dropped when it is 1); anything else falls back to the
/// raw expression grammar.
class Renderer {
 public:
  /// `times` separates coefficient and field: "·" for display, "*" keeps the
  /// output parseable.
  explicit Renderer(const Engine& eng, std::string times = "·");

  std::string field(const NormalForm& nf) const;
  /// "4: 1/2·1 | 2: 2·T | 1: d T", highest pole first; "0" when regular.
  std::string poles(const SingularPart& sp) const;

 private:
  std::string scaled(const Scalar& c, const std::string& name) const;

  const Engine& eng_;
  std::string times_;
  std::vector<std::pair<std::string, NormalForm>> named_;  // name ("T", "d T") -> normal form
};

}  // namespace opecalc

#endif  // OPECALC_RENDER_HPP
