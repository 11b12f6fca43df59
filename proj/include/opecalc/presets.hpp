#ifndef OPECALC_PRESETS_HPP
#define OPECALC_PRESETS_HPP

#include <opecalc/algebra.hpp>

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace opecalc {

/// Built-in algebras:
///   "free-boson"   J, J(z)J(w) ~ 1/(z-w)^2, T = 1/2 :J J:
///   "free-fermion" psi, psi(z)psi(w) ~ 1/(z-w), T = -1/2 :psi d psi:
///   "bc-ghost"     b, c with b(z)c(w) ~ 1/(z-w) and parameter L (lambda);
///                  J = :b c:, A = :d b c:, B = -:b d c:, T = (1-L) A + L B
///
/// bc-ghost requires exactly the parameter L; the others take none. Throws
/// Error otherwise.
AlgebraDef load_preset(std::string_view name, const std::map<std::string, Scalar>& params = {});

/// v1 source text of a preset (what load_preset parses).
std::string preset_source(std::string_view name, const std::map<std::string, Scalar>& params = {});

const std::vector<std::string>& preset_names();

}  // namespace opecalc

#endif  // OPECALC_PRESETS_HPP
