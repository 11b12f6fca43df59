#include <opecalc/parser.hpp>
#include <opecalc/presets.hpp>

namespace opecalc {

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"free-boson", "free-fermion", "bc-ghost"};
  return names;
}

std::string preset_source(std::string_view name, const std::map<std::string, Scalar>& params) {
  auto no_params = [&] {
    if (!params.empty()) throw Error("preset '" + std::string(name) + "' takes no parameters");
  };
  if (name == "free-boson") {
    no_params();
    return "opecalc-algebra v1\n"
           "generator J parity=0 weight=1\n"
           "contract J J = 1/dz^2\n"
           "field T = 1/2*:J J:\n";
  }
  if (name == "free-fermion") {
    no_params();
    return "opecalc-algebra v1\n"
           "generator psi parity=1 weight=1/2\n"
           "contract psi psi = 1/dz^1\n"
           "field T = -1/2*:psi d psi:\n";
  }
  if (name == "bc-ghost") {
    auto it = params.find("L");
    if (it == params.end() || params.size() != 1)
      throw Error("preset 'bc-ghost' requires exactly the parameter L (lambda)");
    return "opecalc-algebra v1\n"
           "param L = " + to_string(it->second) + "\n"
           "generator b parity=1 weight=L\n"
           "generator c parity=1 weight=1-L\n"
           "contract b c = 1/dz^1\n"
           "field J = :b c:\n"
           "field A = :d b c:\n"
           "field B = -:b d c:\n"
           "field T = (1-L)*A + L*B\n";
  }
  throw Error("unknown preset '" + std::string(name) + "'");
}

AlgebraDef load_preset(std::string_view name, const std::map<std::string, Scalar>& params) {
  return parse_algebra(preset_source(name, params));
}

}  // namespace opecalc
