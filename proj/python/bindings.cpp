#include <opecalc/cli.hpp>
#include <opecalc/identities.hpp>
#include <opecalc/oracle.hpp>
#include <opecalc/parser.hpp>
#include <opecalc/presets.hpp>
#include <opecalc/render.hpp>
#include <opecalc/wick.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using namespace opecalc;

namespace {

py::object fraction(const Scalar& s) {
  return py::module_::import("fractions").attr("Fraction")(to_string(s));
}

std::map<std::string, Scalar> scalar_params(const py::dict& kw) {
  std::map<std::string, Scalar> out;
  for (const auto& [k, v] : kw) out.emplace(py::str(k), parse_scalar(std::string(py::str(v))));
  return out;
}

// An algebra together with the engine that evaluates products in it.
class Algebra {
 public:
  explicit Algebra(AlgebraDef def) : def_(std::make_shared<const AlgebraDef>(std::move(def))), eng_(def_) {}

  const AlgebraDef& def() const { return *def_; }
  const Engine& engine() const { return eng_; }

  NormalForm nf(const std::string& expr) const { return eng_.normal_form(parse_expr(expr, *def_)); }
  std::string show(const NormalForm& x) const { return Renderer(eng_, "*").field(x); }

  py::dict poles(const SingularPart& sp) const {
    py::dict out;
    Renderer r(eng_, "*");
    for (const auto& [pole, field] : sp) out[py::int_(pole)] = r.field(field);
    return out;
  }

 private:
  std::shared_ptr<const AlgebraDef> def_;
  Engine eng_;
};

py::object classification(const Classification& c) {
  return c.ok() ? fraction(*c.value) : py::none();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact operator product expansions of chiral fields";

  py::register_exception<Error>(m, "OpecalcError", PyExc_ValueError);

  py::class_<Algebra, std::shared_ptr<Algebra>>(m, "Algebra")
      .def_property_readonly("generators",
                             [](const Algebra& a) {
                               py::list out;
                               for (const auto& g : a.def().generators)
                                 out.append(py::make_tuple(g.name, g.parity, fraction(g.weight)));
                               return out;
                             })
      .def_property_readonly("fields",
                             [](const Algebra& a) {
                               std::vector<std::string> out;
                               for (const auto& [name, expr] : a.def().named_fields) out.push_back(name);
                               return out;
                             })
      .def_property_readonly("fingerprint", [](const Algebra& a) { return fingerprint(a.def()); })
      .def("serialize", [](const Algebra& a) { return serialize(a.def()); })
      .def("is_central", [](const Algebra& a) { return is_central(a.def()); })
      .def("normal_form", [](const Algebra& a, const std::string& e) { return to_string(a.nf(e), a.def()); })
      .def("equals", [](const Algebra& a, const std::string& x, const std::string& y) { return a.nf(x) == a.nf(y); })
      .def("parity",
           [](const Algebra& a, const std::string& e) -> py::object {
             auto p = a.engine().parity(a.nf(e));
             return p ? py::object(py::int_(*p)) : py::none();
           })
      .def("derive",
           [](const Algebra& a, const std::string& e, int k) { return a.show(a.engine().derive(a.nf(e), k)); },
           py::arg("expr"), py::arg("k") = 1)
      .def("nprod",
           [](const Algebra& a, const std::string& x, int n, const std::string& y) {
             return a.show(nth_product(a.engine(), a.nf(x), n, a.nf(y)));
           })
      .def("ope",
           [](const Algebra& a, const std::string& x, const std::string& y) {
             return a.poles(contract(a.engine(), a.nf(x), a.nf(y)));
           },
           "Singular part as {pole: field}.")
      .def("oracle_contract",
           [](const Algebra& a, const std::string& x, const std::string& y) {
             return a.poles(oracle_contract(a.nf(x), a.nf(y), a.def()));
           })
      .def("central_charge",
           [](const Algebra& a, const std::string& t) { return classification(check_virasoro(a.engine(), a.nf(t))); })
      .def("conformal_weight",
           [](const Algebra& a, const std::string& t, const std::string& phi) {
             return classification(check_primary(a.engine(), a.nf(t), a.nf(phi)));
           })
      .def("borcherds_residual",
           [](const Algebra& a, const std::string& x, const std::string& y, const std::string& z, int p, int q,
              int r) { return a.show(borcherds_residual(a.engine(), a.nf(x), a.nf(y), a.nf(z), p, q, r).residual); })
      .def("ncwick_residual",
           [](const Algebra& a, const std::string& x, const std::string& y, const std::string& z, int p) {
             return a.show(ncwick_residual(a.engine(), a.nf(x), a.nf(y), a.nf(z), p).residual);
           })
      .def("newwick_residual",
           [](const Algebra& a, const std::string& x, const std::string& y, const std::string& z, int q) {
             return a.show(newwick_residual(a.engine(), a.nf(x), a.nf(y), a.nf(z), q).residual);
           })
      .def("skew_residual",
           [](const Algebra& a, const std::string& x, const std::string& y, int mm) {
             return a.show(skew_residual(a.engine(), a.nf(x), a.nf(y), mm).residual);
           })
      .def("fuzz_identities",
           [](const Algebra& a, int range, unsigned jobs) {
             FuzzReport rep;
             {
               py::gil_scoped_release release;
               rep = fuzz_identities(a.engine(), range, jobs);
             }
             py::dict out;
             out["checked"] = rep.checked;
             out["failures"] = rep.failures.size();
             return out;
           },
           py::arg("range") = 3, py::arg("jobs") = 1);

  m.def("preset_names", &preset_names);
  m.def(
      "pole_derivative",
      [](int pole, int a, int b) {
        const PoleDerivative d = opecalc::pole_derivative(pole, a, b);
        return py::make_tuple(fraction(d.coef), d.order);
      },
      "d_z^a d_w^b (z-w)^-pole as (coefficient, order).");
  m.def(
      "load_preset",
      [](const std::string& name, const py::kwargs& params) { return std::make_shared<Algebra>(load_preset(name, scalar_params(params))); },
      py::arg("name"));
  m.def("parse_algebra", [](const std::string& text) { return std::make_shared<Algebra>(parse_algebra(text)); });
  m.def("load_algebra_file", [](const std::string& path) { return std::make_shared<Algebra>(load_algebra_file(path)); });
  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs a CLI command line; returns (exit code, stdout, stderr).");
}
