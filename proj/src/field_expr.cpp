#include <opecalc/field_expr.hpp>

namespace opecalc {

struct FieldExpr::Node {
  Kind kind = Kind::Unit;
  std::string name;
  int order = 0;
  std::vector<FieldExpr> children;
  std::vector<Term> terms;
};

FieldExpr::FieldExpr() {
  static const auto unit_node = std::make_shared<const Node>();
  node_ = unit_node;
}

FieldExpr FieldExpr::gen(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Gen;
  n->name = std::move(name);
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::deriv(int k, FieldExpr child) {
  if (k < 1) throw Error("derivative order must be at least 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Deriv;
  n->order = k;
  n->children.push_back(std::move(child));
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::nop(FieldExpr left, FieldExpr right) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Nop;
  n->children.push_back(std::move(left));
  n->children.push_back(std::move(right));
  return FieldExpr(std::move(n));
}

FieldExpr FieldExpr::sum(std::vector<Term> terms) {
  if (terms.empty()) throw Error("empty sum");
  if (terms.size() == 1 && terms.front().first == 1) return terms.front().second;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->terms = std::move(terms);
  return FieldExpr(std::move(n));
}

FieldExpr::Kind FieldExpr::kind() const { return node_->kind; }
const std::string& FieldExpr::name() const { return node_->name; }
int FieldExpr::order() const { return node_->order; }
const FieldExpr& FieldExpr::child() const { return node_->children.at(0); }
const FieldExpr& FieldExpr::left() const { return node_->children.at(0); }
const FieldExpr& FieldExpr::right() const { return node_->children.at(1); }
const std::vector<FieldExpr::Term>& FieldExpr::terms() const { return node_->terms; }

bool operator==(const FieldExpr& a, const FieldExpr& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.order == y.order &&
         x.children == y.children && x.terms == y.terms;
}

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b) {
  return FieldExpr::sum({{Scalar(1), a}, {Scalar(1), b}});
}

FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) {
  return FieldExpr::sum({{Scalar(1), a}, {Scalar(-1), b}});
}

FieldExpr operator*(const Scalar& c, const FieldExpr& e) { return FieldExpr::scaled(c, e); }

namespace {

std::string print_factor(const FieldExpr& e) {
  if (e.kind() == FieldExpr::Kind::Sum) return "(" + to_string(e) + ")";
  return to_string(e);
}

}  // namespace

std::string to_string(const FieldExpr& e) {
  switch (e.kind()) {
    case FieldExpr::Kind::Unit:
      return "1";
    case FieldExpr::Kind::Gen:
      return e.name();
    case FieldExpr::Kind::Deriv:
      return (e.order() == 1 ? std::string("d ") : "d{" + std::to_string(e.order()) + "} ") +
             print_factor(e.child());
    case FieldExpr::Kind::Nop:
      return ":" + print_factor(e.left()) + " " + print_factor(e.right()) + ":";
    case FieldExpr::Kind::Sum: {
      std::string out;
      bool first = true;
      for (const auto& [c, t] : e.terms()) {
        Scalar mag = abs(c);
        if (first)
          out += c < 0 ? "-" : "";
        else
          out += c < 0 ? " - " : " + ";
        if (mag != 1) out += to_string(mag) + "*";
        out += print_factor(t);
        first = false;
      }
      return out;
    }
  }
  return {};
}

}  // namespace opecalc
