#include <opecalc/cli.hpp>
#include <opecalc/identities.hpp>
#include <opecalc/parser.hpp>
#include <opecalc/presets.hpp>
#include <opecalc/render.hpp>
#include <opecalc/wick.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

namespace opecalc {

namespace {

using Json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Error };

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Error: return "error";
  }
  return "error";
}

int exit_code(Status s) { return s == Status::Pass ? 0 : s == Status::Fail ? 1 : 2; }

struct Options {
  std::string preset;
  std::string algebra_file;
  std::vector<std::string> params;
  std::string format = "text";
  std::vector<std::string> args;
  unsigned jobs = 1;
  int range = 3;
};

// What a subcommand produces: human lines, machine results, status.
struct Outcome {
  Status status = Status::Pass;
  std::string text;
  Json results = Json::object();
  std::optional<std::string> algebra;  // fingerprint
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::map<std::string, Scalar> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, Scalar> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--param expects NAME=RATIONAL, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    if (!out.emplace(name, parse_scalar(item.substr(eq + 1))).second)
      throw UsageError("--param " + name + " given twice");
  }
  return out;
}

// Replaces the values of declared params in v1 source text.
std::string override_params(std::string text, const std::map<std::string, Scalar>& params) {
  for (const auto& [name, value] : params) {
    const std::regex line("^([ \\t]*param[ \\t]+" + name + "[ \\t]*=)[^\\n#]*", std::regex::multiline);
    if (!std::regex_search(text, line)) throw UsageError("algebra file declares no param '" + name + "'");
    text = std::regex_replace(text, line, "$1 " + to_string(value));
  }
  return text;
}

AlgebraDef load(const Options& o) {
  const auto params = parse_params(o.params);
  if (!o.preset.empty()) return load_preset(o.preset, params);
  if (o.algebra_file.empty()) throw UsageError("one of --preset or --algebra is required");
  std::ifstream in(o.algebra_file);
  if (!in) throw UsageError("cannot open algebra file '" + o.algebra_file + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  // files must carry the version header, which parse_algebra alone does not demand
  if (params.empty() || text.rfind("opecalc-algebra", 0) != 0) return load_algebra_file(o.algebra_file);
  return parse_algebra(override_params(std::move(text), params));
}

void expect_args(const Options& o, std::size_t n, const char* usage) {
  if (o.args.size() != n) throw UsageError(std::string("usage: ") + usage);
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw UsageError("expected an integer, got '" + s + "'");
  return v;
}

Json pole_json(const SingularPart& sp, const Renderer& r) {
  Json arr = Json::array();
  for (auto it = sp.poles().rbegin(); it != sp.poles().rend(); ++it)
    arr.push_back({{"pole", it->first}, {"field", r.field(it->second)}});
  return arr;
}

Outcome cmd_ope(const Options& o) {
  expect_args(o, 2, "ope A B");
  Outcome out;
  const AlgebraDef alg = load(o);
  Engine eng(alg);
  const NormalForm a = eng.normal_form(parse_expr(o.args[0], alg));
  const NormalForm b = eng.normal_form(parse_expr(o.args[1], alg));
  const OpeResult res = ope(eng, a, b);
  out.algebra = fingerprint(alg);
  out.text = Renderer(eng).poles(res.singular) + "\n";
  Renderer plain(eng, "*");
  out.results = {{"singular", pole_json(res.singular, plain)}, {"regular", plain.field(res.regular0)}};
  return out;
}

Outcome cmd_nprod(const Options& o) {
  expect_args(o, 3, "nprod A N B");
  Outcome out;
  const AlgebraDef alg = load(o);
  Engine eng(alg);
  const NormalForm a = eng.normal_form(parse_expr(o.args[0], alg));
  const int n = to_int(o.args[1]);
  const NormalForm b = eng.normal_form(parse_expr(o.args[2], alg));
  const NormalForm res = nth_product(eng, a, n, b);
  out.algebra = fingerprint(alg);
  out.text = Renderer(eng).field(res) + "\n";
  out.results = {{"n", n}, {"field", Renderer(eng, "*").field(res)}};
  return out;
}

Json residual_json(const IdentityResidual& r, const AlgebraDef& alg) {
  Json params = Json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  Json operands = Json::array({to_string(r.a, alg), to_string(r.b, alg)});
  if (r.identity != "skew") operands.push_back(to_string(r.c, alg));
  return {{"identity", r.identity}, {"params", params}, {"operands", operands},
          {"residual", to_string(r.residual, alg)}};
}

std::string residual_line(const IdentityResidual& r, const AlgebraDef& alg) {
  std::string params;
  for (const auto& [k, v] : r.params) params += (params.empty() ? "" : ",") + k + "=" + std::to_string(v);
  return r.identity + "(" + params + "): residual = " + to_string(r.residual, alg);
}

Outcome residual_outcome(const IdentityResidual& r, const AlgebraDef& alg) {
  Outcome out;
  out.algebra = fingerprint(alg);
  out.status = r.zero() ? Status::Pass : Status::Fail;
  out.text = residual_line(r, alg) + "\n";
  out.results = residual_json(r, alg);
  return out;
}

Outcome cmd_check_borcherds(const Options& o) {
  expect_args(o, 6, "check-borcherds A B C p q r");
  const AlgebraDef alg = load(o);
  Engine eng(alg);
  const int p = to_int(o.args[3]), q = to_int(o.args[4]), r = to_int(o.args[5]);
  if (p < 0 && r < 0) throw UsageError("check-borcherds: needs p >= 0 or r >= 0");
  return residual_outcome(borcherds_residual(eng, eng.normal_form(parse_expr(o.args[0], alg)),
                                             eng.normal_form(parse_expr(o.args[1], alg)),
                                             eng.normal_form(parse_expr(o.args[2], alg)), p, q, r),
                          alg);
}

Outcome cmd_check_skew(const Options& o) {
  expect_args(o, 3, "check-skew A B m");
  const AlgebraDef alg = load(o);
  Engine eng(alg);
  return residual_outcome(skew_residual(eng, eng.normal_form(parse_expr(o.args[0], alg)),
                                        eng.normal_form(parse_expr(o.args[1], alg)), to_int(o.args[2])),
                          alg);
}

Outcome classification_outcome(const Classification& c, const Engine& eng, const std::string& label) {
  Outcome out;
  out.algebra = fingerprint(eng.algebra());
  Renderer human(eng), plain(eng, "*");
  if (c.ok()) {
    out.text = label + " = " + to_string(*c.value) + "\n";
    out.results = {{label, to_string(*c.value)}, {"residuals", Json::array()}};
    return out;
  }
  out.status = Status::Fail;
  out.text = "not satisfied; residuals " + human.poles([&] {
    SingularPart sp;
    for (const auto& [pole, nf] : c.residuals) sp.set(pole, nf);
    return sp;
  }()) + "\n";
  Json res = Json::array();
  for (auto it = c.residuals.rbegin(); it != c.residuals.rend(); ++it)
    res.push_back({{"pole", it->first}, {"field", plain.field(it->second)}});
  out.results = {{label, nullptr}, {"residuals", res}};
  return out;
}

Outcome cmd_check_virasoro(const Options& o) {
  expect_args(o, 1, "check-virasoro T");
  const AlgebraDef alg = load(o);
  Engine eng(alg);
  return classification_outcome(check_virasoro(eng, eng.normal_form(parse_expr(o.args[0], alg))), eng, "c");
}

Outcome cmd_check_primary(const Options& o) {
  expect_args(o, 2, "check-primary T PHI");
  const AlgebraDef alg = load(o);
  Engine eng(alg);
  return classification_outcome(check_primary(eng, eng.normal_form(parse_expr(o.args[0], alg)),
                                              eng.normal_form(parse_expr(o.args[1], alg))),
                                eng, "weight");
}

Outcome cmd_fuzz(const Options& o) {
  expect_args(o, 0, "fuzz-identities [--range N] [--jobs N]");
  if (o.range < 0) throw UsageError("--range must be non-negative");
  std::vector<std::pair<std::string, AlgebraDef>> algebras;
  if (o.preset.empty() && o.algebra_file.empty()) {
    if (!o.params.empty()) throw UsageError("--param needs --preset or --algebra");
    // products of generators do not depend on the ghost weight
    algebras.emplace_back("free-boson", load_preset("free-boson"));
    algebras.emplace_back("free-fermion", load_preset("free-fermion"));
    algebras.emplace_back("bc-ghost", load_preset("bc-ghost", {{"L", Scalar(2)}}));
  } else {
    algebras.emplace_back(o.preset.empty() ? o.algebra_file : o.preset, load(o));
  }

  Outcome out;
  out.results = Json::array();
  if (algebras.size() == 1) out.algebra = fingerprint(algebras.front().second);
  for (const auto& [name, alg] : algebras) {
    Engine eng(alg);
    const FuzzReport rep = fuzz_identities(eng, o.range, o.jobs);
    Json checked = Json::object();
    std::string counts;
    for (const auto& [k, v] : rep.checked) {
      checked[k] = v;
      counts += " " + k + "=" + std::to_string(v);
    }
    Json failures = Json::array();
    for (const auto& f : rep.failures) {
      Json j = residual_json(f.instance, alg);
      j["what"] = f.what;
      failures.push_back(std::move(j));
    }
    out.text += name + ":" + counts + " failures=" + std::to_string(rep.failures.size()) + "\n";
    for (std::size_t i = 0; i < rep.failures.size() && i < 20; ++i)
      out.text += "  " + rep.failures[i].what + ": " + residual_line(rep.failures[i].instance, alg) + "\n";
    if (!rep.ok()) out.status = Status::Fail;
    out.results.push_back({{"algebra", name}, {"fingerprint", fingerprint(alg)}, {"range", o.range},
                           {"checked", checked}, {"failures", failures}});
  }
  return out;
}

// Every OPE displayed in the worked examples, as (A, B, pole -> expected).
struct PaperCase {
  const char* a;
  const char* b;
  std::vector<std::pair<int, const char*>> poles;
};

const std::vector<PaperCase>& boson_cases() {
  static const std::vector<PaperCase> cases{
      {"J", "T", {{2, "J"}}},
      {"T", "T", {{4, "1/2"}, {2, "2*T"}, {1, "d T"}}},
  };
  return cases;
}

const std::vector<PaperCase>& fermion_cases() {
  static const std::vector<PaperCase> cases{
      {"psi", "T", {{2, "1/2*psi"}, {1, "-1/2*d psi"}}},
      {"T", "T", {{4, "1/4"}, {2, "2*T"}, {1, "d T"}}},
      {"T", "psi", {{2, "1/2*psi"}, {1, "d psi"}}},
  };
  return cases;
}

const std::vector<PaperCase>& ghost_cases() {
  static const std::vector<PaperCase> cases{
      {"b", "J", {{1, "-b"}}},
      {"c", "J", {{1, "c"}}},
      {"b", "A", {{1, "-d b"}}},
      {"b", "B", {{2, "b"}}},
      {"c", "A", {{2, "c"}}},
      {"c", "B", {{1, "-d c"}}},
      {"J", "J", {{2, "1"}}},
      {"A", "b", {{1, "d b"}}},
      {"B", "b", {{2, "b"}, {1, "d b"}}},
      {"A", "c", {{2, "c"}, {1, "d c"}}},
      {"B", "c", {{1, "d c"}}},
      {"A", "J", {{3, "-1"}, {2, "J"}, {1, "d J"}}},
      {"B", "J", {{3, "1"}, {2, "J"}, {1, "d J"}}},
      {"T", "b", {{2, "L*b"}, {1, "d b"}}},
      {"T", "c", {{2, "(1-L)*c"}, {1, "d c"}}},
      {"T", "J", {{3, "2*L-1"}, {2, "J"}, {1, "d J"}}},
      {"A", "A", {{4, "-1"}, {2, "2*A"}, {1, "d A"}}},
      {"A", "B", {{4, "2"}, {3, "-2*J"}, {2, "2*B"}, {1, "d B"}}},
      {"B", "A", {{4, "2"}, {3, "2*J"}, {2, "2*A"}, {1, "d A"}}},
      {"B", "B", {{4, "-1"}, {2, "2*B"}, {1, "d B"}}},
      {"T", "T", {{4, "-(6*L*L-6*L+1)"}, {2, "2*T"}, {1, "d T"}}},
  };
  return cases;
}

// Central charges and weights stated alongside the tables.
struct PaperClaim {
  const char* kind;  // "c" or "weight"
  const char* field;
  const char* expected;
};

Outcome cmd_paper_examples(const Options& o) {
  expect_args(o, 0, "paper-examples");
  if (!o.preset.empty() || !o.algebra_file.empty() || !o.params.empty())
    throw UsageError("paper-examples takes no algebra options");

  struct Block {
    std::string label;
    AlgebraDef alg;
    const std::vector<PaperCase>* cases;
    std::vector<PaperClaim> claims;
  };
  std::vector<Block> blocks;
  blocks.push_back({"free-boson", load_preset("free-boson"), &boson_cases(), {{"c", "T", "1"}, {"weight", "J", "1"}}});
  blocks.push_back({"free-fermion", load_preset("free-fermion"), &fermion_cases(),
                    {{"c", "T", "1/2"}, {"weight", "psi", "1/2"}}});
  for (const Scalar& lambda : {Scalar(0), Scalar(1, 2), Scalar(1), Scalar(2)}) {
    blocks.push_back({"bc-ghost L=" + to_string(lambda), load_preset("bc-ghost", {{"L", lambda}}), &ghost_cases(),
                      {{"c", "T", "-2*(6*L*L-6*L+1)"}, {"weight", "b", "L"}, {"weight", "c", "1-L"}}});
  }

  Outcome out;
  out.results = Json::array();
  int total = 0, matched = 0;
  for (const auto& block : blocks) {
    Engine eng(block.alg);
    Renderer human(eng), plain(eng, "*");
    for (const auto& pc : *block.cases) {
      SingularPart want;
      for (const auto& [pole, text] : pc.poles) want.set(pole, eng.normal_form(parse_expr(text, block.alg)));
      const SingularPart got =
          contract(eng, eng.normal_form(parse_expr(pc.a, block.alg)), eng.normal_form(parse_expr(pc.b, block.alg)));
      const bool ok = got == want;
      ++total;
      matched += ok;
      out.text += std::string(ok ? "ok    " : "FAIL  ") + block.label + "  " + pc.a + "(z) " + pc.b +
                  "(w): " + human.poles(got) + (ok ? "" : "   expected " + human.poles(want)) + "\n";
      out.results.push_back({{"algebra", block.label}, {"a", pc.a}, {"b", pc.b}, {"expected", pole_json(want, plain)},
                             {"got", pole_json(got, plain)}, {"match", ok}});
    }
    for (const auto& claim : block.claims) {
      const NormalForm want = eng.normal_form(parse_expr(claim.expected, block.alg));
      const NormalForm t = eng.normal_form(parse_expr("T", block.alg));
      const NormalForm f = eng.normal_form(parse_expr(claim.field, block.alg));
      const Classification cls = std::string(claim.kind) == "c" ? check_virasoro(eng, t) : check_primary(eng, t, f);
      const std::optional<Scalar> expected = want.is_zero() ? Scalar(0) : want.coefficient(Monomial{});
      const bool ok = cls.ok() && want.size() <= 1 && (want.is_zero() || want.begin()->first.empty()) &&
                      *cls.value == *expected;
      ++total;
      matched += ok;
      const std::string got = cls.ok() ? to_string(*cls.value) : "none";
      const std::string what = std::string(claim.kind) == "c" ? "c" : std::string("weight of ") + claim.field;
      out.text += std::string(ok ? "ok    " : "FAIL  ") + block.label + "  " + what + " = " + got + "\n";
      out.results.push_back({{"algebra", block.label}, {"claim", what}, {"expected", to_string(*expected)},
                             {"got", cls.ok() ? Json(got) : Json(nullptr)}, {"match", ok}});
    }
  }
  out.text += std::to_string(matched) + "/" + std::to_string(total) + " paper examples match\n";
  if (matched != total) out.status = Status::Fail;
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Operator product expansions of chiral fields", "opecalc"};
  app.require_subcommand(1);
  Options opts;

  using Handler = Outcome (*)(const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, Handler h, bool algebra_flags) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (algebra_flags) {
      auto* preset = sub->add_option("--preset", opts.preset, "built-in algebra")
                         ->check(CLI::IsMember(preset_names()));
      auto* file = sub->add_option("--algebra", opts.algebra_file, "algebra definition file (v1 format)");
      preset->excludes(file);
      sub->add_option("--param", opts.params, "NAME=RATIONAL, repeatable")->allow_extra_args(false);
    }
    sub->add_option("--format", opts.format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("args", opts.args, "expressions and integers");
    commands.emplace_back(sub, h);
    return sub;
  };
  add("ope", "singular part of A(z)B(w)", cmd_ope, true);
  add("nprod", "n-th product A_(n)B", cmd_nprod, true);
  add("check-borcherds", "Borcherds identity residual for A B C p q r", cmd_check_borcherds, true);
  add("check-skew", "skew-symmetry residual for A B m", cmd_check_skew, true);
  add("check-virasoro", "central charge of a Virasoro field", cmd_check_virasoro, true);
  add("check-primary", "conformal weight of a primary field", cmd_check_primary, true);
  CLI::App* fuzz = add("fuzz-identities", "residual sweep over the operand pool", cmd_fuzz, true);
  fuzz->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::Range(1u, 256u));
  fuzz->add_option("--range", opts.range, "parameters run over [-range, range]");
  add("paper-examples", "recompute the worked examples", cmd_paper_examples, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::string command;
  for (const auto& a : args) command += (command.empty() ? "" : " ") + a;

  Outcome result;
  std::string error;
  try {
    for (const auto& [sub, handler] : commands)
      if (sub->parsed()) result = handler(opts);
  } catch (const std::exception& e) {
    result = Outcome{};
    result.status = Status::Error;
    error = e.what();
  }

  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (opts.format == "json") {
    Json doc;
    doc["command"] = command;
    doc["algebra"] = result.algebra ? Json(*result.algebra) : Json(nullptr);
    doc["results"] = result.status == Status::Error ? Json{{"error", error}} : result.results;
    doc["status"] = status_name(result.status);
    doc["ms"] = ms;
    out << doc.dump(2) << "\n";
  } else if (result.status == Status::Error) {
    err << "opecalc: " << error << "\n";
  } else {
    out << result.text;
  }
  return exit_code(result.status);
}

}  // namespace opecalc
