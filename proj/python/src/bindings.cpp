#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coind/compress.hpp"
#include "coind/fo.hpp"
#include "coind/lambda.hpp"
#include "coind/mumall.hpp"
#include "coind/text.hpp"
#include "coind/witness.hpp"

namespace py = pybind11;
using namespace coind;

namespace {

using Instance = std::shared_ptr<const QInstance>;

/// A rewrite system together with the instance that owns it.
struct System {
  Instance inst;
  const RewriteSystem& sys() const { return inst->system(); }
};

std::vector<std::string> step_strings(const std::vector<Step>& steps) {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(s.str());
  return out;
}

Step step_from(const std::string& text, const DTree& t) {
  Cursor c(text);
  Step st = parse_step(c);
  st.depth = path_depth(t, st.path);
  return st;
}

py::dict observation(const Observation& o) {
  py::dict d;
  d["steps"] = step_strings(o.steps);
  d["certificate"] = o.certificate;
  return d;
}

template <class Cls>
void common(Cls& cls) {
  cls.def("tree", [](const System& s, const std::string& text) { return parse_tree(text, s.sys().family()); },
          py::arg("text"), "Parse a tree in the tree grammar.")
      .def("witness", [](const System& s, const std::string& text) { return parse_witness(text, s.sys().family()); },
           py::arg("text"))
      .def(
          "root_steps",
          [](const System& s, const DTree& t) {
            std::vector<std::pair<std::string, DTree>> out;
            for (auto& [name, r] : s.sys().enumerate(t)) out.emplace_back(name, r);
            return out;
          },
          py::arg("tree"), "Zero steps applicable at the root, as (name, result) pairs.")
      .def(
          "apply", [](const System& s, const DTree& t, const std::string& step) { return apply_step(t, step_from(step, t), s.sys()); },
          py::arg("tree"), py::arg("step"), "Apply a step written `name@[1,2]` (1-based path).")
      .def(
          "validate",
          [](const System& s, const Witness& w, std::size_t depth) {
            std::vector<std::pair<std::string, std::string>> out;
            for (const auto& v : validate_witness(w, s.sys(), depth)) out.emplace_back(v.tag, v.message);
            return out;
          },
          py::arg("witness"), py::arg("depth") = 8, "Violations as (tag, message) pairs; empty when valid.")
      .def(
          "compress", [](const System& s, const Witness& w) { return Engine(s.inst).compress(w); }, py::arg("witness"))
      .def(
          "observe",
          [](const System& s, const Witness& w, std::size_t d, std::size_t fuel) {
            return observation(observe_omega(w, d, s.sys(), fuel));
          },
          py::arg("witness"), py::arg("depth"), py::arg("fuel") = kDefaultFuel);
}

}  // namespace

PYBIND11_MODULE(_coind, m) {
  m.doc() = "Coinductive infinitary rewriting";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<SyntaxError>(m, "ParseError", error.ptr());
  py::register_exception<NonProductive>(m, "NonProductive", error.ptr());

  py::class_<Ordinal>(m, "Ordinal")
      .def(py::init([](const std::string& s) { return Ordinal::parse(s); }))
      .def(py::init([](std::uint64_t n) { return Ordinal::from(n); }))
      .def_static("omega", &Ordinal::omega)
      .def("__str__", &Ordinal::str)
      .def("__repr__", [](const Ordinal& o) { return "Ordinal('" + o.str() + "')"; })
      .def("__eq__", [](const Ordinal& a, const Ordinal& b) { return a == b; })
      .def("__lt__", [](const Ordinal& a, const Ordinal& b) { return a < b; })
      .def("__le__", [](const Ordinal& a, const Ordinal& b) { return a <= b; })
      .def("__add__", &Ordinal::operator+)
      .def("max_succ", &ord_max_succ);

  py::class_<DTree>(m, "Tree")
      .def("__str__", [](const DTree& t) { return print_tree(t); })
      .def("__repr__", [](const DTree& t) { return "Tree(" + print_tree(t, 64) + ")"; })
      .def("truncate", [](const DTree& t, std::size_t d) { return truncate(t, d); }, py::arg("depth"))
      .def("bisimilar", [](const DTree& a, const DTree& b) { return bisimilar(a, b); })
      .def(
          "distance",
          [](const DTree& a, const DTree& b, std::size_t budget) {
            Distance d = tree_distance(a, b, budget);
            return py::make_tuple(d.decided, d.exponent, d.str());
          },
          py::arg("other"), py::arg("budget") = 16, "(decided, exponent, text); the distance is 2^-exponent.")
      .def("state_count", [](const DTree& t) { return state_count(t); })
      .def("subtree", [](const DTree& t, const std::vector<std::size_t>& path) { return subtree_at(t, path); })
      .def_property_readonly("rule", [](const DTree& t) { return t.resolved().rule()->key(); });

  py::class_<Witness>(m, "Witness")
      .def("__str__", [](const Witness& w) { return print_witness(w); })
      .def_property_readonly("ordinal", &Witness::ordinal)
      .def_property_readonly("source", [](const Witness& w) { return witness_source(w); })
      .def("target", [](const Witness& w, std::size_t d) { return target_truncation(w, d); }, py::arg("depth"))
      .def("state_count", [](const Witness& w) { return witness_state_count(w); })
      .def("bisimilar", [](const Witness& a, const Witness& b) { return witness_bisimilar(a, b); });

  py::class_<System> sys(m, "System");
  common(sys);

  m.def(
      "fo_system", [](const std::string& text) { return System{fo::parse_trs(text)}; }, py::arg("text"),
      "First-order system from `.trs` text.");
  m.def(
      "lambda_calculus",
      [](const std::string& flags) { return System{std::make_shared<lambda::Calculus>(lambda::Flags::parse(flags))}; },
      py::arg("flags") = "001");
  m.def("mumall_system", [] { return System{std::make_shared<mumall::System>()}; });

  auto lam = m.def_submodule("lam", "abc-lambda calculi");
  lam.def(
      "parse",
      [](const System& s, const std::string& text) {
        auto* calc = dynamic_cast<const lambda::Calculus*>(&s.sys());
        if (!calc) throw DomainError("not a lambda calculus");
        return lambda::parse_lam_term(text, *calc);
      },
      py::arg("calculus"), py::arg("text"));
  lam.def("show", &lambda::print_lam, py::arg("term"));
  lam.def(
      "standard", [](const Witness& w) { return lambda::print_standard(lambda::to_standard_form(w)); },
      py::arg("witness"), "Standard presentation of an omega-witness.");
  lam.def(
      "round_trip", [](const Witness& w) { return lambda::from_standard_form(lambda::to_standard_form(w)); },
      py::arg("witness"));

  auto mu = m.def_submodule("mumall", "muMALL pre-proofs");
  mu.def("neg", [](const std::string& f) { return mumall::neg(mumall::parse_formula(f)).str(); }, py::arg("formula"));
  mu.def("formula", [](const std::string& f) { return mumall::parse_formula(f).str(); }, py::arg("formula"));
  mu.def("proof", &mumall::parse_proof, py::arg("text"));
  mu.def(
      "check", [](const std::string& text) { return mumall::check_proof(text).violations; }, py::arg("text"),
      "Multicut side-condition violations of a pre-proof.");
  mu.def(
      "conclusion", [](const DTree& p) { return mumall::sequent_str(mumall::sequent_of(p.statement())); },
      py::arg("proof"));
  mu.def(
      "steps",
      [](const DTree& p) {
        std::vector<std::string> out;
        for (const auto& s : mumall::applicable_root_steps(p)) out.push_back(s.name());
        return out;
      },
      py::arg("proof"));
  mu.def(
      "cut_elim",
      [](const DTree& p, std::size_t d, std::size_t fuel) {
        auto r = mumall::cut_elim_observe(p, d, fuel);
        py::dict out;
        out["steps"] = step_strings(r.steps);
        out["truncation"] = r.truncation;
        out["stuck"] = r.stuck ? py::cast(r.stuck->reason) : py::none();
        return out;
      },
      py::arg("proof"), py::arg("depth"), py::arg("fuel") = 10000);
}
