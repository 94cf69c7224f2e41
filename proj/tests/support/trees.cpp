#include "support.hpp"

#include "coind/text.hpp"

namespace coind::testing {

std::shared_ptr<const fo::Signature> mixed_signature() {
  auto sig = std::make_shared<fo::Signature>();
  sig->add("a", 0);
  sig->add("b", 0);
  sig->add("f", 1);
  sig->add("g", 1);
  sig->set_inductive("g", 0);
  sig->add("h", 2);
  sig->set_inductive("h", 0);
  sig->add("k", 2);
  return sig;
}

namespace {

std::vector<std::string> symbols_of_arity(const fo::Signature& sig, std::size_t n) {
  std::vector<std::string> out;
  for (const auto& [name, r] : sig.symbols())
    if (r->arity() == n) out.push_back(name);
  return out;
}

bool has_inductive(const fo::Signature& sig, const std::string& s) {
  auto r = sig.cons(s);
  for (std::size_t i = 0; i < r->arity(); ++i)
    if (!r->coind(i)) return true;
  return false;
}

std::size_t edge_target(Rng& rng, const RulePtr& r, std::size_t p, std::size_t i, std::size_t n) {
  if (r->coind(p)) return pick(rng, n);
  return i + 1 + pick(rng, n - i - 1);
}

}  // namespace

TreeSpec random_tree_spec(Rng& rng, const fo::Signature& sig, std::size_t n) {
  std::vector<std::string> all;
  for (const auto& [name, r] : sig.symbols()) all.push_back(name);
  TreeSpec s;
  s.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string sym = all[pick(rng, all.size())];
    if (i + 1 == n && has_inductive(sig, sym)) sym = coin(rng) ? "a" : "f";
    auto r = sig.cons(sym);
    s.nodes[i].sym = sym;
    for (std::size_t p = 0; p < r->arity(); ++p) s.nodes[i].kids.push_back(edge_target(rng, r, p, i, n));
  }
  return s;
}

TreeSpec mutate(Rng& rng, const fo::Signature& sig, TreeSpec s) {
  std::size_t n = s.nodes.size();
  std::size_t i = pick(rng, n);
  auto& node = s.nodes[i];
  auto r = sig.cons(node.sym);
  if (r->arity() > 0 && coin(rng)) {
    std::size_t p = pick(rng, r->arity());
    if (r->coind(p) || i + 1 < n) node.kids[p] = edge_target(rng, r, p, i, n);
    return s;
  }
  auto same = symbols_of_arity(sig, r->arity());
  std::string sym = same[pick(rng, same.size())];
  auto r2 = sig.cons(sym);
  for (std::size_t p = 0; p < r2->arity(); ++p)
    if (!r2->coind(p) && node.kids[p] <= i) return s;
  node.sym = sym;
  return s;
}

DTree build_tree(const fo::Signature& sig, const TreeSpec& s) {
  TreeBuilder b;
  std::vector<DTree> bs;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) bs.push_back(b.binder(Statement::unit()));
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    std::vector<DTree> kids;
    for (auto k : s.nodes[i].kids) kids.push_back(bs[k]);
    b.bind(bs[i], b.node(sig.cons(s.nodes[i].sym), kids));
  }
  return bs[0];
}

std::string naive_truncation(const DTree& t, std::size_t d) {
  if (d == 0) return "*";
  DTree r = t.resolved();
  std::string out = r.rule()->key();
  auto kids = r.children();
  if (kids.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ", ";
    out += naive_truncation(kids[i], r.rule()->coind(i) ? d - 1 : d);
  }
  return out + ")";
}

// ---- instances ----

std::shared_ptr<fo::System> intro_system() {
  return fo::parse_trs("sig f/1 g/1 a/0 ;\nr1: a -> f(g(a)) ;\nr2: g(f(x)) -> f(x) ;\n");
}

Witness intro_witness(const fo::System& sys) {
  return parse_witness(
      "split@1{ src: a ; seg [r1@[]] lift@0 f(rec V. split@0{ src: g(a) ; steps [r1@[1]] ;"
      " final lift@0 g(split@0{ src: f(g(a)) ; steps [] ; final lift@0 f(V) }) }) ; steps [] ;"
      " final lift@1 f(rec Y. split@1{ src: rec z. g(f(z)) ; steps [r2@[]] ; final lift@1 f(Y) }) }",
      sys.family());
}

std::shared_ptr<fo::System> fo_test_system() {
  return fo::parse_trs(
      "sig f/1 g/1 h/2 a/0 b/0 ;\n"
      "inductive h.1 ;\n"
      "r1: a -> f(g(a)) ;\n"
      "r2: g(f(x)) -> f(x) ;\n"
      "r3: h(x, y) -> h(y, x) ;\n"
      "r4: h(a, x) -> g(x) ;\n"
      "r5: b -> a ;\n");
}

namespace {

DTree random_fo_term(Rng& rng, const fo::Signature& sig, std::size_t depth) {
  static const char* leaves[] = {"a", "b"};
  static const char* inner[] = {"f", "g", "h", "f", "g"};
  if (depth == 0 || coin(rng, 0.25)) return make_node(sig.cons(leaves[pick(rng, 2)]), {});
  std::string s = inner[pick(rng, 5)];
  auto r = sig.cons(s);
  std::vector<DTree> kids;
  for (std::size_t i = 0; i < r->arity(); ++i) kids.push_back(random_fo_term(rng, sig, depth - 1));
  return make_node(r, kids);
}

}  // namespace

std::vector<DTree> fo_sources(Rng& rng, const fo::System& sys, std::size_t n) {
  static const char* regular[] = {
      "rec z. g(f(z))", "f(rec z. g(f(z)))", "rec z. h(a, f(z))", "rec z. f(g(z))",
      "h(b, rec z. g(f(z)))", "rec z. h(rec w. f(w), g(f(z)))", "g(f(a))", "h(a, b)",
  };
  std::vector<DTree> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (coin(rng, 0.4))
      out.push_back(parse_tree(regular[pick(rng, std::size(regular))], sys.family()));
    else
      out.push_back(random_fo_term(rng, sys.signature(), 4));
  }
  return out;
}

namespace {

DTree random_lam(Rng& rng, const lambda::Calculus& calc, std::size_t depth, std::size_t scope) {
  double leaf = depth == 0 ? 1.0 : 0.3;
  if (coin(rng, leaf)) {
    if (scope > 0 && coin(rng, 0.75)) return make_node(lambda::bound_var(pick(rng, scope)), {});
    return make_node(lambda::free_var(coin(rng) ? "f" : "y"), {});
  }
  switch (pick(rng, 4)) {
    case 0: return calc.make_lam(random_lam(rng, calc, depth - 1, scope + 1));
    case 1:
      return calc.make_app(calc.make_lam(random_lam(rng, calc, depth - 1, scope + 1)),
                           random_lam(rng, calc, depth - 1, scope));
    default: return calc.make_app(random_lam(rng, calc, depth - 1, scope), random_lam(rng, calc, depth - 1, scope));
  }
}

}  // namespace

std::vector<DTree> lam_sources(Rng& rng, const lambda::Calculus& calc, std::size_t n) {
  static const char* regular[] = {
      "(\\x. f (x x)) (\\x. f (x x))",
      "\\x. rec L. x L",
      "rec L. f ((\\y. y) L)",
      "rec L. (\\y. f y) L",
      "(\\x. rec L. x ((\\z. z) L)) f",
  };
  std::vector<DTree> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (calc.flags().c && coin(rng, 0.4))
      out.push_back(lambda::parse_lam_term(regular[pick(rng, std::size(regular))], calc));
    else
      out.push_back(random_lam(rng, calc, 4, 0));
  }
  return out;
}

}  // namespace coind::testing
