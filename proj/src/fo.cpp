#include "coind/fo.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <unordered_set>

#include "coind/text.hpp"

namespace coind::fo {

namespace {

struct THash {
  std::size_t operator()(const TreeHandle& h) const { return std::hash<const void*>()(h.slot); }
};
struct TEq {
  bool operator()(const TreeHandle& a, const TreeHandle& b) const { return a.slot == b.slot; }
};

using TreeCorec = graph::Corec<TreeNode, TreeHandle, THash, TEq>;
using WitCorec = graph::Corec<WNode, TreeHandle, THash, TEq>;

}  // namespace

void Signature::add(const std::string& name, std::size_t arity) {
  if (syms_.count(name)) throw DomainError("symbol " + name + " declared twice");
  syms_[name] = std::make_shared<UnitRule>(name, arity, std::vector<bool>(arity, true));
}

void Signature::set_inductive(const std::string& name, std::size_t i) {
  auto it = syms_.find(name);
  if (it == syms_.end()) throw DomainError("unknown symbol " + name);
  auto flags = it->second->coind_flags();
  if (i >= flags.size()) throw DomainError(name + " has no premiss " + std::to_string(i + 1));
  flags[i] = false;
  it->second = std::make_shared<UnitRule>(name, flags.size(), flags);
}

std::size_t Signature::arity(const std::string& name) const { return cons(name)->arity(); }

RulePtr Signature::cons(const std::string& name) const {
  auto it = syms_.find(name);
  if (it == syms_.end()) throw DomainError("unknown symbol " + name);
  return it->second;
}

RulePtr var_rule(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, RulePtr> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& r = cache[name];
  if (!r) r = std::make_shared<VarRule>(name);
  return r;
}

std::optional<std::string> as_var(const DTree& t) {
  const RulePtr& r = t.rule();
  if (dynamic_cast<const VarRule*>(r.get())) return r->key();
  return std::nullopt;
}

RulePtr Family::make_rule(const std::string& name, const std::string& params, const std::string& paren,
                          std::size_t nkids) const {
  if (!params.empty() || !paren.empty()) throw DomainError("first-order symbols take no parameters: " + name);
  if (sig_->has(name)) {
    RulePtr r = sig_->cons(name);
    if (r->arity() != nkids)
      throw DomainError(name + " has arity " + std::to_string(r->arity()) + ", got " + std::to_string(nkids));
    return r;
  }
  if (nkids != 0) throw DomainError("unknown function symbol " + name);
  return var_rule(name);
}

DTree subst_apply(const Substitution& s, const DTree& t) {
  if (s.empty()) return t;
  auto arena = TreeArena::create();
  auto cell = std::make_shared<TreeCorec*>(nullptr);
  TreeCorec** pc = cell.get();
  TreeArena* a = arena.get();
  auto sub = std::make_shared<Substitution>(s);
  arena->keep(sub);
  const Substitution* sp = sub.get();
  TreeCorec* c = TreeCorec::create(arena, [pc, a, sp](const TreeHandle& h) {
    DTree r = DTree(h).resolved();
    if (auto v = as_var(r)) {
      auto it = sp->find(*v);
      if (it != sp->end()) return graph::Content<TreeNode>::to(a->ref(it->second.handle()));
    }
    std::vector<TreeRef> ks;
    for (const auto& k : r.children()) ks.push_back((*pc)->ref(k.handle(), Statement::unit()));
    return graph::Content<TreeNode>::node(r.node(), std::move(ks));
  });
  *cell = c;
  arena->keep(cell);
  return DTree(c->get(t.handle(), Statement::unit()));
}

bool check_left_linear(const DTree& l) {
  std::function<bool(const DTree&, std::set<std::string>&)> rec = [&](const DTree& t, std::set<std::string>& s) {
    DTree r = t.resolved();
    if (auto v = as_var(r)) return s.insert(*v).second;
    for (const auto& k : r.children())
      if (!rec(k, s)) return false;
    return true;
  };
  finite_size(l);
  std::set<std::string> s;
  return rec(l, s);
}

std::vector<std::string> variables(const DTree& t, std::size_t budget) {
  auto g = graph::explore(t.handle(), budget);
  if (!g.complete) throw NotRegular("term exceeds its exploration budget");
  std::set<std::string> vs;
  for (const auto& h : g.nodes)
    if (auto v = as_var(DTree(h))) vs.insert(*v);
  return {vs.begin(), vs.end()};
}

std::optional<Substitution> match_lhs(const DTree& l, const DTree& t) {
  if (!check_left_linear(l)) throw NotLinear("left-hand side " + print_tree(l) + " is not linear");
  Substitution s;
  std::function<bool(const DTree&, const DTree&)> rec = [&](const DTree& p, const DTree& x) {
    DTree pr = p.resolved();
    if (auto v = as_var(pr)) {
      s[*v] = x;
      return true;
    }
    DTree xr = x.resolved();
    if (!same_rule(pr.rule(), xr.rule())) return false;
    auto pk = pr.children();
    auto xk = xr.children();
    for (std::size_t i = 0; i < pk.size(); ++i)
      if (!rec(pk[i], xk[i])) return false;
    return true;
  };
  if (!rec(l, t)) return std::nullopt;
  return s;
}

namespace {

Pattern to_pattern(const DTree& l, std::vector<std::string>& holes) {
  DTree r = l.resolved();
  if (auto v = as_var(r)) {
    holes.push_back(*v);
    return Pattern::make_hole(holes.size() - 1);
  }
  std::vector<Pattern> kids;
  for (const auto& k : r.children()) kids.push_back(to_pattern(k, holes));
  return Pattern::node(r.rule(), std::move(kids));
}

}  // namespace

System::System(std::shared_ptr<const Signature> sig) : sig_(sig), fam_(sig) {}

void System::add_rule(const std::string& name, const DTree& lhs, const DTree& rhs) {
  for (const auto& r : rules_)
    if (r.name == name) throw DomainError("rule " + name + " defined twice");
  try {
    finite_size(lhs);
  } catch (const NotRegular&) {
    throw DomainError("rule " + name + ": left-hand side must be finite");
  }
  if (as_var(lhs)) throw DomainError("rule " + name + ": left-hand side is a variable");
  if (!check_left_linear(lhs)) throw NotLinear("rule " + name + ": left-hand side is not linear");
  auto lv = variables(lhs);
  for (const auto& v : variables(rhs))
    if (std::find(lv.begin(), lv.end(), v) == lv.end())
      throw DomainError("rule " + name + ": variable " + v + " of the right-hand side is not bound on the left");
  Rule r{name, lhs, rhs, {}, {}};
  r.lhs_pattern = to_pattern(lhs, r.holes);
  rules_.push_back(std::move(r));
}

const Rule& System::rule(const std::string& name) const {
  for (const auto& r : rules_)
    if (r.name == name) return r;
  throw StepNotApplicable("no rule named " + name);
}

std::vector<std::pair<std::string, DTree>> System::enumerate(const DTree& t) const {
  std::vector<std::pair<std::string, DTree>> out;
  for (const auto& r : rules_) {
    auto m = pattern_match(r.lhs_pattern, t);
    if (!m) continue;
    Substitution s;
    for (std::size_t i = 0; i < r.holes.size(); ++i) s[r.holes[i]] = (*m)[i];
    out.emplace_back(r.name, subst_apply(s, r.rhs));
  }
  return out;
}

DTree System::apply(const std::string& name, const DTree& t) const {
  const Rule& r = rule(name);
  auto m = pattern_match(r.lhs_pattern, t);
  if (!m) throw StepNotApplicable(name + " does not match " + print_tree(truncate(t, 2)));
  Substitution s;
  for (std::size_t i = 0; i < r.holes.size(); ++i) s[r.holes[i]] = (*m)[i];
  return subst_apply(s, r.rhs);
}

Witness pattern_fill(const DTree& r, const std::map<std::string, Witness>& var_witnesses, const Ordinal& d) {
  for (const auto& v : variables(r))
    if (!var_witnesses.count(v)) throw MissingVariableWitness("no witness for variable " + v);
  Substitution tau;
  for (const auto& [x, w] : var_witnesses) tau[x] = witness_source(w);
  auto arena = WArena::create();
  struct State {
    std::map<std::string, Witness> ws;
    Substitution tau;
  };
  auto st = std::make_shared<State>(State{var_witnesses, tau});
  arena->keep(st);
  auto cell = std::make_shared<WitCorec*>(nullptr);
  WitCorec** pc = cell.get();
  WArena* a = arena.get();
  const State* sp = st.get();
  Ordinal ord = d;
  WitCorec* c = WitCorec::create(arena, [pc, a, sp, ord](const TreeHandle& h) {
    DTree x = DTree(h).resolved();
    if (auto v = as_var(x)) return graph::Content<WNode>::to(a->ref(sp->ws.at(*v).handle()));
    WNode lift;
    lift.kind = WKind::Lift;
    lift.ord = ord;
    lift.rule = x.rule();
    std::vector<WRef> ks;
    for (const auto& k : x.children()) ks.push_back((*pc)->ref(k.handle(), Statement::unit()));
    const auto* ls = a->filled(std::move(lift), std::move(ks), Statement::unit());
    WNode split;
    split.kind = WKind::Split;
    split.ord = ord;
    split.src = subst_apply(sp->tau, DTree(h));
    return graph::Content<WNode>::node(std::move(split), {a->local(ls)});
  });
  *cell = c;
  arena->keep(cell);
  return Witness(c->get(r.handle(), Statement::unit()));
}

QResult System::root_q(const Witness& w, const Step& st, Engine& e) const {
  const Rule& r = rule(st.name);
  Engine::Extracted ex = e.pattern_extract(w, r.lhs_pattern);
  std::map<std::string, Witness> ws;
  for (std::size_t i = 0; i < r.holes.size(); ++i) ws[r.holes[i]] = ex.holes[i];
  QResult out;
  out.prefix = std::move(ex.prefix);
  out.prefix.push_back(Step{{}, st.name, 0});
  out.w = pattern_fill(r.rhs, ws, w.ordinal());
  return out;
}

std::shared_ptr<System> parse_trs(std::string_view text) {
  Cursor c(text);
  auto sig = std::make_shared<Signature>();
  struct Pending {
    std::string name;
    std::size_t pos;
  };
  std::vector<std::pair<std::string, std::size_t>> inductive;
  std::vector<Pending> rules;
  // Declarations first; rule bodies are parsed once the signature is complete.
  std::size_t auto_name = 0;
  while (!c.at_end()) {
    if (c.accept_word("sig")) {
      while (!c.accept(";")) {
        std::string n = c.ident();
        c.expect("/");
        try {
          sig->add(n, std::stoul(c.number()));
        } catch (const DomainError& e) {
          c.fail(e.what());
        }
        if (c.at_end()) c.fail("expected ';' after the signature");
      }
    } else if (c.accept_word("inductive")) {
      while (!c.accept(";")) {
        std::string n = c.ident();
        c.expect(".");
        std::size_t i = std::stoul(c.number());
        if (i == 0) c.fail("premiss indices are 1-based");
        inductive.emplace_back(n, i - 1);
        c.accept(",");
        if (c.at_end()) c.fail("expected ';'");
      }
    } else {
      std::size_t mark = c.pos();
      std::string name;
      if (c.at_ident()) {
        std::string id = c.ident();
        if (c.accept(":"))
          name = id;
        else
          c.reset(mark);
      }
      if (name.empty()) name = "r" + std::to_string(++auto_name);
      c.skip_ws();
      rules.push_back(Pending{name, c.pos()});
      c.until(";");
      if (!c.accept(";")) c.fail("expected ';' after a rule");
    }
  }
  for (const auto& [n, i] : inductive) {
    try {
      sig->set_inductive(n, i);
    } catch (const DomainError& e) {
      c.fail(e.what());
    }
  }
  auto sys = std::make_shared<System>(sig);
  for (const auto& p : rules) {
    c.reset(p.pos);
    TreeBuilder b;
    DTree l = parse_tree(c, sys->family(), b);
    c.expect("->");
    DTree r = parse_tree(c, sys->family(), b);
    c.expect(";");
    try {
      sys->add_rule(p.name, l, r);
    } catch (const Error& e) {
      c.fail(e.what());
    }
  }
  return sys;
}

}  // namespace coind::fo
