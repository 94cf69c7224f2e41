#include "coind/lambda.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "coind/text.hpp"

namespace coind::lambda {

Flags Flags::parse(std::string_view bits) {
  std::string s = trim(bits);
  if (s.size() != 3 || s.find_first_not_of("01") != std::string::npos)
    throw DomainError("flags must be three binary digits, got '" + s + "'");
  return Flags{s[0] == '1', s[1] == '1', s[2] == '1'};
}

std::string Flags::str() const {
  return std::string(1, a ? '1' : '0') + (b ? '1' : '0') + (c ? '1' : '0');
}

namespace {

class BoundRule : public UnitRule {
 public:
  BoundRule(std::size_t k) : UnitRule("%" + std::to_string(k), 0, {}), k_(k) {}
  std::size_t index() const { return k_; }

 private:
  std::size_t k_;
};

class FreeRule : public UnitRule {
 public:
  explicit FreeRule(const std::string& name) : UnitRule(name, 0, {}) {}
};

bool reserved_name(const std::string& n) { return n == "lam" || n == "app" || n == "rec" || n == "flags"; }

}  // namespace

Family::Family(Flags f)
    : flags_(f),
      lam_(std::make_shared<UnitRule>("lam", 1, std::vector<bool>{f.a})),
      app_(std::make_shared<UnitRule>("app", 2, std::vector<bool>{f.b, f.c})) {}

RulePtr Family::make_rule(const std::string& name, const std::string& params, const std::string& paren,
                          std::size_t nkids) const {
  if (!params.empty() || !paren.empty()) throw DomainError("lambda terms take no rule parameters: " + name);
  if (name == "lam" || name == "app") {
    std::size_t want = name == "lam" ? 1 : 2;
    if (nkids != want) throw DomainError(name + " takes " + std::to_string(want) + " premisses");
    return name == "lam" ? lam_ : app_;
  }
  if (nkids != 0) throw DomainError("unknown constructor " + name);
  if (name.size() > 1 && name[0] == '%' && name.find_first_not_of("0123456789", 1) == std::string::npos)
    return bound_var(std::stoul(name.substr(1)));
  if (name[0] == '%') throw DomainError("bad de Bruijn index " + name);
  return free_var(name);
}

RulePtr bound_var(std::size_t k) {
  static std::mutex mu;
  static std::vector<RulePtr> cache;
  std::lock_guard<std::mutex> lk(mu);
  while (cache.size() <= k) cache.push_back(std::make_shared<BoundRule>(cache.size()));
  return cache[k];
}

RulePtr free_var(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, RulePtr> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& r = cache[name];
  if (!r) r = std::make_shared<FreeRule>(name);
  return r;
}

NodeKind kind_of(const RulePtr& r) {
  if (r->is_trunc()) return NodeKind::Trunc;
  if (dynamic_cast<const BoundRule*>(r.get())) return NodeKind::Bound;
  if (dynamic_cast<const FreeRule*>(r.get())) return NodeKind::Free;
  if (r->key() == "lam" && r->arity() == 1) return NodeKind::Lam;
  if (r->key() == "app" && r->arity() == 2) return NodeKind::App;
  throw DomainError("not a lambda-term rule: " + r->key());
}

std::size_t index_of(const RulePtr& r) {
  auto* b = dynamic_cast<const BoundRule*>(r.get());
  if (!b) throw InternalInvariant(r->key() + " is not a bound variable");
  return b->index();
}

namespace {

using LB = std::unordered_map<const void*, std::size_t>;

/// Loose bounds of every explored node; empty when the graph is too large.
void loose_bounds(const DTree& t, std::size_t budget, LB& out) {
  auto g = graph::explore(t.handle(), budget);
  if (!g.complete) return;
  std::vector<std::size_t> lb(g.nodes.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = g.nodes.size(); i-- > 0;) {
      const RulePtr& r = graph::payload(g.nodes[i]).rule;
      std::size_t v = 0;
      switch (kind_of(r)) {
        case NodeKind::Bound: v = index_of(r) + 1; break;
        case NodeKind::Lam: v = lb[g.kids[i][0]] > 0 ? lb[g.kids[i][0]] - 1 : 0; break;
        case NodeKind::App: v = std::max(lb[g.kids[i][0]], lb[g.kids[i][1]]); break;
        default: break;
      }
      if (v > lb[i]) {
        lb[i] = v;
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) out.emplace(g.nodes[i].slot, lb[i]);
}

constexpr std::size_t kShortcutBudget = 1u << 12;

struct TKey {
  TreeHandle h;
  std::size_t a;
  std::size_t b;
  int tag;  // 0: subst at index a; 1: shift by a above cutoff b
};
struct TKeyHash {
  std::size_t operator()(const TKey& k) const {
    std::size_t x = std::hash<const void*>()(k.h.slot);
    x = x * 1000003u ^ k.a;
    x = x * 1000003u ^ k.b;
    return x * 31u + static_cast<std::size_t>(k.tag);
  }
};
struct TKeyEq {
  bool operator()(const TKey& x, const TKey& y) const {
    return x.h.slot == y.h.slot && x.a == y.a && x.b == y.b && x.tag == y.tag;
  }
};
using TCorec = graph::Corec<TreeNode, TKey, TKeyHash, TKeyEq>;

struct WKey {
  WHandle h;
  std::size_t a;
  std::size_t b;
  int tag;  // 0 fill, 1 fill hat, 2 subst, 3 subst hat (index a); 4 shift, 5 shift hat (by a above b)
};
struct WKeyHash {
  std::size_t operator()(const WKey& k) const {
    std::size_t x = std::hash<const void*>()(k.h.slot);
    x = x * 1000003u ^ k.a;
    x = x * 1000003u ^ k.b;
    return x * 31u + static_cast<std::size_t>(k.tag);
  }
};
struct WKeyEq {
  bool operator()(const WKey& x, const WKey& y) const {
    return x.h.slot == y.h.slot && x.a == y.a && x.b == y.b && x.tag == y.tag;
  }
};
using WCorec = graph::Corec<WNode, WKey, WKeyHash, WKeyEq>;

/// Substitution of one fixed term v for indices, on trees and on witnesses.
/// Owned by its tree arena; the witness arena keeps the tree arena alive.
struct Ops {
  TreeArena* ta = nullptr;
  TCorec* tc = nullptr;
  WArena* wa = nullptr;
  WCorec* wc = nullptr;
  DTree v;
  Witness vhat;
  LB lb;

  std::optional<std::size_t> bound(const TreeHandle& resolved) const {
    auto it = lb.find(resolved.slot);
    if (it == lb.end()) return std::nullopt;
    return it->second;
  }

  TreeRef tsubst(const DTree& t, std::size_t k) { return tc->ref(TKey{t.handle(), k, 0, 0}, Statement::unit()); }
  TreeRef tshift(const DTree& t, std::size_t n, std::size_t c) {
    if (n == 0) return ta->ref(t.handle());
    return tc->ref(TKey{t.handle(), n, c, 1}, Statement::unit());
  }
  DTree tree(const TreeRef& r) { return DTree(graph::rebase(ta->handle(nullptr), r)); }

  graph::Content<TreeNode> gen_tree(const TKey& key) {
    DTree t = DTree(key.h).resolved();
    const RulePtr& r = t.rule();
    auto keep = [&]() { return graph::Content<TreeNode>::to(ta->ref(t.handle())); };
    auto leaf = [&](RulePtr nr) { return graph::Content<TreeNode>::node(TreeNode{std::move(nr), Statement::unit()}, {}); };
    if (key.tag == 0) {
      std::size_t k = key.a;
      if (auto b = bound(t.handle()); b && *b <= k) return keep();
      switch (kind_of(r)) {
        case NodeKind::Bound: {
          std::size_t j = index_of(r);
          if (j == k) return graph::Content<TreeNode>::to(tshift(v, k, 0));
          if (j > k) return leaf(bound_var(j - 1));
          return keep();
        }
        case NodeKind::Lam:
          return graph::Content<TreeNode>::node(t.node(), {tsubst(t.child(0), k + 1)});
        case NodeKind::App:
          return graph::Content<TreeNode>::node(t.node(), {tsubst(t.child(0), k), tsubst(t.child(1), k)});
        default:
          return keep();
      }
    }
    std::size_t n = key.a, c = key.b;
    if (auto b = bound(t.handle()); b && *b <= c) return keep();
    switch (kind_of(r)) {
      case NodeKind::Bound: {
        std::size_t j = index_of(r);
        return j >= c ? leaf(bound_var(j + n)) : keep();
      }
      case NodeKind::Lam:
        return graph::Content<TreeNode>::node(t.node(), {tshift(t.child(0), n, c + 1)});
      case NodeKind::App:
        return graph::Content<TreeNode>::node(t.node(), {tshift(t.child(0), n, c), tshift(t.child(1), n, c)});
      default:
        return keep();
    }
  }

  WRef wref(const Witness& w, std::size_t a, std::size_t b, int tag) {
    return wc->ref(WKey{w.handle(), a, b, tag}, Statement::unit());
  }
  WRef wshift_hat(const Witness& h, std::size_t n, std::size_t c) {
    if (n == 0) return wa->ref(h.handle());
    return wref(h, n, c, 5);
  }

  graph::Content<WNode> gen_wit(const WKey& key) {
    Witness W = Witness(key.h).resolved();
    const WNode& n = W.node();
    auto kids = W.kids();
    if (key.tag == 0 || key.tag == 2 || key.tag == 4) {
      if (n.kind != WKind::Split) throw InternalInvariant("full witness expected, found a lift");
      WNode out;
      out.kind = WKind::Split;
      out.ord = n.ord;
      out.seg_steps = n.seg_steps;
      out.trail = n.trail;
      std::vector<WRef> ks;
      std::size_t m = n.seg_steps.size();
      if (key.tag == 4) {
        out.src = tree(tshift(n.src, key.a, key.b));
        for (std::size_t i = 0; i <= m; ++i) ks.push_back(wref(kids[i], key.a, key.b, 5));
      } else {
        out.src = tree(tsubst(n.src, key.a));
        for (std::size_t i = 0; i < m; ++i) ks.push_back(wref(kids[i], key.a, 0, 3));
        ks.push_back(wref(kids[m], key.a, 0, key.tag == 0 ? 1 : 3));
      }
      return graph::Content<WNode>::node(std::move(out), std::move(ks));
    }
    if (n.kind != WKind::Lift) throw InternalInvariant("hat expected, found a split");
    auto keep = [&]() { return graph::Content<WNode>::to(wa->ref(W.handle())); };
    auto relabel = [&](RulePtr r) {
      WNode out = n;
      out.rule = std::move(r);
      return graph::Content<WNode>::node(std::move(out), {});
    };
    auto rebuild = [&](std::vector<WRef> ks) { return graph::Content<WNode>::node(n, std::move(ks)); };
    NodeKind kk = kind_of(n.rule);
    if (key.tag == 5) {
      std::size_t sh = key.a, c = key.b;
      switch (kk) {
        case NodeKind::Bound: {
          std::size_t j = index_of(n.rule);
          return j >= c ? relabel(bound_var(j + sh)) : keep();
        }
        case NodeKind::Lam: return rebuild({wref(kids[0], sh, c + 1, 4)});
        case NodeKind::App: return rebuild({wref(kids[0], sh, c, 4), wref(kids[1], sh, c, 4)});
        default: return keep();
      }
    }
    std::size_t k = key.a;
    int full = key.tag == 1 ? 0 : 2;
    switch (kk) {
      case NodeKind::Bound: {
        std::size_t j = index_of(n.rule);
        if (j == k) {
          if (key.tag == 1) return graph::Content<WNode>::to(wshift_hat(vhat, k, 0));
          Witness r = refl_hat(tree(tshift(v, k, 0)), n.ord);
          return graph::Content<WNode>::to(wa->ref(r.handle()));
        }
        return j > k ? relabel(bound_var(j - 1)) : keep();
      }
      case NodeKind::Lam: return rebuild({wref(kids[0], k + 1, 0, full)});
      case NodeKind::App: return rebuild({wref(kids[0], k, 0, full), wref(kids[1], k, 0, full)});
      default: return keep();
    }
  }
};

/// Fresh context owned by its tree arena; the witness arena, when requested,
/// keeps the tree arena alive.
Ops* make_ops(const DTree& v, const Witness& vhat, std::shared_ptr<TreeArena>& tarena,
              std::shared_ptr<WArena>* warena_out) {
  tarena = TreeArena::create();
  auto ops = std::make_shared<Ops>();
  Ops* o = ops.get();
  tarena->keep(ops);
  o->ta = tarena.get();
  o->v = v;
  o->vhat = vhat;
  o->tc = TCorec::create(tarena, [o](const TKey& k) { return o->gen_tree(k); });
  if (warena_out) {
    auto warena = WArena::create();
    warena->keep(tarena);
    o->wa = warena.get();
    o->wc = WCorec::create(warena, [o](const WKey& k) { return o->gen_wit(k); });
    *warena_out = warena;
  }
  return o;
}

}  // namespace

std::optional<std::size_t> loose_bound(const DTree& t, std::size_t budget) {
  LB lb;
  loose_bounds(t, budget, lb);
  auto it = lb.find(t.resolved().handle().slot);
  if (it == lb.end()) return std::nullopt;
  return it->second;
}

DTree subst(const DTree& body, const DTree& v) {
  std::shared_ptr<TreeArena> ta;
  Ops* o = make_ops(v, Witness(), ta, nullptr);
  loose_bounds(body, kShortcutBudget, o->lb);
  loose_bounds(v, kShortcutBudget, o->lb);
  return DTree(o->tc->get(TKey{body.handle(), 0, 0, 0}, Statement::unit()));
}

DTree shift(const DTree& t, std::size_t n, std::size_t cutoff) {
  if (n == 0) return t;
  std::shared_ptr<TreeArena> ta;
  Ops* o = make_ops(DTree(), Witness(), ta, nullptr);
  loose_bounds(t, kShortcutBudget, o->lb);
  return DTree(o->tc->get(TKey{t.handle(), n, cutoff, 1}, Statement::unit()));
}

DTree Calculus::make_lam(const DTree& body) const { return make_node(fam_.lam(), {body}); }
DTree Calculus::make_app(const DTree& f, const DTree& x) const { return make_node(fam_.app(), {f, x}); }

DTree Calculus::beta(const DTree& t) const {
  DTree r = t.resolved();
  if (kind_of(r.rule()) == NodeKind::App) {
    DTree f = r.child(0).resolved();
    if (kind_of(f.rule()) == NodeKind::Lam) return subst(f.child(0), r.child(1));
  }
  throw NotARedex(print_tree(truncate(t, 2)) + " is not a beta-redex");
}

std::vector<std::pair<std::string, DTree>> Calculus::enumerate(const DTree& t) const {
  try {
    return {{"beta", beta(t)}};
  } catch (const NotARedex&) {
    return {};
  }
}

DTree Calculus::apply(const std::string& name, const DTree& t) const {
  if (name != "beta") throw StepNotApplicable("the lambda calculus has only the step beta, not " + name);
  try {
    return beta(t);
  } catch (const NotARedex& e) {
    throw StepNotApplicable(e.what());
  }
}

Calculus::Extracted Calculus::pattern_extract(const Witness& w, Engine& e) const {
  Pattern p = Pattern::node(fam_.app(), {Pattern::node(fam_.lam(), {Pattern::make_hole(0)}), Pattern::make_hole(1)});
  Engine::Extracted ex = e.pattern_extract(w, p);
  HatResult a = e.prepone_zero_steps(ex.holes[1]);
  Extracted out;
  out.prefix = std::move(ex.prefix);
  auto lifted = lift_steps(a.prefix, 1, fam_.flags().c);
  out.prefix.insert(out.prefix.end(), lifted.begin(), lifted.end());
  out.body = ex.holes[0];
  out.arg = a.hat;
  out.arg_source = witness_source(a.hat);
  return out;
}

Witness Calculus::pattern_fill(const Witness& body, const Witness& arg, const DTree& arg_source) const {
  std::shared_ptr<TreeArena> ta;
  std::shared_ptr<WArena> wa;
  Ops* o = make_ops(arg_source, arg, ta, &wa);
  loose_bounds(arg_source, kShortcutBudget, o->lb);
  return Witness(o->wc->get(WKey{body.handle(), 0, 0, 0}, Statement::unit()));
}

QResult Calculus::root_q(const Witness& w, const Step& st, Engine& e) const {
  if (st.name != "beta") throw StepNotApplicable("the lambda calculus has only the step beta, not " + st.name);
  Extracted ex = pattern_extract(w, e);
  QResult out;
  out.prefix = std::move(ex.prefix);
  out.prefix.push_back(Step{{}, "beta", 0});
  out.w = pattern_fill(ex.body, ex.arg, ex.arg_source);
  return out;
}

// ---- surface syntax ----

namespace {

struct Scope {
  std::string name;
  bool label = false;
  std::size_t depth = 0;  // binders enclosing the entry
  DTree binder;
  bool refers_out = false;  // rec body mentions a binder outside the rec
  bool deeper_edge = false;  // a back edge sits under extra binders
};

class LamParser {
 public:
  LamParser(Cursor& c, const Calculus& calc) : c_(c), calc_(calc) {}

  DTree term() {
    c_.skip_ws();
    if (lambda_start()) {
      std::vector<std::string> names;
      while (!c_.accept(".")) {
        if (!c_.at_ident()) c_.fail("expected a bound variable or '.'");
        names.push_back(name());
      }
      if (names.empty()) c_.fail("lambda binds no variable");
      for (const auto& n : names) {
        scope_.push_back(Scope{n, false, depth_++, {}, false, false});
      }
      DTree body = term();
      for (std::size_t i = 0; i < names.size(); ++i) {
        scope_.pop_back();
        --depth_;
        body = b_.node(calc_.fam().lam(), {body});
      }
      return body;
    }
    if (c_.accept_word("rec")) return rec();
    return application();
  }

 private:
  bool lambda_start() {
    if (c_.accept("\\")) return true;
    return c_.accept("\xCE\xBB");  // UTF-8 lambda
  }

  std::string name() {
    auto [line, col] = c_.line_col();
    std::string n = c_.ident();
    if (reserved_name(n)) throw SyntaxError("reserved word " + n + " used as a variable", line, col);
    return n;
  }

  DTree rec() {
    auto [line, col] = c_.line_col();
    std::string l = name();
    c_.expect(".");
    DTree binder = b_.binder(Statement::unit());
    scope_.push_back(Scope{l, true, depth_, binder, false, false});
    std::size_t mark = scope_.size() - 1;
    DTree body = term();
    Scope s = scope_[mark];
    scope_.pop_back();
    if (body.handle().slot == binder.handle().slot)
      throw SyntaxError("rec " + l + " is its own body", line, col);
    if (s.refers_out && s.deeper_edge)
      throw SyntaxError("rec " + l + " re-enters its body under extra binders while mentioning an outer variable",
                        line, col);
    b_.bind(binder, body);
    return binder;
  }

  bool atom_start() {
    c_.skip_ws();
    if (c_.at_end()) return false;
    char ch = c_.peek();
    if (ch == '(' || ch == '*' || ch == '\\') return true;
    if (c_.rest().substr(0, 2) == "\xCE\xBB") return true;
    if (!c_.at_ident()) return false;
    std::size_t p = c_.pos();
    std::string id = c_.ident();
    c_.reset(p);
    return id != "flags";
  }

  DTree application() {
    DTree f = atom();
    while (atom_start()) {
      c_.skip_ws();
      bool open_ended = c_.peek() == '\\' || c_.rest().substr(0, 2) == "\xCE\xBB";
      std::size_t p = c_.pos();
      if (!open_ended && c_.at_ident()) {
        open_ended = c_.ident() == "rec";
        c_.reset(p);
      }
      DTree x = open_ended ? term() : atom();
      f = b_.node(calc_.fam().app(), {f, x});
    }
    return f;
  }

  DTree atom() {
    c_.skip_ws();
    if (c_.accept("(")) {
      DTree t = term();
      c_.expect(")");
      return t;
    }
    if (c_.accept("*")) return b_.trunc(Statement::unit());
    if (!c_.at_ident()) {
      if (c_.at_end()) c_.fail("unexpected end of input");
      c_.fail("expected a term");
    }
    auto [line, col] = c_.line_col();
    std::string n = c_.ident();
    if (n == "rec") c_.fail("rec needs parentheses in argument position");
    if (reserved_name(n)) throw SyntaxError("reserved word " + n + " used as a variable", line, col);
    if (n[0] == '%') {
      if (n.size() < 2 || n.find_first_not_of("0123456789", 1) != std::string::npos)
        throw SyntaxError("bad de Bruijn index " + n, line, col);
      std::size_t j = std::stoul(n.substr(1));
      mark_outer(j);
      return b_.node(bound_var(j), {});
    }
    std::size_t lams = 0;
    for (std::size_t i = scope_.size(); i-- > 0;) {
      Scope& s = scope_[i];
      if (s.name != n) {
        if (!s.label) ++lams;
        continue;
      }
      if (s.label) {
        if (depth_ != s.depth) s.deeper_edge = true;
        return s.binder;
      }
      mark_outer(lams);
      return b_.node(bound_var(lams), {});
    }
    return b_.node(free_var(n), {});
  }

  /// Index j at the current point refers to the binder at depth depth_-1-j;
  /// every rec opened deeper than that binder now refers outward.
  void mark_outer(std::size_t j) {
    std::size_t target = j < depth_ ? depth_ - 1 - j : 0;
    bool loose = j >= depth_;
    for (auto& s : scope_)
      if (s.label && (loose || s.depth > target)) s.refers_out = true;
  }

  Cursor& c_;
  const Calculus& calc_;
  TreeBuilder b_;
  std::vector<Scope> scope_;
  std::size_t depth_ = 0;
};

}  // namespace

Parsed parse_lam(std::string_view text, std::optional<Flags> default_flags) {
  Cursor c(text);
  Flags f = default_flags.value_or(Flags{});
  if (c.accept_word("flags")) {
    auto [line, col] = c.line_col();
    std::string bits = c.number();
    try {
      f = Flags::parse(bits);
    } catch (const DomainError& e) {
      throw SyntaxError(e.what(), line, col);
    }
  }
  Calculus calc(f);
  std::size_t start = c.pos();
  return Parsed{f, parse_lam_term(text.substr(start), calc)};
}

DTree parse_lam_term(std::string_view text, const Calculus& calc) {
  Cursor c(text);
  LamParser p(c, calc);
  DTree t = p.term();
  if (!c.at_end()) c.fail("unexpected text after the term");
  if (has_unguarded_cycle(t)) throw DomainError("unguarded cycle: every loop must cross a coinductive premiss");
  return t;
}

namespace {

std::set<std::string> free_names(const DTree& t) {
  std::set<std::string> out;
  auto g = graph::explore(t.handle(), kDefaultFuel);
  for (const auto& h : g.nodes) {
    const RulePtr& r = graph::payload(h).rule;
    if (kind_of(r) == NodeKind::Free) out.insert(r->key());
  }
  return out;
}

}  // namespace

std::string print_lam(const DTree& t) {
  std::set<std::string> taken = free_names(t);
  auto fresh = [&](const std::string& base, std::size_t& next) {
    for (;;) {
      std::string s = base + std::to_string(next++);
      if (!taken.count(s)) return s;
    }
  };
  std::vector<std::string> names;  // by binder depth
  std::size_t next_var = 0, next_label = 0;
  auto name_at = [&](std::size_t d) {
    while (names.size() <= d) names.push_back(fresh("x", next_var));
    return names[d];
  };
  struct Open {
    std::size_t depth;
    std::string label;
  };
  std::unordered_map<const void*, Open> open;
  LB lb;
  loose_bounds(t, kDefaultFuel, lb);
  enum Prec { Atom, App, Open_ };
  std::size_t written = 0;
  std::function<std::pair<std::string, Prec>(const DTree&, std::size_t)> rec =
      [&](const DTree& x0, std::size_t depth) -> std::pair<std::string, Prec> {
    DTree x = x0.resolved();
    const void* id = x.handle().slot;
    if (auto it = open.find(id); it != open.end()) {
      if (it->second.depth != depth) {
        auto b = lb.find(id);
        if (b == lb.end() || b->second > 0)
          throw DomainError("cycle re-enters an open term under extra binders; no named form exists");
      }
      if (it->second.label.empty()) it->second.label = fresh("L", next_label);
      return {it->second.label, Atom};
    }
    if (++written > kPrintBudget) throw NotRegular("printed form exceeds its budget");
    open.emplace(id, Open{depth, ""});
    const RulePtr& r = x.rule();
    std::pair<std::string, Prec> out;
    switch (kind_of(r)) {
      case NodeKind::Bound: {
        std::size_t j = index_of(r);
        out = {j < depth ? name_at(depth - 1 - j) : "%" + std::to_string(j - depth), Atom};
        break;
      }
      case NodeKind::Free: out = {r->key(), Atom}; break;
      case NodeKind::Trunc: out = {"*", Atom}; break;
      case NodeKind::Lam: {
        std::string v = name_at(depth);
        auto body = rec(x.child(0), depth + 1);
        out = {"\\" + v + ". " + body.first, Open_};
        break;
      }
      case NodeKind::App: {
        auto f = rec(x.child(0), depth);
        auto a = rec(x.child(1), depth);
        std::string fs = f.second == Open_ ? "(" + f.first + ")" : f.first;
        std::string as = a.second == Atom ? a.first : "(" + a.first + ")";
        out = {fs + " " + as, App};
        break;
      }
    }
    std::string label = std::move(open[id].label);
    open.erase(id);
    if (label.empty()) return out;
    return {"rec " + label + ". " + out.first, Open_};
  };
  return rec(t, 0).first;
}

// ---- standard presentation ----

std::vector<StdDerivation> StdDerivation::kids() const {
  std::vector<StdDerivation> out;
  for (const auto& k : graph::kids(graph::resolve(h_))) out.emplace_back(k);
  return out;
}

namespace {

struct WHash {
  std::size_t operator()(const WHandle& h) const { return std::hash<const void*>()(h.slot); }
};
struct WEq {
  bool operator()(const WHandle& a, const WHandle& b) const { return a.slot == b.slot; }
};
struct SHash {
  std::size_t operator()(const StdHandle& h) const { return std::hash<const void*>()(h.slot); }
};
struct SEq {
  bool operator()(const StdHandle& a, const StdHandle& b) const { return a.slot == b.slot; }
};

}  // namespace

StdDerivation to_standard_form(const Witness& w) {
  using C = graph::Corec<StdNode, WHandle, WHash, WEq>;
  auto arena = StdArena::create();
  auto cell = std::make_shared<C*>(nullptr);
  C** pc = cell.get();
  C* c = C::create(arena, [pc](const WHandle& h) {
    Witness W = Witness(h).resolved();
    const WNode& n = W.node();
    if (n.kind != WKind::Split || !n.seg_steps.empty() || !n.ord.is_zero())
      throw DomainError("standard form needs an omega-witness: splits at 0 without segments");
    Witness H = W.final_hat().resolved();
    const WNode& hn = H.node();
    if (hn.kind != WKind::Lift) throw DomainError("split whose final hat is not a lift");
    StdNode s{n.src, n.trail, hn.rule, hn.stmt};
    std::vector<graph::Ref<StdNode>> ks;
    for (const auto& k : H.kids()) ks.push_back((*pc)->ref(k.handle()));
    return graph::Content<StdNode>::node(std::move(s), std::move(ks));
  });
  *cell = c;
  arena->keep(cell);
  return StdDerivation(c->get(w.handle()));
}

Witness from_standard_form(const StdDerivation& d) {
  using C = graph::Corec<WNode, StdHandle, SHash, SEq>;
  auto arena = WArena::create();
  auto cell = std::make_shared<C*>(nullptr);
  C** pc = cell.get();
  WArena* a = arena.get();
  C* c = C::create(arena, [pc, a](const StdHandle& h) {
    StdHandle r = graph::resolve(h);
    const StdNode& n = graph::payload(r);
    WNode lift;
    lift.kind = WKind::Lift;
    lift.rule = n.rule;
    lift.stmt = n.stmt;
    std::vector<WRef> ks;
    for (const auto& k : graph::kids(r)) ks.push_back((*pc)->ref(k, n.stmt));
    const auto* ls = a->filled(std::move(lift), std::move(ks), n.stmt);
    WNode split;
    split.kind = WKind::Split;
    split.src = n.src;
    split.trail = n.steps;
    return graph::Content<WNode>::node(std::move(split), {a->local(ls)});
  });
  *cell = c;
  arena->keep(cell);
  return Witness(c->get(d.handle()));
}

std::string print_standard(const StdDerivation& d, std::size_t budget) {
  auto render = [](const StdHandle& h, const std::vector<std::string>& ks) {
    const StdNode& n = graph::payload(h);
    std::string s = "std{ src: " + print_tree(n.src) + " ; steps " + steps_str(n.steps) + " ; " + n.rule->key();
    if (!ks.empty()) {
      s += "(";
      for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? ", " : "") + ks[i];
      s += ")";
    }
    return s + " }";
  };
  auto annot = [](const StdHandle&) { return std::string(); };
  return print_graph(d.handle(), render, annot, {"std", "rec"}, budget);
}

std::size_t standard_state_count(const StdDerivation& d, std::size_t budget) {
  auto g = graph::explore(d.handle(), budget);
  if (!g.complete) throw NotRegular("standard derivation exceeds its budget");
  return g.nodes.size();
}

}  // namespace coind::lambda
