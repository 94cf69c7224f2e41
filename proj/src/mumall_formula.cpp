#include <algorithm>
#include <functional>

#include "coind/mumall.hpp"
#include "coind/text.hpp"

namespace coind::mumall {

struct Formula::Node {
  FKind kind;
  std::string name;
  Formula a;
  Formula b;
};

namespace {

Formula make(FKind k, std::string name, Formula a, Formula b);

const char* binary_word(FKind k) {
  switch (k) {
    case FKind::Par: return "par";
    case FKind::Tens: return "tens";
    case FKind::Plus: return "plus";
    case FKind::With: return "with";
    default: return "";
  }
}

}  // namespace

Formula Formula::atom(const std::string& a) { return Formula(std::make_shared<Node>(Node{FKind::Atom, a, {}, {}})); }
Formula Formula::neg_atom(const std::string& a) {
  return Formula(std::make_shared<Node>(Node{FKind::NegAtom, a, {}, {}}));
}
Formula Formula::zero() { return Formula(std::make_shared<Node>(Node{FKind::Zero, "", {}, {}})); }
Formula Formula::one() { return Formula(std::make_shared<Node>(Node{FKind::One, "", {}, {}})); }
Formula Formula::top() { return Formula(std::make_shared<Node>(Node{FKind::Top, "", {}, {}})); }
Formula Formula::bot() { return Formula(std::make_shared<Node>(Node{FKind::Bot, "", {}, {}})); }
Formula Formula::par(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{FKind::Par, "", std::move(a), std::move(b)}));
}
Formula Formula::tens(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{FKind::Tens, "", std::move(a), std::move(b)}));
}
Formula Formula::plus(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{FKind::Plus, "", std::move(a), std::move(b)}));
}
Formula Formula::with(Formula a, Formula b) {
  return Formula(std::make_shared<Node>(Node{FKind::With, "", std::move(a), std::move(b)}));
}
Formula Formula::var(const std::string& x) { return Formula(std::make_shared<Node>(Node{FKind::Var, x, {}, {}})); }
Formula Formula::mu(const std::string& x, Formula body) {
  return Formula(std::make_shared<Node>(Node{FKind::Mu, x, std::move(body), {}}));
}
Formula Formula::nu(const std::string& x, Formula body) {
  return Formula(std::make_shared<Node>(Node{FKind::Nu, x, std::move(body), {}}));
}

namespace {

Formula make(FKind k, std::string name, Formula a, Formula b) {
  switch (k) {
    case FKind::Atom: return Formula::atom(name);
    case FKind::NegAtom: return Formula::neg_atom(name);
    case FKind::Zero: return Formula::zero();
    case FKind::One: return Formula::one();
    case FKind::Top: return Formula::top();
    case FKind::Bot: return Formula::bot();
    case FKind::Par: return Formula::par(a, b);
    case FKind::Tens: return Formula::tens(a, b);
    case FKind::Plus: return Formula::plus(a, b);
    case FKind::With: return Formula::with(a, b);
    case FKind::Var: return Formula::var(name);
    case FKind::Mu: return Formula::mu(name, a);
    case FKind::Nu: return Formula::nu(name, a);
  }
  throw InternalInvariant("bad formula kind");
}

}  // namespace

FKind Formula::kind() const {
  if (!n_) throw InternalInvariant("empty formula");
  return n_->kind;
}
const std::string& Formula::name() const { return n_->name; }
const Formula& Formula::left() const { return n_->a; }
const Formula& Formula::right() const { return n_->b; }
const Formula& Formula::body() const { return n_->a; }
bool Formula::is_binary() const {
  FKind k = kind();
  return k == FKind::Par || k == FKind::Tens || k == FKind::Plus || k == FKind::With;
}

namespace {

bool free_in(const Formula& f, std::vector<std::string>& bound) {
  switch (f.kind()) {
    case FKind::Var: return std::find(bound.begin(), bound.end(), f.name()) == bound.end();
    case FKind::Mu:
    case FKind::Nu: {
      bound.push_back(f.name());
      bool r = free_in(f.body(), bound);
      bound.pop_back();
      return r;
    }
    default:
      if (f.is_binary()) return free_in(f.left(), bound) || free_in(f.right(), bound);
      return false;
  }
}

/// Innermost binder index of x, or -1.
long bound_index(const std::vector<std::string>& env, const std::string& x) {
  for (std::size_t i = env.size(); i-- > 0;)
    if (env[i] == x) return static_cast<long>(env.size() - 1 - i);
  return -1;
}

bool alpha_eq(const Formula& a, const Formula& b, std::vector<std::string>& ea, std::vector<std::string>& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FKind::Atom:
    case FKind::NegAtom: return a.name() == b.name();
    case FKind::Var: {
      long ia = bound_index(ea, a.name()), ib = bound_index(eb, b.name());
      if (ia != ib) return false;
      return ia >= 0 || a.name() == b.name();
    }
    case FKind::Mu:
    case FKind::Nu: {
      ea.push_back(a.name());
      eb.push_back(b.name());
      bool r = alpha_eq(a.body(), b.body(), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return r;
    }
    default:
      if (a.is_binary()) return alpha_eq(a.left(), b.left(), ea, eb) && alpha_eq(a.right(), b.right(), ea, eb);
      return true;
  }
}

std::size_t mix(std::size_t h, std::size_t v) { return h * 1000003u ^ v; }

std::size_t hash_rec(const Formula& f, std::vector<std::string>& env) {
  std::size_t h = static_cast<std::size_t>(f.kind()) + 17;
  switch (f.kind()) {
    case FKind::Atom:
    case FKind::NegAtom: return mix(h, std::hash<std::string>()(f.name()));
    case FKind::Var: {
      long i = bound_index(env, f.name());
      return i >= 0 ? mix(h, static_cast<std::size_t>(i)) : mix(h + 1, std::hash<std::string>()(f.name()));
    }
    case FKind::Mu:
    case FKind::Nu: {
      env.push_back(f.name());
      std::size_t r = mix(h, hash_rec(f.body(), env));
      env.pop_back();
      return r;
    }
    default:
      if (f.is_binary()) return mix(mix(h, hash_rec(f.left(), env)), hash_rec(f.right(), env));
      return h;
  }
}

}  // namespace

bool Formula::closed() const {
  std::vector<std::string> bound;
  return !free_in(*this, bound);
}

std::size_t Formula::hash() const {
  std::vector<std::string> env;
  return hash_rec(*this, env);
}

std::size_t Formula::size() const {
  if (is_binary()) return 1 + left().size() + right().size();
  if (is_fix()) return 1 + body().size();
  return 1;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  if (!a.n_ || !b.n_) return false;
  std::vector<std::string> ea, eb;
  return alpha_eq(a, b, ea, eb);
}

std::string Formula::str() const {
  switch (kind()) {
    case FKind::Atom:
    case FKind::Var: return name();
    case FKind::NegAtom: return "~" + name();
    case FKind::Zero: return "0";
    case FKind::One: return "1";
    case FKind::Top: return "top";
    case FKind::Bot: return "bot";
    case FKind::Mu:
    case FKind::Nu: return std::string(kind() == FKind::Mu ? "mu " : "nu ") + name() + ". " + body().str();
    default: {
      auto side = [](const Formula& x, bool right) {
        bool wrap = x.is_binary() ? !right : x.is_fix();
        if (x.is_fix() && right) wrap = false;
        return wrap ? "(" + x.str() + ")" : x.str();
      };
      return side(left(), false) + " " + binary_word(kind()) + " " + side(right(), true);
    }
  }
}

Formula neg(const Formula& f) {
  switch (f.kind()) {
    case FKind::Atom: return Formula::neg_atom(f.name());
    case FKind::NegAtom: return Formula::atom(f.name());
    case FKind::Zero: return Formula::top();
    case FKind::Top: return Formula::zero();
    case FKind::One: return Formula::bot();
    case FKind::Bot: return Formula::one();
    case FKind::Par: return Formula::tens(neg(f.left()), neg(f.right()));
    case FKind::Tens: return Formula::par(neg(f.left()), neg(f.right()));
    case FKind::Plus: return Formula::with(neg(f.left()), neg(f.right()));
    case FKind::With: return Formula::plus(neg(f.left()), neg(f.right()));
    case FKind::Var: return f;
    case FKind::Mu: return Formula::nu(f.name(), neg(f.body()));
    case FKind::Nu: return Formula::mu(f.name(), neg(f.body()));
  }
  throw InternalInvariant("bad formula kind");
}

Formula formula_subst(const Formula& f, const Formula& g, const std::string& x) {
  switch (f.kind()) {
    case FKind::Var: return f.name() == x ? g : f;
    case FKind::Mu:
    case FKind::Nu:
      if (f.name() == x) return f;
      return make(f.kind(), f.name(), formula_subst(f.body(), g, x), {});
    default:
      if (f.is_binary()) return make(f.kind(), "", formula_subst(f.left(), g, x), formula_subst(f.right(), g, x));
      return f;
  }
}

Formula unfold(const Formula& fix) {
  if (!fix.is_fix()) throw DomainError(fix.str() + " is not a fixed point");
  return formula_subst(fix.body(), fix, fix.name());
}

namespace {

bool reserved(const std::string& w) {
  return w == "par" || w == "tens" || w == "plus" || w == "with" || w == "mu" || w == "nu" || w == "top" ||
         w == "bot";
}

class FormulaParser {
 public:
  explicit FormulaParser(Cursor& c) : c_(c) {}

  Formula formula() {
    c_.skip_ws();
    if (c_.accept_word("mu")) return fix(FKind::Mu);
    if (c_.accept_word("nu")) return fix(FKind::Nu);
    Formula l = unary();
    for (auto k : {FKind::Par, FKind::Tens, FKind::Plus, FKind::With}) {
      if (c_.accept_word(binary_word(k))) return make(k, "", l, formula());
    }
    return l;
  }

 private:
  Formula fix(FKind k) {
    std::string x = c_.ident();
    if (reserved(x)) c_.fail("reserved word " + x + " used as a fixed-point variable");
    c_.expect(".");
    env_.push_back(x);
    Formula body = formula();
    env_.pop_back();
    return make(k, x, body, {});
  }

  Formula unary() {
    c_.skip_ws();
    if (c_.accept("~")) return neg(unary());
    if (c_.accept("(")) {
      Formula f = formula();
      c_.expect(")");
      return f;
    }
    if (c_.accept_word("mu")) return fix(FKind::Mu);
    if (c_.accept_word("nu")) return fix(FKind::Nu);
    if (c_.accept_word("top")) return Formula::top();
    if (c_.accept_word("bot")) return Formula::bot();
    if (!c_.at_ident()) {
      if (c_.at_end()) c_.fail("unexpected end of formula");
      c_.fail("expected a formula");
    }
    std::string w = c_.ident();
    if (w == "0") return Formula::zero();
    if (w == "1") return Formula::one();
    if (reserved(w)) c_.fail("unexpected " + w);
    if (std::find(env_.begin(), env_.end(), w) != env_.end()) return Formula::var(w);
    return Formula::atom(w);
  }

  Cursor& c_;
  std::vector<std::string> env_;
};

class SequentData : public StatementData {
 public:
  explicit SequentData(Sequent s) : s_(std::move(s)) {}
  bool equals(const StatementData& other) const override {
    auto* o = dynamic_cast<const SequentData*>(&other);
    return o && o->s_ == s_;
  }
  std::size_t hash() const override {
    std::size_t h = 0x51ed270b;
    for (const auto& f : s_) h = mix(h, f.hash());
    return h;
  }
  std::string str() const override { return sequent_str(s_); }
  const Sequent& seq() const { return s_; }

 private:
  Sequent s_;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  Cursor c(text);
  FormulaParser p(c);
  Formula f = p.formula();
  if (!c.at_end()) c.fail("unexpected text after the formula");
  return f;
}

Statement sequent_statement(Sequent s) { return Statement(std::make_shared<SequentData>(std::move(s))); }

const Sequent& sequent_of(const Statement& s) {
  auto* d = s.as<SequentData>();
  if (!d) throw DomainError("statement " + s.str() + " is not a sequent");
  return d->seq();
}

std::string sequent_str(const Sequent& s) {
  std::string out = "|-";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : " ") + s[i].str();
  return out;
}

Sequent parse_sequent(std::string_view text) {
  std::string t = trim(text);
  std::string_view body = t;
  if (body.substr(0, 2) == "|-") body.remove_prefix(2);
  Sequent out;
  if (trim(body).empty()) return out;
  for (const auto& part : split_top(body, ',')) out.push_back(parse_formula(part));
  return out;
}

std::string Coord::str() const { return std::to_string(i + 1) + "." + std::to_string(j + 1); }

}  // namespace coind::mumall
