#include <algorithm>
#include <numeric>
#include <set>

#include "coind/mumall.hpp"
#include "coind/text.hpp"

namespace coind::mumall {

namespace {

std::pair<Coord, Coord> ordered(Coord a, Coord b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace

CutRel::CutRel(std::vector<std::pair<Coord, Coord>> pairs) {
  for (auto& [a, b] : pairs) pairs_.push_back(ordered(a, b));
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

void CutRel::add(Coord a, Coord b) {
  auto p = ordered(a, b);
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), p);
  if (it == pairs_.end() || *it != p) pairs_.insert(it, p);
}

std::optional<Coord> CutRel::partner(const Coord& c) const {
  for (const auto& [a, b] : pairs_) {
    if (a == c) return b;
    if (b == c) return a;
  }
  return std::nullopt;
}

std::string CutRel::str() const {
  std::vector<std::string> xs;
  for (const auto& [a, b] : pairs_) xs.push_back(a.str() + "~" + b.str());
  return join(xs, ";");
}

MulticutCheck validate_multicut(std::size_t k, const std::vector<std::size_t>& n, const CutRel& rel,
                                const std::vector<Sequent>& premisses) {
  MulticutCheck out;
  auto& v = out.violations;
  if (k == 0) v.push_back("correctness: a multicut needs at least one premiss");
  if (n.size() != k) v.push_back("correctness: " + std::to_string(n.size()) + " lengths given for k=" + std::to_string(k));
  if (premisses.size() != k)
    v.push_back("correctness: " + std::to_string(premisses.size()) + " premisses for k=" + std::to_string(k));
  if (!v.empty()) return out;
  for (std::size_t i = 0; i < k; ++i)
    if (premisses[i].size() != n[i])
      v.push_back("correctness: premiss " + std::to_string(i + 1) + " has " + std::to_string(premisses[i].size()) +
                  " formulas, expected " + std::to_string(n[i]));
  auto inside = [&](const Coord& c) { return c.i < k && c.j < n[c.i]; };
  bool bounds = true;
  for (const auto& [a, b] : rel.pairs()) {
    for (const Coord& c : {a, b})
      if (!inside(c)) {
        v.push_back("correctness: index " + c.str() + " is out of bounds");
        bounds = false;
      }
  }
  if (!bounds || !v.empty()) return out;

  std::map<Coord, std::size_t> uses;
  for (const auto& [a, b] : rel.pairs()) {
    ++uses[a];
    ++uses[b];
    if (a == b) {
      v.push_back("duality: " + a.str() + " is cut against itself");
      continue;
    }
    const Formula& fa = premisses[a.i][a.j];
    const Formula& fb = premisses[b.i][b.j];
    if (fb != neg(fa)) v.push_back("duality: " + a.str() + " (" + fa.str() + ") and " + b.str() + " (" + fb.str() + ") are not dual");
  }
  for (const auto& [c, m] : uses)
    if (m > 1) v.push_back("duality: " + c.str() + " is cut " + std::to_string(m) + " times");

  UnionFind uf(k);
  for (const auto& [a, b] : rel.pairs()) {
    if (a.i == b.i) {
      v.push_back("acyclicity: premiss " + std::to_string(a.i + 1) + " is cut against itself");
      continue;
    }
    if (!uf.unite(a.i, b.i))
      v.push_back("acyclicity: cut " + a.str() + "~" + b.str() + " closes a cycle between premisses");
  }
  for (std::size_t i = 1; i < k; ++i)
    if (uf.find(i) != uf.find(0)) {
      v.push_back("connectedness: premiss " + std::to_string(i + 1) + " is not connected to premiss 1");
    }

  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n[i]; ++j)
      if (!uses.count(Coord{i, j})) out.conclusion.push_back(premisses[i][j]);
  return out;
}

CutRel reindex_cutrel(const IndexMap& pi, const CutRel& rel) {
  std::map<Coord, Coord> inv;
  for (const auto& [nw, old] : pi) {
    if (!inv.emplace(old, nw).second) throw InternalInvariant("index map is not injective at " + old.str());
  }
  CutRel out;
  for (const auto& [a, b] : rel.pairs()) {
    auto ia = inv.find(a), ib = inv.find(b);
    if (ia != inv.end() && ib != inv.end()) out.add(ia->second, ib->second);
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> partition_tensor_premisses(
    const CutRel& rel, const std::vector<std::size_t>& n, std::size_t tensor, std::size_t gamma) {
  std::size_t k = n.size();
  if (tensor >= k) throw DomainError("tensor premiss out of range");
  std::vector<std::vector<std::size_t>> adj(k);
  std::vector<std::size_t> gseeds, dseeds;
  for (const auto& [a, b] : rel.pairs()) {
    if (a.i == tensor || b.i == tensor) {
      const Coord& t = a.i == tensor ? a : b;
      const Coord& o = a.i == tensor ? b : a;
      if (o.i == tensor) continue;
      (t.j < gamma ? gseeds : dseeds).push_back(o.i);
      continue;
    }
    adj[a.i].push_back(b.i);
    adj[b.i].push_back(a.i);
  }
  auto reach = [&](const std::vector<std::size_t>& seeds) {
    std::vector<bool> seen(k, false);
    std::vector<std::size_t> todo = seeds;
    while (!todo.empty()) {
      std::size_t x = todo.back();
      todo.pop_back();
      if (seen[x]) continue;
      seen[x] = true;
      for (auto y : adj[x]) todo.push_back(y);
    }
    return seen;
  };
  auto g = reach(gseeds), d = reach(dseeds);
  std::vector<std::size_t> zg, zd;
  for (std::size_t i = 0; i < k; ++i) {
    if (i == tensor) continue;
    if (g[i] && d[i])
      throw NotPartitionable("premiss " + std::to_string(i + 1) + " is connected to both sides of the tensor");
    (d[i] ? zd : zg).push_back(i);
  }
  return {zg, zd};
}

// ---- rules ----

namespace {

struct RuleData {
  Formula f;
  std::size_t i = 0;
  std::vector<std::size_t> sigma;
  Sequent ctx;
  McutParams mc;
  std::shared_ptr<std::vector<std::string>> sink;  // lenient multicut: violations go here
};

Sequent seq(const Statement& s) { return sequent_of(s); }

class MRuleImpl : public MRule {
 public:
  MRuleImpl(RKind kind, std::string key, std::size_t arity, std::vector<bool> coind, RuleData d)
      : MRule(kind, std::move(key), arity, std::move(coind)), d_(std::move(d)) {}

  const RuleData& data() const { return d_; }

  Statement conclude(std::span<const Statement> ps) const override {
    check_arity(ps);
    auto fail = [&](const std::string& m) -> Statement { throw DomainError(key() + ": " + m); };
    auto need_last = [&](const Sequent& s, const char* what) {
      if (s.empty()) fail(std::string("premiss must end with ") + what);
    };
    switch (kind()) {
      case RKind::Ax: return sequent_statement({d_.f, neg(d_.f)});
      case RKind::One: return sequent_statement({Formula::one()});
      case RKind::Top: {
        Sequent s = d_.ctx;
        s.push_back(Formula::top());
        return sequent_statement(s);
      }
      case RKind::Cut: {
        Sequent a = seq(ps[0]), b = seq(ps[1]);
        if (a.empty() || b.empty()) return fail("both premisses need a cut formula");
        if (b.back() != neg(a.back()))
          return fail("cut formulas " + a.back().str() + " and " + b.back().str() + " are not dual");
        a.pop_back();
        b.pop_back();
        a.insert(a.end(), b.begin(), b.end());
        return sequent_statement(a);
      }
      case RKind::Exch: {
        Sequent p = seq(ps[0]);
        if (p.size() != d_.sigma.size())
          return fail("premiss has " + std::to_string(p.size()) + " formulas, the permutation acts on " +
                      std::to_string(d_.sigma.size()));
        Sequent c(p.size());
        for (std::size_t q = 0; q < p.size(); ++q) c[d_.sigma[q]] = p[q];
        return sequent_statement(c);
      }
      case RKind::Bot: {
        Sequent s = seq(ps[0]);
        s.push_back(Formula::bot());
        return sequent_statement(s);
      }
      case RKind::Par: {
        Sequent s = seq(ps[0]);
        if (s.size() < 2) return fail("premiss must end with two formulas F, G");
        Formula g = s.back();
        s.pop_back();
        Formula f = s.back();
        s.back() = Formula::par(f, g);
        return sequent_statement(s);
      }
      case RKind::Tens: {
        Sequent a = seq(ps[0]), b = seq(ps[1]);
        need_last(a, "F");
        need_last(b, "G");
        Formula t = Formula::tens(a.back(), b.back());
        a.pop_back();
        b.pop_back();
        a.insert(a.end(), b.begin(), b.end());
        a.push_back(t);
        return sequent_statement(a);
      }
      case RKind::Plus: {
        Sequent s = seq(ps[0]);
        need_last(s, "the chosen disjunct");
        Formula fi = s.back();
        s.back() = d_.i == 0 ? Formula::plus(fi, d_.f) : Formula::plus(d_.f, fi);
        return sequent_statement(s);
      }
      case RKind::With: {
        Sequent a = seq(ps[0]), b = seq(ps[1]);
        need_last(a, "F");
        need_last(b, "G");
        Formula f = a.back(), g = b.back();
        a.pop_back();
        b.pop_back();
        if (a != b) return fail("premiss contexts " + sequent_str(a) + " and " + sequent_str(b) + " differ");
        a.push_back(Formula::with(f, g));
        return sequent_statement(a);
      }
      case RKind::Mu:
      case RKind::Nu: {
        Sequent s = seq(ps[0]);
        need_last(s, "the unfolded fixed point");
        Formula u = unfold(d_.f);
        if (s.back() != u) return fail("premiss ends with " + s.back().str() + ", expected " + u.str());
        s.back() = d_.f;
        return sequent_statement(s);
      }
      case RKind::Mcut: {
        std::vector<Sequent> prem;
        for (const auto& p : ps) prem.push_back(seq(p));
        MulticutCheck c = validate_multicut(d_.mc.k, d_.mc.n, d_.mc.rel, prem);
        if (!c.ok()) {
          if (!d_.sink) return fail(join(c.violations, "; "));
          for (const auto& v : c.violations) d_.sink->push_back(key() + ": " + v);
        }
        return sequent_statement(c.conclusion);
      }
    }
    throw InternalInvariant("bad rule kind");
  }

 private:
  RuleData d_;
};

const MRuleImpl& impl(const RulePtr& r) {
  auto* m = dynamic_cast<const MRuleImpl*>(r.get());
  if (!m) throw DomainError("rule " + r->key() + " is not a mumall rule");
  return *m;
}

RulePtr mk(RKind k, std::string key, std::size_t arity, RuleData d = {}) {
  std::vector<bool> coind(arity, k != RKind::Exch);
  return std::make_shared<MRuleImpl>(k, std::move(key), arity, std::move(coind), std::move(d));
}

void need_closed(const Formula& f) {
  if (!f.closed()) throw DomainError("formula " + f.str() + " has a free fixed-point variable");
}

std::string seq_list(const Sequent& s) {
  std::vector<std::string> xs;
  for (const auto& f : s) xs.push_back(f.str());
  return join(xs, ", ");
}

}  // namespace

const MRule& mrule(const RulePtr& r) { return impl(r); }
RKind rule_kind(const RulePtr& r) { return impl(r).kind(); }

RulePtr ax_rule(const Formula& f) {
  need_closed(f);
  RuleData d;
  d.f = f;
  return mk(RKind::Ax, "ax[" + f.str() + "]", 0, d);
}

RulePtr cut_rule() {
  static const RulePtr r = mk(RKind::Cut, "cut", 2);
  return r;
}

RulePtr exch_rule(const std::vector<std::size_t>& sigma) {
  std::vector<bool> seen(sigma.size(), false);
  for (auto s : sigma) {
    if (s >= sigma.size() || seen[s]) throw DomainError("x: not a permutation");
    seen[s] = true;
  }
  std::vector<std::string> xs;
  for (auto s : sigma) xs.push_back(std::to_string(s + 1));
  RuleData d;
  d.sigma = sigma;
  return mk(RKind::Exch, "x[" + join(xs, ",") + "]", 1, d);
}

RulePtr one_rule() {
  static const RulePtr r = mk(RKind::One, "one", 0);
  return r;
}

RulePtr top_rule(const Sequent& gamma) {
  for (const auto& f : gamma) need_closed(f);
  RuleData d;
  d.ctx = gamma;
  return mk(RKind::Top, "top[" + seq_list(gamma) + "]", 0, d);
}

RulePtr bot_rule() {
  static const RulePtr r = mk(RKind::Bot, "bot", 1);
  return r;
}

RulePtr par_rule() {
  static const RulePtr r = mk(RKind::Par, "par", 1);
  return r;
}

RulePtr tens_rule() {
  static const RulePtr r = mk(RKind::Tens, "tens", 2);
  return r;
}

RulePtr plus_rule(std::size_t i, const Formula& other) {
  if (i > 1) throw DomainError("plus: index must be 0 or 1");
  need_closed(other);
  RuleData d;
  d.i = i;
  d.f = other;
  return mk(RKind::Plus, "plus(" + std::to_string(i) + ")[" + other.str() + "]", 1, d);
}

RulePtr with_rule() {
  static const RulePtr r = mk(RKind::With, "with", 2);
  return r;
}

RulePtr mu_rule(const Formula& fix) {
  if (fix.kind() != FKind::Mu) throw DomainError("mu: " + fix.str() + " is not a least fixed point");
  need_closed(fix);
  RuleData d;
  d.f = fix;
  return mk(RKind::Mu, "mu[" + fix.str() + "]", 1, d);
}

RulePtr nu_rule(const Formula& fix) {
  if (fix.kind() != FKind::Nu) throw DomainError("nu: " + fix.str() + " is not a greatest fixed point");
  need_closed(fix);
  RuleData d;
  d.f = fix;
  return mk(RKind::Nu, "nu[" + fix.str() + "]", 1, d);
}

RulePtr mcut_rule(std::size_t k, std::vector<std::size_t> n, CutRel rel) {
  if (k == 0) throw DomainError("mcut: needs at least one premiss");
  if (n.size() != k) throw DomainError("mcut: " + std::to_string(n.size()) + " lengths for k=" + std::to_string(k));
  std::vector<std::string> ns;
  for (auto x : n) ns.push_back(std::to_string(x));
  std::string key = "mcut[" + std::to_string(k) + ";" + join(ns, ",");
  if (rel.size()) key += ";" + rel.str();
  key += "]";
  RuleData d;
  d.mc = McutParams{k, std::move(n), std::move(rel)};
  return mk(RKind::Mcut, key, k, d);
}

const Formula& rule_formula(const RulePtr& r) {
  const auto& m = impl(r);
  if (!m.data().f.valid()) throw DomainError(r->key() + " has no formula parameter");
  return m.data().f;
}
std::size_t plus_index(const RulePtr& r) { return impl(r).data().i; }
const std::vector<std::size_t>& exch_sigma(const RulePtr& r) { return impl(r).data().sigma; }
const Sequent& top_context(const RulePtr& r) { return impl(r).data().ctx; }
const McutParams& mcut_params(const RulePtr& r) {
  const auto& m = impl(r);
  if (m.kind() != RKind::Mcut) throw DomainError(r->key() + " is not a multicut");
  return m.data().mc;
}

// ---- text ----

namespace {

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::string t = trim(s);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw DomainError(what + ": expected a number, got '" + t + "'");
  return std::stoul(t);
}

Coord parse_coord(const std::string& s) {
  std::string t = trim(s);
  auto dot = t.find('.');
  if (dot == std::string::npos) throw DomainError("expected i.j, got '" + t + "'");
  std::size_t i = parse_count(t.substr(0, dot), "premiss index");
  std::size_t j = parse_count(t.substr(dot + 1), "formula index");
  if (i == 0 || j == 0) throw DomainError("indices are 1-based: " + t);
  return Coord{i - 1, j - 1};
}

void need_arity(const std::string& name, std::size_t want, std::size_t got) {
  if (want != got)
    throw DomainError(name + " takes " + std::to_string(want) + " premisses, got " + std::to_string(got));
}

}  // namespace

RulePtr Family::make_rule(const std::string& name, const std::string& params, const std::string& paren,
                          std::size_t nkids) const {
  auto no_params = [&] {
    if (!params.empty() || !paren.empty()) throw DomainError(name + " takes no parameters");
  };
  if (name == "ax") {
    need_arity(name, 0, nkids);
    return ax_rule(parse_formula(params));
  }
  if (name == "cut") {
    no_params();
    need_arity(name, 2, nkids);
    return cut_rule();
  }
  if (name == "x") {
    need_arity(name, 1, nkids);
    std::vector<std::size_t> sigma;
    if (!trim(params).empty())
      for (const auto& p : split_top(params, ',')) {
        std::size_t v = parse_count(p, "x");
        if (v == 0) throw DomainError("x: permutation entries are 1-based");
        sigma.push_back(v - 1);
      }
    return exch_rule(sigma);
  }
  if (name == "one") {
    no_params();
    need_arity(name, 0, nkids);
    return one_rule();
  }
  if (name == "top") {
    need_arity(name, 0, nkids);
    return top_rule(parse_sequent(params));
  }
  if (name == "bot" || name == "par" || name == "tens" || name == "with") {
    no_params();
    std::size_t want = (name == "tens" || name == "with") ? 2 : 1;
    need_arity(name, want, nkids);
    if (name == "bot") return bot_rule();
    if (name == "par") return par_rule();
    if (name == "tens") return tens_rule();
    return with_rule();
  }
  if (name == "plus") {
    need_arity(name, 1, nkids);
    if (paren.empty()) throw DomainError("plus needs its index: plus(0)[F] or plus(1)[F]");
    return plus_rule(parse_count(paren, "plus"), parse_formula(params));
  }
  if (name == "mu" || name == "nu") {
    need_arity(name, 1, nkids);
    if (params.empty()) throw DomainError(name + " needs its fixed point: " + name + "[" + name + " X. F]");
    Formula f = parse_formula(params);
    return name == "mu" ? mu_rule(f) : nu_rule(f);
  }
  if (name == "mcut") {
    auto parts = split_top(params, ';');
    if (parts.size() < 2) throw DomainError("mcut[k;n1,...,nk;i.j~i.j;...] expected");
    std::size_t k = parse_count(parts[0], "mcut k");
    std::vector<std::size_t> n;
    if (!trim(parts[1]).empty())
      for (const auto& p : split_top(parts[1], ',')) n.push_back(parse_count(p, "mcut n"));
    CutRel rel;
    for (std::size_t q = 2; q < parts.size(); ++q) {
      std::string t = trim(parts[q]);
      if (t.empty()) continue;
      auto tilde = t.find('~');
      if (tilde == std::string::npos) throw DomainError("mcut: expected i.j~i.j, got '" + t + "'");
      rel.add(parse_coord(t.substr(0, tilde)), parse_coord(t.substr(tilde + 1)));
    }
    need_arity(name, k, nkids);
    return mcut_rule(k, std::move(n), std::move(rel));
  }
  throw DomainError("unknown rule " + name);
}

Statement Family::parse_statement(const std::string& text) const { return sequent_statement(parse_sequent(text)); }

const Family& family() {
  static const Family f;
  return f;
}

DTree parse_proof(std::string_view text) { return parse_tree(text, family()); }

namespace {

class LenientFamily : public Family {
 public:
  explicit LenientFamily(std::shared_ptr<std::vector<std::string>> sink) : sink_(std::move(sink)) {}
  RulePtr make_rule(const std::string& name, const std::string& params, const std::string& paren,
                    std::size_t nkids) const override {
    RulePtr r = Family::make_rule(name, params, paren, nkids);
    if (rule_kind(r) != RKind::Mcut) return r;
    RuleData d = impl(r).data();
    d.sink = sink_;
    return mk(RKind::Mcut, r->key(), r->arity(), d);
  }

 private:
  std::shared_ptr<std::vector<std::string>> sink_;
};

}  // namespace

ProofCheck check_proof(std::string_view text) {
  auto sink = std::make_shared<std::vector<std::string>>();
  LenientFamily fam(sink);
  ProofCheck out;
  out.proof = parse_tree(text, fam);
  out.violations = *sink;
  return out;
}

}  // namespace coind::mumall
