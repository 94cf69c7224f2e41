#include <functional>
#include <set>

#include "support.hpp"

namespace coind::testing {

namespace {

NPtr var(std::string x) { return std::make_shared<NTerm>(NTerm{NTerm::Var, std::move(x), nullptr, nullptr}); }
NPtr lam(std::string x, NPtr body) { return std::make_shared<NTerm>(NTerm{NTerm::Lam, std::move(x), std::move(body), nullptr}); }
NPtr app(NPtr f, NPtr a) { return std::make_shared<NTerm>(NTerm{NTerm::App, "", std::move(f), std::move(a)}); }

/// terms[size][scope]
using Table = std::vector<std::vector<std::vector<NPtr>>>;

const std::vector<NPtr>& terms_of(Table& tab, std::size_t size, std::size_t scope) {
  if (tab.size() <= size) tab.resize(size + 1);
  auto& row = tab[size];
  if (row.size() <= scope) row.resize(scope + 1);
  auto& cell = row[scope];
  if (!cell.empty() || size == 0) return cell;
  if (size == 1)
    for (std::size_t i = 0; i < scope; ++i) cell.push_back(var("x" + std::to_string(i)));
  if (size >= 2)
    for (const auto& b : terms_of(tab, size - 1, scope + 1)) cell.push_back(lam("x" + std::to_string(scope), b));
  for (std::size_t i = 1; i + 1 < size; ++i) {
    const auto& fs = terms_of(tab, i, scope);
    const auto& as = terms_of(tab, size - 1 - i, scope);
    for (const auto& f : fs)
      for (const auto& a : as) cell.push_back(app(f, a));
  }
  return cell;
}

void free_vars(const NPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case NTerm::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case NTerm::Lam: {
      bool fresh = bound.insert(t->name).second;
      free_vars(t->a, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    case NTerm::App:
      free_vars(t->a, bound, out);
      free_vars(t->b, bound, out);
      return;
  }
}

std::set<std::string> fv(const NPtr& t) {
  std::set<std::string> b, out;
  free_vars(t, b, out);
  return out;
}

std::string fresh_name() {
  static thread_local std::size_t n = 0;
  return "v" + std::to_string(n++);
}

/// t[s/x]
NPtr subst(const NPtr& t, const std::string& x, const NPtr& s, const std::set<std::string>& fv_s) {
  switch (t->kind) {
    case NTerm::Var: return t->name == x ? s : t;
    case NTerm::App: return app(subst(t->a, x, s, fv_s), subst(t->b, x, s, fv_s));
    case NTerm::Lam: {
      if (t->name == x) return t;
      if (!fv_s.count(t->name)) return lam(t->name, subst(t->a, x, s, fv_s));
      std::string y = fresh_name();
      NPtr body = subst(t->a, t->name, var(y), {y});
      return lam(y, subst(body, x, s, fv_s));
    }
  }
  return t;
}

bool is_redex(const NPtr& t) { return t->kind == NTerm::App && t->a->kind == NTerm::Lam; }

/// Contracts the leftmost-outermost redex; false when t is normal.
bool step(const NPtr& t, NPtr& out, std::vector<std::size_t>& path) {
  if (is_redex(t)) {
    out = subst(t->a->a, t->a->name, t->b, fv(t->b));
    return true;
  }
  NPtr r;
  switch (t->kind) {
    case NTerm::Var: return false;
    case NTerm::Lam:
      path.push_back(0);
      if (step(t->a, r, path)) {
        out = lam(t->name, r);
        return true;
      }
      path.pop_back();
      return false;
    case NTerm::App:
      path.push_back(0);
      if (step(t->a, r, path)) {
        out = app(r, t->b);
        return true;
      }
      path.back() = 1;
      if (step(t->b, r, path)) {
        out = app(t->a, r);
        return true;
      }
      path.pop_back();
      return false;
  }
  return false;
}

}  // namespace

std::vector<NPtr> closed_terms(std::size_t size) {
  Table tab;
  return terms_of(tab, size, 0);
}

NPtr to_named(const DTree& t) {
  std::function<NPtr(const DTree&, std::size_t)> go = [&](const DTree& x, std::size_t depth) -> NPtr {
    DTree r = x.resolved();
    switch (lambda::kind_of(r.rule())) {
      case lambda::NodeKind::Lam: return lam("x" + std::to_string(depth), go(r.child(0), depth + 1));
      case lambda::NodeKind::App: return app(go(r.child(0), depth), go(r.child(1), depth));
      case lambda::NodeKind::Bound: return var("x" + std::to_string(depth - 1 - lambda::index_of(r.rule())));
      case lambda::NodeKind::Free: return var(r.rule()->key());
      case lambda::NodeKind::Trunc: break;
    }
    throw DomainError("truncated term");
  };
  return go(t, 0);
}

DTree from_named(const NPtr& t, const lambda::Calculus& calc) {
  std::vector<std::string> env;
  std::function<DTree(const NPtr&)> go = [&](const NPtr& x) -> DTree {
    switch (x->kind) {
      case NTerm::Var:
        for (std::size_t i = env.size(); i-- > 0;)
          if (env[i] == x->name) return make_node(lambda::bound_var(env.size() - 1 - i), {});
        return make_node(lambda::free_var(x->name), {});
      case NTerm::Lam: {
        env.push_back(x->name);
        DTree body = go(x->a);
        env.pop_back();
        return calc.make_lam(body);
      }
      case NTerm::App: return calc.make_app(go(x->a), go(x->b));
    }
    throw DomainError("bad term");
  };
  return go(t);
}

std::optional<NormalForm> normalize(const NPtr& t, std::size_t bound) {
  NormalForm nf{t, {}};
  for (std::size_t i = 0; i <= bound; ++i) {
    NPtr next;
    std::vector<std::size_t> path;
    if (!step(nf.term, next, path)) return nf;
    if (i == bound) break;
    nf.term = next;
    nf.steps.push_back(std::move(path));
  }
  return std::nullopt;
}

Witness standard_witness(const DTree& t, const std::vector<std::vector<std::size_t>>& steps,
                         const lambda::Calculus& calc) {
  WitnessBuilder wb;
  std::function<Witness(const DTree&, const std::vector<std::vector<std::size_t>>&)> go =
      [&](const DTree& src, const std::vector<std::vector<std::size_t>>& ss) -> Witness {
    std::size_t last = 0;
    for (std::size_t i = 0; i < ss.size(); ++i)
      if (ss[i].empty()) last = i + 1;
    DTree cur = src;
    std::vector<Step> trail;
    for (std::size_t i = 0; i < last; ++i) {
      Step st{ss[i], "beta", path_depth(cur, ss[i])};
      cur = apply_step(cur, st, calc);
      trail.push_back(std::move(st));
    }
    DTree r = cur.resolved();
    std::vector<std::vector<std::vector<std::size_t>>> per(r.arity());
    for (std::size_t i = last; i < ss.size(); ++i) per.at(ss[i][0]).emplace_back(ss[i].begin() + 1, ss[i].end());
    std::vector<Witness> kids;
    for (std::size_t i = 0; i < r.arity(); ++i) kids.push_back(go(r.child(i), per[i]));
    Ordinal zero;
    return wb.split(zero, src, {}, trail, wb.lift(zero, r.rule(), r.statement(), kids));
  };
  return go(t, steps);
}

}  // namespace coind::testing
