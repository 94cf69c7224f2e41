#include <algorithm>
#include <deque>
#include <numeric>

#include "coind/mumall.hpp"
#include "coind/text.hpp"

namespace coind::mumall {

namespace {

struct Named {
  StepKind kind;
  const char* name;
};

constexpr Named kNames[] = {
    {StepKind::MergeCutMcut, "merge"}, {StepKind::PremissPerm, "perm"},   {StepKind::Ax, "ax"},
    {StepKind::TensorPar, "tens-par"}, {StepKind::WithPlus, "with-plus"}, {StepKind::MuNu, "mu-nu"},
    {StepKind::BotOne, "bot-one"},     {StepKind::CommPar, "comm-par"},   {StepKind::CommTensor, "comm-tens"},
    {StepKind::CommOne, "comm-one"},   {StepKind::CommBot, "comm-bot"},   {StepKind::CommPlus, "comm-plus"},
    {StepKind::CommWith, "comm-with"}, {StepKind::CommMu, "comm-mu"},     {StepKind::CommNu, "comm-nu"},
    {StepKind::CommTop, "comm-top"},   {StepKind::CommExch, "comm-exch"}, {StepKind::CommAx, "comm-ax"},
};

}  // namespace

std::string RootStep::name() const {
  for (const auto& n : kNames) {
    if (n.kind != kind) continue;
    if (kind != StepKind::PremissPerm) return n.name;
    std::string out = "perm[";
    for (std::size_t i = 0; i < tau.size(); ++i) out += (i ? "," : "") + std::to_string(tau[i] + 1);
    return out + "]";
  }
  throw InternalInvariant("bad step kind");
}

RootStep RootStep::parse(const std::string& name) {
  std::string t = trim(name);
  RootStep st;
  if (t.rfind("perm[", 0) == 0 && t.back() == ']') {
    st.kind = StepKind::PremissPerm;
    std::string body = t.substr(5, t.size() - 6);
    for (const auto& p : split_top(body, ',')) {
      std::string x = trim(p);
      if (x.empty() || !std::all_of(x.begin(), x.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
          std::stoul(x) == 0)
        throw StepNotApplicable("bad premiss permutation in " + t);
      st.tau.push_back(std::stoul(x) - 1);
    }
    return st;
  }
  for (const auto& n : kNames) {
    if (n.kind != StepKind::PremissPerm && t == n.name) {
      st.kind = n.kind;
      return st;
    }
  }
  throw StepNotApplicable("unknown mumall step " + t);
}

bool is_principal(StepKind k) {
  return k == StepKind::Ax || k == StepKind::TensorPar || k == StepKind::WithPlus || k == StepKind::MuNu ||
         k == StepKind::BotOne;
}

bool is_commutative(StepKind k) { return k >= StepKind::CommPar; }

namespace {

using P = Pattern;
P H(std::size_t i) { return P::make_hole(i); }
P N(RulePtr r, std::vector<P> kids = {}) { return P::node(std::move(r), std::move(kids)); }

std::vector<P> holes(std::size_t from, std::size_t to) {
  std::vector<P> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(H(i));
  return out;
}

std::optional<RKind> kind_of(const DTree& t) {
  auto* m = dynamic_cast<const MRule*>(t.rule().get());
  if (!m) return std::nullopt;
  return m->kind();
}

std::vector<Coord> uncut(const std::vector<std::size_t>& n, const CutRel& rel) {
  std::vector<Coord> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = 0; j < n[i]; ++j)
      if (!rel.in_support(Coord{i, j})) out.push_back(Coord{i, j});
  return out;
}

/// The multicut at the root of a step's left-hand side.
struct Ctx {
  DTree t;
  RulePtr rule;
  McutParams mc;
  std::vector<DTree> kids;
  std::vector<Sequent> prem;
  std::size_t K = 0;

  explicit Ctx(const DTree& x) : t(x.resolved()) {
    rule = t.rule();
    if (kind_of(t) != RKind::Mcut) throw NotApplicable("root is not a multicut");
    mc = mcut_params(rule);
    kids = t.children();
    K = kids.size();
    for (const auto& k : kids) prem.push_back(sequent_of(k.statement()));
  }

  std::optional<RKind> kind(std::size_t i) const { return kind_of(kids[i]); }
  const RulePtr& krule(std::size_t i) const { return kids[i].resolved().rule(); }
  Sequent sub(std::size_t i, std::size_t q) const { return sequent_of(kids[i].resolved().child(q).statement()); }
  std::size_t last(std::size_t i) const {
    if (prem[i].empty()) throw NotApplicable("premiss " + std::to_string(i + 1) + " is empty");
    return prem[i].size() - 1;
  }
  bool last_uncut(std::size_t i) const { return !prem[i].empty() && !mc.rel.in_support(Coord{i, last(i)}); }
  bool cut_between(Coord a, Coord b) const {
    auto p = mc.rel.partner(a);
    return p && *p == b;
  }
  /// Identity on the premisses before `upto`.
  IndexMap keep(std::size_t upto) const {
    IndexMap pi;
    for (std::size_t i = 0; i < upto; ++i)
      for (std::size_t j = 0; j < prem[i].size(); ++j) pi[Coord{i, j}] = Coord{i, j};
    return pi;
  }
};

struct NewMcut {
  RulePtr rule;
  std::vector<std::size_t> n;
  CutRel rel;
};

NewMcut remcut(const std::vector<Sequent>& prem, const IndexMap& pi, const CutRel& old,
               const std::vector<std::pair<Coord, Coord>>& fresh) {
  NewMcut out;
  out.rel = reindex_cutrel(pi, old);
  for (const auto& [a, b] : fresh) out.rel.add(a, b);
  for (const auto& s : prem) out.n.push_back(s.size());
  MulticutCheck c = validate_multicut(prem.size(), out.n, out.rel, prem);
  if (!c.ok()) {
    std::string msg = "reindexed multicut is invalid:";
    for (const auto& v : c.violations) msg += " " + v + ";";
    throw InternalInvariant(msg);
  }
  out.rule = mcut_rule(prem.size(), out.n, out.rel);
  return out;
}

/// sigma with conclusion[sigma[p]] = premiss[p], where premiss position p
/// comes from old coordinate origins[p].
std::vector<std::size_t> sigma_for(const std::vector<Coord>& origins, const std::vector<Coord>& old_uncut) {
  std::vector<std::size_t> sigma;
  for (const auto& o : origins) {
    auto it = std::find(old_uncut.begin(), old_uncut.end(), o);
    if (it == old_uncut.end()) throw InternalInvariant("conclusion formula " + o.str() + " has no origin");
    sigma.push_back(static_cast<std::size_t>(it - old_uncut.begin()));
  }
  if (sigma.size() != old_uncut.size()) throw InternalInvariant("exchange does not cover the conclusion");
  return sigma;
}

std::vector<Coord> origins_of(const NewMcut& m, const IndexMap& pi) {
  std::vector<Coord> out;
  for (const auto& c : uncut(m.n, m.rel)) {
    auto it = pi.find(c);
    if (it == pi.end()) throw InternalInvariant("uncut formula " + c.str() + " has no origin");
    out.push_back(it->second);
  }
  return out;
}

bool is_identity(const std::vector<std::size_t>& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != i) return false;
  return true;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw NotApplicable(what);
}

StepPlan plan_merge(const Ctx& c) {
  std::size_t k = c.K - 1;
  require(c.kind(k) == RKind::Cut, "merge: last premiss is not a cut");
  Sequent a = c.sub(k, 0), b = c.sub(k, 1);
  std::size_t g = a.size() - 1, d = b.size() - 1;
  std::vector<Sequent> prem(c.prem.begin(), c.prem.begin() + k);
  prem.push_back(a);
  prem.push_back(b);
  IndexMap pi = c.keep(k);
  for (std::size_t j = 0; j < g; ++j) pi[Coord{k, j}] = Coord{k, j};
  for (std::size_t j = 0; j < d; ++j) pi[Coord{k + 1, j}] = Coord{k, g + j};
  NewMcut m = remcut(prem, pi, c.mc.rel, {{Coord{k, g}, Coord{k + 1, d}}});
  auto lk = holes(0, k);
  lk.push_back(N(cut_rule(), {H(k), H(k + 1)}));
  StepPlan p{N(c.rule, lk), N(m.rule, holes(0, k + 2)), 1, 0};
  return p;
}

StepPlan plan_perm(const Ctx& c, const std::vector<std::size_t>& tau) {
  require(tau.size() == c.K, "perm: permutation has the wrong length");
  std::vector<bool> seen(c.K, false);
  for (auto x : tau) {
    require(x < c.K && !seen[x], "perm: not a permutation");
    seen[x] = true;
  }
  std::vector<Sequent> prem;
  IndexMap pi;
  std::vector<P> rk;
  for (std::size_t p = 0; p < c.K; ++p) {
    prem.push_back(c.prem[tau[p]]);
    for (std::size_t j = 0; j < c.prem[tau[p]].size(); ++j) pi[Coord{p, j}] = Coord{tau[p], j};
    rk.push_back(H(tau[p]));
  }
  NewMcut m = remcut(prem, pi, c.mc.rel, {});
  auto sigma = sigma_for(origins_of(m, pi), uncut(c.mc.n, c.mc.rel));
  return StepPlan{N(c.rule, holes(0, c.K)), N(exch_rule(sigma), {N(m.rule, rk)}), 0, 0};
}

StepPlan plan_ax(const Ctx& c) {
  require(c.K >= 2, "ax: needs two premisses");
  std::size_t a = c.K - 2, q = c.K - 1;
  require(c.kind(a) == RKind::Ax, "ax: premiss before last is not an axiom");
  // the axiom's second formula is the cut one; mirrored, its first
  std::size_t cut_pos = 1;
  if (!c.cut_between(Coord{a, 1}, Coord{q, c.last(q)})) {
    require(c.cut_between(Coord{a, 0}, Coord{q, c.last(q)}), "ax: the axiom is not cut against the last formula");
    cut_pos = 0;
  }
  std::size_t g = c.last(q);
  std::vector<Sequent> prem(c.prem.begin(), c.prem.begin() + a);
  prem.push_back(c.prem[q]);
  IndexMap pi = c.keep(a);
  for (std::size_t j = 0; j < g; ++j) pi[Coord{a, j}] = Coord{q, j};
  pi[Coord{a, g}] = Coord{a, 1 - cut_pos};
  NewMcut m = remcut(prem, pi, c.mc.rel, {});
  auto lk = holes(0, a);
  lk.push_back(N(c.krule(a)));
  lk.push_back(H(a));
  auto sigma = sigma_for(origins_of(m, pi), uncut(c.mc.n, c.mc.rel));
  P rhs = N(m.rule, holes(0, a + 1));
  if (!is_identity(sigma)) rhs = N(exch_rule(sigma), {rhs});
  return StepPlan{N(c.rule, lk), rhs, 0, 1};
}

/// Premisses K-2, K-1 with rules (ka, kb) whose last formulas are cut together.
void require_pair(const Ctx& c, RKind ka, RKind kb, const char* what) {
  require(c.K >= 2, std::string(what) + ": needs two premisses");
  std::size_t a = c.K - 2, b = c.K - 1;
  require(c.kind(a) == ka && c.kind(b) == kb, std::string(what) + ": premisses do not have the required rules");
  require(c.cut_between(Coord{a, c.last(a)}, Coord{b, c.last(b)}),
          std::string(what) + ": principal formulas are not cut against each other");
}

StepPlan plan_tens_par(const Ctx& c) {
  require_pair(c, RKind::Tens, RKind::Par, "tens-par");
  std::size_t k = c.K - 2;
  Sequent A = c.sub(k, 0), B = c.sub(k, 1), C = c.sub(k + 1, 0);
  std::size_t g = A.size() - 1, d = B.size() - 1, e = C.size() - 2;
  std::vector<Sequent> prem(c.prem.begin(), c.prem.begin() + k);
  prem.push_back(A);
  prem.push_back(B);
  prem.push_back(C);
  IndexMap pi = c.keep(k);
  for (std::size_t j = 0; j < g; ++j) pi[Coord{k, j}] = Coord{k, j};
  for (std::size_t j = 0; j < d; ++j) pi[Coord{k + 1, j}] = Coord{k, g + j};
  for (std::size_t j = 0; j < e; ++j) pi[Coord{k + 2, j}] = Coord{k + 1, j};
  NewMcut m = remcut(prem, pi, c.mc.rel, {{Coord{k, g}, Coord{k + 2, e}}, {Coord{k + 1, d}, Coord{k + 2, e + 1}}});
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k), H(k + 1)}));
  lk.push_back(N(c.krule(k + 1), {H(k + 2)}));
  return StepPlan{N(c.rule, lk), N(m.rule, holes(0, k + 3)), 2, 1};
}

StepPlan plan_with_plus(const Ctx& c) {
  require_pair(c, RKind::With, RKind::Plus, "with-plus");
  std::size_t k = c.K - 2;
  std::size_t i = plus_index(c.krule(k + 1));
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k), H(k + 1)}));
  lk.push_back(N(c.krule(k + 1), {H(k + 2)}));
  auto rk = holes(0, k);
  rk.push_back(H(k + i));
  rk.push_back(H(k + 2));
  return StepPlan{N(c.rule, lk), N(c.rule, rk), 0, 0};
}

StepPlan plan_mu_nu(const Ctx& c) {
  require_pair(c, RKind::Mu, RKind::Nu, "mu-nu");
  std::size_t k = c.K - 2;
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k)}));
  lk.push_back(N(c.krule(k + 1), {H(k + 1)}));
  return StepPlan{N(c.rule, lk), N(c.rule, holes(0, k + 2)), 0, 0};
}

StepPlan plan_bot_one(const Ctx& c) {
  require_pair(c, RKind::Bot, RKind::One, "bot-one");
  std::size_t k = c.K - 2;
  Sequent A = c.sub(k, 0);
  std::vector<Sequent> prem(c.prem.begin(), c.prem.begin() + k);
  prem.push_back(A);
  IndexMap pi = c.keep(k + 1);
  pi.erase(Coord{k, A.size()});
  NewMcut m = remcut(prem, pi, c.mc.rel, {});
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k)}));
  lk.push_back(N(c.krule(k + 1)));
  return StepPlan{N(c.rule, lk), N(m.rule, holes(0, k + 1)), 0, 1};
}

/// Last premiss has rule `kind` and its last formula is not cut.
void require_comm(const Ctx& c, RKind kind, const char* what) {
  std::size_t k = c.K - 1;
  require(c.kind(k) == kind, std::string(what) + ": last premiss does not have the required rule");
  require(c.last_uncut(k), std::string(what) + ": the principal formula is cut");
}

/// Multicut over premisses 0..k-1 and the last premiss replaced by `np`,
/// whose first `keep` formulas are those of the old last premiss.
NewMcut replace_last(const Ctx& c, const Sequent& np, std::size_t keep) {
  std::size_t k = c.K - 1;
  std::vector<Sequent> prem(c.prem.begin(), c.prem.begin() + k);
  prem.push_back(np);
  IndexMap pi = c.keep(k);
  for (std::size_t j = 0; j < keep; ++j) pi[Coord{k, j}] = Coord{k, j};
  return remcut(prem, pi, c.mc.rel, {});
}

StepPlan plan_comm_unary(const Ctx& c, RKind kind, const char* what) {
  require_comm(c, kind, what);
  std::size_t k = c.K - 1;
  Sequent A = c.sub(k, 0);
  NewMcut m = replace_last(c, A, c.prem[k].size() - 1);
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k)}));
  return StepPlan{N(c.rule, lk), N(c.krule(k), {N(m.rule, holes(0, k + 1))}), 0, 0};
}

StepPlan plan_comm_tens(const Ctx& c) {
  require_comm(c, RKind::Tens, "comm-tens");
  std::size_t k = c.K - 1;
  Sequent A = c.sub(k, 0), B = c.sub(k, 1);
  std::size_t g = A.size() - 1, d = B.size() - 1;
  auto [zg, zd] = partition_tensor_premisses(c.mc.rel, c.mc.n, k, g);
  for (std::size_t p = 0; p < zg.size(); ++p) require(zg[p] == p, "comm-tens: premisses are not arranged Gamma-side first");
  std::size_t l = zd.size();
  // mcut' over Z_Gamma and |- Gamma, F
  std::vector<Sequent> p1(c.prem.begin(), c.prem.begin() + zg.size());
  p1.push_back(A);
  IndexMap pi1 = c.keep(zg.size());
  for (std::size_t j = 0; j < g; ++j) pi1[Coord{zg.size(), j}] = Coord{k, j};
  pi1[Coord{zg.size(), g}] = Coord{k, g + d};
  NewMcut m1 = remcut(p1, pi1, c.mc.rel, {});
  // mcut'' over Z_Delta and |- Delta, G
  std::vector<Sequent> p2;
  IndexMap pi2;
  for (std::size_t p = 0; p < l; ++p) {
    p2.push_back(c.prem[zd[p]]);
    for (std::size_t j = 0; j < c.prem[zd[p]].size(); ++j) pi2[Coord{p, j}] = Coord{zd[p], j};
  }
  p2.push_back(B);
  for (std::size_t j = 0; j < d; ++j) pi2[Coord{l, j}] = Coord{k, g + j};
  pi2[Coord{l, d}] = Coord{k, g + d};
  NewMcut m2 = remcut(p2, pi2, c.mc.rel, {});
  auto origins = origins_of(m1, pi1);
  origins.pop_back();  // F
  auto o2 = origins_of(m2, pi2);
  o2.pop_back();  // G
  origins.insert(origins.end(), o2.begin(), o2.end());
  origins.push_back(Coord{k, g + d});
  auto sigma = sigma_for(origins, uncut(c.mc.n, c.mc.rel));
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k), H(k + 1)}));
  auto r1 = holes(0, zg.size());
  r1.push_back(H(k));
  std::vector<P> r2;
  for (auto z : zd) r2.push_back(H(z));
  r2.push_back(H(k + 1));
  P rhs = N(exch_rule(sigma), {N(c.krule(k), {N(m1.rule, r1), N(m2.rule, r2)})});
  return StepPlan{N(c.rule, lk), rhs, 0, 0};
}

StepPlan plan_comm_one(const Ctx& c) {
  require(c.K == 1 && c.kind(0) == RKind::One && c.mc.rel.size() == 0, "comm-one: not a unary multicut over 1");
  return StepPlan{N(c.rule, {N(c.krule(0))}), N(c.krule(0)), 0, 0};
}

StepPlan plan_comm_ax(const Ctx& c) {
  require(c.K == 1 && c.kind(0) == RKind::Ax && c.mc.rel.size() == 0, "comm-ax: not a unary multicut over an axiom");
  return StepPlan{N(c.rule, {N(c.krule(0))}), N(c.krule(0)), 0, 0};
}

StepPlan plan_comm_with(const Ctx& c) {
  require_comm(c, RKind::With, "comm-with");
  std::size_t k = c.K - 1;
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k), H(k + 1)}));
  auto a = holes(0, k), b = holes(0, k);
  a.push_back(H(k));
  b.push_back(H(k + 1));
  return StepPlan{N(c.rule, lk), N(c.krule(k), {N(c.rule, a), N(c.rule, b)}), 0, 0};
}

StepPlan plan_comm_same(const Ctx& c, RKind kind, const char* what) {
  require_comm(c, kind, what);
  std::size_t k = c.K - 1;
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k)}));
  return StepPlan{N(c.rule, lk), N(c.krule(k), {N(c.rule, holes(0, k + 1))}), 0, 0};
}

StepPlan plan_comm_top(const Ctx& c) {
  require_comm(c, RKind::Top, "comm-top");
  std::size_t k = c.K - 1;
  Sequent xi = sequent_of(c.t.statement());
  xi.pop_back();
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k)));
  return StepPlan{N(c.rule, lk), N(top_rule(xi)), 0, 0};
}

StepPlan plan_comm_exch(const Ctx& c) {
  std::size_t k = c.K - 1;
  require(c.kind(k) == RKind::Exch, "comm-exch: last premiss is not an exchange");
  const auto& s = exch_sigma(c.krule(k));
  Sequent A = c.sub(k, 0);
  std::vector<Sequent> prem(c.prem.begin(), c.prem.begin() + k);
  prem.push_back(A);
  IndexMap pi = c.keep(k);
  for (std::size_t j = 0; j < A.size(); ++j) pi[Coord{k, j}] = Coord{k, s[j]};
  NewMcut m = remcut(prem, pi, c.mc.rel, {});
  auto sigma = sigma_for(origins_of(m, pi), uncut(c.mc.n, c.mc.rel));
  auto lk = holes(0, k);
  lk.push_back(N(c.krule(k), {H(k)}));
  return StepPlan{N(c.rule, lk), N(exch_rule(sigma), {N(m.rule, holes(0, k + 1))}), 0, 0};
}

}  // namespace

StepPlan plan_root_step(const DTree& t, const RootStep& st) {
  Ctx c(t);
  switch (st.kind) {
    case StepKind::MergeCutMcut: return plan_merge(c);
    case StepKind::PremissPerm: return plan_perm(c, st.tau);
    case StepKind::Ax: return plan_ax(c);
    case StepKind::TensorPar: return plan_tens_par(c);
    case StepKind::WithPlus: return plan_with_plus(c);
    case StepKind::MuNu: return plan_mu_nu(c);
    case StepKind::BotOne: return plan_bot_one(c);
    case StepKind::CommPar: return plan_comm_unary(c, RKind::Par, "comm-par");
    case StepKind::CommTensor: return plan_comm_tens(c);
    case StepKind::CommOne: return plan_comm_one(c);
    case StepKind::CommBot: return plan_comm_unary(c, RKind::Bot, "comm-bot");
    case StepKind::CommPlus: return plan_comm_same(c, RKind::Plus, "comm-plus");
    case StepKind::CommWith: return plan_comm_with(c);
    case StepKind::CommMu: return plan_comm_same(c, RKind::Mu, "comm-mu");
    case StepKind::CommNu: return plan_comm_same(c, RKind::Nu, "comm-nu");
    case StepKind::CommTop: return plan_comm_top(c);
    case StepKind::CommExch: return plan_comm_exch(c);
    case StepKind::CommAx: return plan_comm_ax(c);
  }
  throw InternalInvariant("bad step kind");
}

DTree apply_root_step(const RootStep& st, const DTree& t) {
  StepPlan plan = plan_root_step(t, st);
  auto hs = pattern_match(plan.lhs, t);
  if (!hs) throw InternalInvariant(st.name() + ": left-hand side does not match");
  DTree out = pattern_fill(plan.rhs, *hs);
  if (!(out.statement() == t.statement()))
    throw InternalInvariant(st.name() + " changed the conclusion " + t.statement().str() + " into " +
                            out.statement().str());
  return out;
}

std::vector<RootStep> applicable_root_steps(const DTree& t) {
  std::vector<RootStep> out;
  if (kind_of(t.resolved()) != RKind::Mcut) return out;
  for (const auto& n : kNames) {
    if (n.kind == StepKind::PremissPerm) continue;
    RootStep st{n.kind, {}};
    try {
      plan_root_step(t, st);
      out.push_back(st);
    } catch (const NotApplicable&) {
    }
  }
  return out;
}

namespace {

/// tau moving `back` (in order) to the end, the other premisses keeping their order.
std::vector<std::size_t> move_last(std::size_t K, const std::vector<std::size_t>& back) {
  std::vector<std::size_t> tau;
  for (std::size_t i = 0; i < K; ++i)
    if (std::find(back.begin(), back.end(), i) == back.end()) tau.push_back(i);
  tau.insert(tau.end(), back.begin(), back.end());
  return tau;
}

RootStep perm_or(const std::vector<std::size_t>& tau, StepKind k) {
  if (is_identity(tau)) return RootStep{k, {}};
  return RootStep{StepKind::PremissPerm, tau};
}

std::optional<StepKind> principal_kind(RKind a, RKind b) {
  if (a == RKind::Tens && b == RKind::Par) return StepKind::TensorPar;
  if (a == RKind::With && b == RKind::Plus) return StepKind::WithPlus;
  if (a == RKind::Mu && b == RKind::Nu) return StepKind::MuNu;
  if (a == RKind::Bot && b == RKind::One) return StepKind::BotOne;
  return std::nullopt;
}

std::optional<StepKind> comm_kind(RKind r) {
  switch (r) {
    case RKind::Par: return StepKind::CommPar;
    case RKind::Tens: return StepKind::CommTensor;
    case RKind::Bot: return StepKind::CommBot;
    case RKind::Plus: return StepKind::CommPlus;
    case RKind::With: return StepKind::CommWith;
    case RKind::Mu: return StepKind::CommMu;
    case RKind::Nu: return StepKind::CommNu;
    case RKind::Top: return StepKind::CommTop;
    case RKind::Exch: return StepKind::CommExch;
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<RootStep> strategy_step(const DTree& t) {
  Ctx c(t);
  std::size_t K = c.K;
  // housekeeping: absorb a cut premiss
  for (std::size_t i = 0; i < K; ++i)
    if (c.kind(i) == RKind::Cut) return perm_or(move_last(K, {i}), StepKind::MergeCutMcut);

  // principal: a pair of premisses whose principal formulas are cut together,
  // taken in place when the last two premisses form one
  for (auto k : {StepKind::Ax, StepKind::TensorPar, StepKind::WithPlus, StepKind::MuNu, StepKind::BotOne}) {
    try {
      plan_root_step(t, RootStep{k, {}});
      return RootStep{k, {}};
    } catch (const NotApplicable&) {
    }
  }
  for (const auto& [x, y] : c.mc.rel.pairs()) {
    for (auto [a, b] : {std::make_pair(x, y), std::make_pair(y, x)}) {
      auto ka = c.kind(a.i), kb = c.kind(b.i);
      if (!ka || !kb || a.i == b.i) continue;
      if (*ka == RKind::Ax && b.j == c.last(b.i))
        return perm_or(move_last(K, {a.i, b.i}), StepKind::Ax);
      if (a.j != c.last(a.i) || b.j != c.last(b.i)) continue;
      if (auto k = principal_kind(*ka, *kb)) return perm_or(move_last(K, {a.i, b.i}), *k);
    }
  }

  // commutative: prefer rules other than exchange, and the last premiss
  if (K == 1 && c.mc.rel.size() == 0) {
    if (c.kind(0) == RKind::One) return RootStep{StepKind::CommOne, {}};
    if (c.kind(0) == RKind::Ax) return RootStep{StepKind::CommAx, {}};
  }
  std::optional<std::size_t> pick;
  for (int pass = 0; pass < 2 && !pick; ++pass) {
    std::vector<std::size_t> order{K - 1};
    for (std::size_t i = 0; i + 1 < K; ++i) order.push_back(i);
    for (auto i : order) {
      auto r = c.kind(i);
      if (!r || !comm_kind(*r)) continue;
      bool exch = *r == RKind::Exch;
      if (exch != (pass == 1)) continue;
      if (!exch && !c.last_uncut(i)) continue;
      pick = i;
      break;
    }
  }
  if (!pick) return std::nullopt;
  std::size_t i = *pick;
  StepKind k = *comm_kind(*c.kind(i));
  if (k == StepKind::CommTensor) {
    std::size_t g = c.sub(i, 0).size() - 1;
    auto [zg, zd] = partition_tensor_premisses(c.mc.rel, c.mc.n, i, g);
    std::vector<std::size_t> tau = zg;
    tau.insert(tau.end(), zd.begin(), zd.end());
    tau.push_back(i);
    return perm_or(tau, k);
  }
  return perm_or(move_last(K, {i}), k);
}

std::vector<std::pair<std::string, DTree>> System::enumerate(const DTree& t) const {
  std::vector<std::pair<std::string, DTree>> out;
  for (const auto& st : applicable_root_steps(t)) out.emplace_back(st.name(), apply_root_step(st, t));
  if (kind_of(t.resolved()) == RKind::Mcut) {
    auto st = strategy_step(t);
    if (st && st->kind == StepKind::PremissPerm) out.emplace_back(st->name(), apply_root_step(*st, t));
  }
  return out;
}

DTree System::apply(const std::string& name, const DTree& t) const {
  RootStep st = RootStep::parse(name);
  try {
    return apply_root_step(st, t);
  } catch (const NotApplicable& e) {
    throw StepNotApplicable(e.what());
  }
}

QResult System::root_q(const Witness& w, const Step& st, Engine& e) const {
  DTree t = witness_target(w);
  StepPlan plan = plan_root_step(t, RootStep::parse(st.name));
  Engine::Extracted ex = e.pattern_extract(w, plan.lhs);
  QResult out;
  out.prefix = std::move(ex.prefix);
  out.prefix.push_back(Step{{}, st.name, 0});
  out.w = e.pattern_fill(plan.rhs, ex.holes, w.ordinal());
  return out;
}

std::vector<std::vector<std::size_t>> cuts_within(const DTree& t, std::size_t d, std::size_t budget) {
  std::vector<std::vector<std::size_t>> out;
  if (d == 0) return out;
  struct Item {
    DTree t;
    std::size_t depth;
    std::vector<std::size_t> path;
  };
  // 0-1 breadth-first: inductive premisses stay on the current level
  std::deque<Item> todo{{t, 0, {}}};
  std::vector<Item> found;
  std::size_t seen = 0;
  while (!todo.empty()) {
    Item it = std::move(todo.front());
    todo.pop_front();
    if (++seen > budget) throw NotRegular("cut search exceeded its budget");
    DTree r = it.t.resolved();
    auto k = kind_of(r);
    if (k == RKind::Cut || k == RKind::Mcut) found.push_back(it);
    auto cs = r.children();
    for (std::size_t i = cs.size(); i-- > 0;) {
      bool co = r.rule()->coind(i);
      std::size_t nd = it.depth + (co ? 1 : 0);
      if (nd >= d) continue;
      auto p = it.path;
      p.push_back(i);
      if (co)
        todo.push_back({cs[i], nd, std::move(p)});
      else
        todo.push_front({cs[i], nd, std::move(p)});
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const Item& a, const Item& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
  });
  for (auto& f : found) out.push_back(std::move(f.path));
  return out;
}

CutElimResult cut_elim_observe(const DTree& p, std::size_t d, std::size_t fuel) {
  System sys;
  CutElimResult res;
  DTree cur = p.resolved();
  if (kind_of(cur) == RKind::Cut) {
    Sequent s = sequent_of(cur.statement());
    cur = make_node(mcut_rule(1, {s.size()}, CutRel{}), {cur});
    res.wrapped = true;
  }
  while (true) {
    auto cuts = cuts_within(cur, d);
    if (cuts.empty()) break;
    const auto& path = cuts.front();
    DTree at = subtree_at(cur, path);
    if (kind_of(at.resolved()) == RKind::Cut) {
      res.stuck = StuckReport{"cut not under a multicut", path};
      break;
    }
    if (res.steps.size() >= fuel) {
      res.stuck = StuckReport{"fuel exhausted after " + std::to_string(res.steps.size()) + " steps", path};
      break;
    }
    auto st = strategy_step(at);
    if (!st) {
      res.stuck = StuckReport{"no step applies to the multicut", path};
      break;
    }
    Step step{path, st->name(), path_depth(cur, path)};
    cur = apply_step(cur, step, sys);
    res.steps.push_back(std::move(step));
  }
  res.reached = cur;
  res.truncation = truncate(cur, d);
  return res;
}

}  // namespace coind::mumall
