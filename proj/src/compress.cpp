#include "coind/compress.hpp"

#include <algorithm>
#include <unordered_map>

namespace coind {

namespace {

struct WHandleHash {
  std::size_t operator()(const WHandle& h) const { return std::hash<const void*>()(h.slot); }
};
struct WHandleEq {
  bool operator()(const WHandle& a, const WHandle& b) const { return a.slot == b.slot; }
};

void append(std::vector<Step>& a, const std::vector<Step>& b) { a.insert(a.end(), b.begin(), b.end()); }

}  // namespace

Engine::Engine(std::shared_ptr<const QInstance> inst, EngineOptions opt) : inst_(std::move(inst)), opt_(opt) {}

void Engine::burn() {
  if (++used_ > opt_.fuel) throw NonProductive("compression exhausted its fuel before producing the next rule");
}

HatResult Engine::prepone_zero_steps(const Witness& w) {
  Witness W = w.resolved();
  if (W.is_lift()) return HatResult{{}, W};
  const WNode& n = W.node();
  auto ks = W.kids();
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < n.seg_steps.size(); ++i) segs.push_back(Segment{n.seg_steps[i], ks[i]});
  PreponeResult r = prepone_sequence(n.ord, segs, n.trail);
  Witness h = ks.back();
  for (auto it = r.chain.rbegin(); it != r.chain.rend(); ++it) h = concat_hat(*it, h, 0);
  return HatResult{std::move(r.prefix), h};
}

PreponeResult Engine::prepone_sequence(const Ordinal& gamma, const std::vector<Segment>& segs,
                                       const std::vector<Step>& trail) {
  PreponeResult out;
  std::vector<Step> cur = trail;
  std::vector<Witness> rev;
  for (std::size_t k = segs.size(); k-- > 0;) {
    Witness hat = segs[k].hat;
    const Ordinal d = hat.ordinal();
    if (!(d < gamma))
      throw OrdinalViolation("segment " + std::to_string(k + 1) + " at " + d.str() + " is not below " + gamma.str());
    std::vector<Step> acc;
    for (const auto& st : cur) {
      HatResult q = q_hat(hat, st);
      append(acc, q.prefix);
      hat = q.hat;
    }
    std::vector<Step> next = segs[k].steps;
    append(next, acc);
    cur = std::move(next);
    rev.push_back(hat);
    out.eps = ord_max(out.eps, d);
  }
  out.prefix = std::move(cur);
  out.chain.assign(rev.rbegin(), rev.rend());
  return out;
}

HatResult Engine::q_hat(const Witness& hat, const Step& st) {
  QResult q = q_step(hat_to_full(hat), st);
  HatResult h = prepone_zero_steps(q.w);
  std::vector<Step> prefix = std::move(q.prefix);
  append(prefix, h.prefix);
  return HatResult{std::move(prefix), h.hat};
}

QResult Engine::q_step(const Witness& w, const Step& st) {
  burn();
  if (st.path.empty()) return inst_->root_q(w, st, *this);
  HatResult p = prepone_zero_steps(w);
  Witness H = p.hat.resolved();
  const WNode& n = H.node();
  std::size_t i = st.path.front();
  if (i >= n.rule->arity())
    throw BadPath("step " + st.str() + " leaves the tree at premiss " + std::to_string(i + 1));
  Step sub{std::vector<std::size_t>(st.path.begin() + 1, st.path.end()), st.name, 0};
  auto kids = H.kids();
  QResult r = q_step(kids[i], sub);
  kids[i] = r.w;
  std::vector<Step> prefix = std::move(p.prefix);
  append(prefix, lift_steps(r.prefix, i, n.rule->coind(i)));
  WitnessBuilder b;
  Witness lifted = b.lift(n.ord, n.rule, n.stmt, kids);
  return QResult{std::move(prefix), hat_to_full(lifted)};
}

Engine::Extracted Engine::pattern_extract(const Witness& w, const Pattern& p) {
  Extracted out;
  out.holes.resize(p.arity());
  struct Rec {
    Engine& e;
    Extracted& out;
    void go(const Witness& w, const Pattern& p, std::vector<std::pair<std::size_t, bool>>& under) {
      if (p.is_hole()) {
        out.holes[*p.hole] = w;
        return;
      }
      HatResult h = e.prepone_zero_steps(w);
      std::vector<Step> pre = std::move(h.prefix);
      for (auto it = under.rbegin(); it != under.rend(); ++it) pre = lift_steps(pre, it->first, it->second);
      append(out.prefix, pre);
      Witness H = h.hat.resolved();
      const WNode& n = H.node();
      if (!same_rule(n.rule, p.rule))
        throw ShapeMismatch("witness lifts " + n.rule->key() + " where the pattern expects " + p.rule->key());
      auto ks = H.kids();
      for (std::size_t i = 0; i < ks.size(); ++i) {
        under.emplace_back(i, n.rule->coind(i));
        go(ks[i], p.kids[i], under);
        under.pop_back();
      }
    }
  };
  std::vector<std::pair<std::size_t, bool>> under;
  Rec{*this, out}.go(w, p, under);
  return out;
}

Witness Engine::pattern_fill(const Pattern& q, const std::vector<Witness>& holes, const Ordinal& d) {
  if (q.is_hole()) {
    if (*q.hole >= holes.size() || !holes[*q.hole].valid())
      throw MissingVariableWitness("no witness for hole $" + std::to_string(*q.hole + 1));
    return holes[*q.hole];
  }
  std::vector<Witness> kids;
  std::vector<Statement> prem;
  for (const auto& k : q.kids) {
    kids.push_back(pattern_fill(k, holes, d));
    prem.push_back(kids.back().statement());
  }
  Statement s = q.rule->conclude(prem);
  WitnessBuilder b;
  return hat_to_full(b.lift(d, q.rule, s, kids));
}

Witness Engine::compress(const Witness& w) const {
  using C = graph::Corec<WNode, WHandle, WHandleHash, WHandleEq>;
  auto arena = WArena::create();
  auto cell = std::make_shared<C*>(nullptr);
  C** pc = cell.get();
  WArena* a = arena.get();
  Engine proto = *this;
  proto.used_ = 0;
  C* c = C::create(arena, [pc, a, proto](const WHandle& h) {
    C* self = *pc;
    Engine e = proto;
    Witness W(h);
    HatResult r = e.prepone_zero_steps(W);
    Witness H = r.hat.resolved();
    const WNode& hn = H.node();
    WNode lift;
    lift.kind = WKind::Lift;
    lift.rule = hn.rule;
    lift.stmt = hn.stmt;
    std::vector<WRef> ks;
    for (const auto& k : H.kids()) ks.push_back(self->ref(k.handle(), k.handle().slot->hint));
    const auto* ls = a->filled(std::move(lift), std::move(ks), hn.stmt);
    WNode split;
    split.kind = WKind::Split;
    split.src = witness_source(W);
    split.trail = std::move(r.prefix);
    return graph::Content<WNode>::node(std::move(split), {a->local(ls)});
  });
  *cell = c;
  arena->keep(cell);
  return Witness(c->get(w.handle(), w.handle().slot->hint));
}

bool is_omega_shaped(const Witness& w, std::size_t budget) {
  auto g = graph::explore(w.handle(), budget);
  if (!g.complete) throw NotRegular("witness state graph exceeds its budget");
  for (const auto& h : g.nodes) {
    const WNode& n = graph::payload(h);
    if (n.kind == WKind::Split && !n.seg_steps.empty()) return false;
  }
  return true;
}

Observation observe_omega(const Witness& w, std::size_t d, const RewriteSystem& sys, std::size_t fuel) {
  struct Item {
    std::size_t level;
    std::size_t seq;
    std::vector<Step> steps;
  };
  std::vector<Item> items;
  struct Frame {
    Witness w;
    std::vector<std::size_t> path;
    std::size_t level;
  };
  std::vector<Frame> stack{{w, {}, 0}};
  std::size_t seq = 0;
  std::size_t visited = 0;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.level >= d) continue;
    if (++visited > fuel) throw NonProductive("observation exhausted its fuel");
    Witness W = f.w.resolved();
    const WNode& n = W.node();
    if (n.kind == WKind::Split) {
      if (!n.seg_steps.empty()) throw DomainError("observe_omega needs an omega-witness (split with segments found)");
      if (!n.trail.empty()) {
        Item it{f.level, seq++, {}};
        for (const auto& st : n.trail) {
          Step s = st;
          s.path.insert(s.path.begin(), f.path.begin(), f.path.end());
          s.depth = st.depth + f.level;
          it.steps.push_back(std::move(s));
        }
        items.push_back(std::move(it));
      }
      stack.push_back(Frame{W.final_hat(), f.path, f.level});
    } else {
      auto ks = W.kids();
      for (std::size_t i = ks.size(); i-- > 0;) {
        auto p = f.path;
        p.push_back(i);
        stack.push_back(Frame{ks[i], std::move(p), f.level + (n.rule->coind(i) ? 1 : 0)});
      }
    }
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.level < b.level || (a.level == b.level && a.seq < b.seq); });
  Observation out;
  for (auto& it : items) append(out.steps, it.steps);
  DTree src = witness_source(w);
  out.reached = replay_located(src, out.steps, sys);
  out.certificate = truncate(out.reached, d);
  return out;
}

}  // namespace coind
