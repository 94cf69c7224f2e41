#include "coind/witness.hpp"

#include <deque>
#include <unordered_map>

#include "coind/text.hpp"

namespace coind {

namespace {

struct WHandleHash {
  std::size_t operator()(const WHandle& h) const { return std::hash<const void*>()(h.slot); }
};
struct WHandleEq {
  bool operator()(const WHandle& a, const WHandle& b) const { return a.slot == b.slot; }
};

struct TreeKey {
  TreeHandle h;
  bool full = false;
};
struct TreeKeyHash {
  std::size_t operator()(const TreeKey& k) const { return std::hash<const void*>()(k.h.slot) * 2 + k.full; }
};
struct TreeKeyEq {
  bool operator()(const TreeKey& a, const TreeKey& b) const { return a.h.slot == b.h.slot && a.full == b.full; }
};

std::optional<Statement> hint_of(const WHandle& h) { return h.slot->hint; }

std::vector<WRef> refs_of(WArena& a, const std::vector<Witness>& ws) {
  std::vector<WRef> out;
  out.reserve(ws.size());
  for (const auto& w : ws) out.push_back(a.ref(w.handle()));
  return out;
}

}  // namespace

Statement Witness::statement() const {
  if (h_.slot->hint) return *h_.slot->hint;
  const WNode& n = node();
  if (n.kind == WKind::Split) return n.src.statement();
  return n.stmt;
}

std::vector<Witness> Witness::kids() const {
  std::vector<Witness> out;
  for (auto& k : graph::kids(graph::resolve(h_))) out.emplace_back(std::move(k));
  return out;
}

Witness Witness::kid(std::size_t i) const { return Witness(graph::kid(graph::resolve(h_), i)); }

Witness WitnessBuilder::split(const Ordinal& g, DTree src, const std::vector<Segment>& segs, std::vector<Step> trail,
                              const Witness& final_hat) {
  WNode n;
  n.kind = WKind::Split;
  n.ord = g;
  Statement s = src.statement();
  n.src = std::move(src);
  n.trail = std::move(trail);
  std::vector<WRef> kids;
  for (const auto& seg : segs) {
    n.seg_steps.push_back(seg.steps);
    kids.push_back(arena_->ref(seg.hat.handle()));
  }
  kids.push_back(arena_->ref(final_hat.handle()));
  return Witness(arena_->handle(arena_->filled(std::move(n), std::move(kids), s)));
}

Witness WitnessBuilder::lift(const Ordinal& g, RulePtr rule, Statement stmt, const std::vector<Witness>& kids) {
  WNode n;
  n.kind = WKind::Lift;
  n.ord = g;
  n.rule = std::move(rule);
  n.stmt = stmt;
  return Witness(arena_->handle(arena_->filled(std::move(n), refs_of(*arena_, kids), stmt)));
}

Witness WitnessBuilder::binder(std::optional<Statement> s) {
  return Witness(arena_->handle(arena_->binder(std::move(s))));
}

void WitnessBuilder::bind(const Witness& binder, const Witness& body) {
  arena_->bind(binder.handle().slot, graph::Content<WNode>::to(arena_->ref(body.handle())));
}

// ---- views ---------------------------------------------------------------

struct WitnessViews::Impl {
  using C = graph::Corec<TreeNode, WHandle, WHandleHash, WHandleEq>;
  TreeArena* arena = nullptr;
  C* src = nullptr;
  C* tgt = nullptr;
};

WitnessViews::WitnessViews() : arena_(TreeArena::create()) {
  auto impl = std::make_shared<Impl>();
  impl->arena = arena_.get();
  Impl* self = impl.get();
  impl->src = Impl::C::create(arena_, [self](const WHandle& h) {
    Witness w(h);
    const WNode& n = w.node();
    if (n.kind == WKind::Split) return graph::Content<TreeNode>::to(self->arena->ref(n.src.handle()));
    std::vector<TreeRef> ks;
    for (const auto& k : w.kids()) ks.push_back(self->src->ref(k.handle(), hint_of(k.handle())));
    return graph::Content<TreeNode>::node(TreeNode{n.rule, n.stmt}, std::move(ks));
  });
  impl->tgt = Impl::C::create(arena_, [self](const WHandle& h) {
    Witness w(h);
    const WNode& n = w.node();
    if (n.kind == WKind::Split) {
      Witness f = w.final_hat();
      return graph::Content<TreeNode>::to(self->tgt->ref(f.handle(), hint_of(f.handle())));
    }
    std::vector<TreeRef> ks;
    for (const auto& k : w.kids()) ks.push_back(self->tgt->ref(k.handle(), hint_of(k.handle())));
    return graph::Content<TreeNode>::node(TreeNode{n.rule, n.stmt}, std::move(ks));
  });
  arena_->keep(impl);
  impl_ = self;
}

DTree WitnessViews::source(const Witness& w) {
  return DTree(impl_->src->get(w.handle(), hint_of(w.handle())));
}

DTree WitnessViews::target(const Witness& w) {
  return DTree(impl_->tgt->get(w.handle(), hint_of(w.handle())));
}

DTree witness_source(const Witness& w) {
  const WNode& n = w.node();
  if (n.kind == WKind::Split) return n.src;
  WitnessViews v;
  return v.source(w);
}

DTree witness_target(const Witness& w) {
  WitnessViews v;
  return v.target(w);
}

DTree target_truncation(const Witness& w, std::size_t d, std::size_t fuel) {
  return truncate(witness_target(w), d, fuel);
}

// ---- validation ----------------------------------------------------------

namespace {

bool lift_coind(const WNode& n, std::size_t i) { return n.kind == WKind::Lift && n.rule->coind(i); }

}  // namespace

bool witness_unguarded(const Witness& w, std::size_t budget) {
  auto g = graph::explore(w.handle(), budget);
  return graph::has_inductive_cycle(g, lift_coind);
}

std::vector<Violation> validate_witness(const Witness& w, const RewriteSystem& sys, const ValidateOptions& opt) {
  std::vector<Violation> out;
  auto add = [&](const char* tag, std::string msg) { out.push_back(Violation{tag, std::move(msg)}); };

  bool guarded = true;
  try {
    if (witness_unguarded(w, opt.node_budget)) {
      guarded = false;
      add(vtag::kUnguarded, "unguarded cycle: a witness loop crosses no coinductive lift premiss");
    }
  } catch (const NonProductive& e) {
    add(vtag::kUnproductive, e.what());
    return out;
  }

  WitnessViews views;
  std::unordered_map<const void*, std::size_t> level;
  std::deque<std::pair<Witness, std::size_t>> work;
  work.emplace_back(w, 0);
  std::vector<std::pair<Witness, std::size_t>> order;
  while (!work.empty()) {
    auto [x, lv] = work.front();
    work.pop_front();
    if (lv > opt.depth) continue;
    Witness r;
    try {
      r = x.resolved();
    } catch (const NonProductive& e) {
      add(vtag::kUnproductive, e.what());
      continue;
    }
    auto it = level.find(r.id());
    if (it != level.end() && it->second <= lv) continue;
    level[r.id()] = lv;
    if (level.size() > opt.node_budget) break;
    order.emplace_back(r, lv);
    const WNode& n = r.node();
    auto ks = r.kids();
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (lift_coind(n, i))
        work.emplace_back(ks[i], lv + 1);
      else
        work.emplace_front(ks[i], lv);
    }
  }

  auto safe_kind = [](const Witness& k) -> std::optional<WKind> {
    try {
      return k.kind();
    } catch (const NonProductive&) {
      return std::nullopt;
    }
  };

  for (const auto& [r, lv] : order) {
    if (level[r.id()] != lv) continue;
    const WNode& n = r.node();
    auto ks = r.kids();
    std::string at = " (" + std::string(n.kind == WKind::Split ? "split" : "lift") + "@" + n.ord.str() +
                     " at level " + std::to_string(lv) + ")";
    if (n.kind == WKind::Split) {
      std::size_t m = n.seg_steps.size();
      if (ks.size() != m + 1) {
        add(vtag::kKind, "split node has " + std::to_string(ks.size()) + " hats for " + std::to_string(m) +
                             " segments" + at);
        continue;
      }
      bool shapes_ok = true;
      for (std::size_t i = 0; i <= m; ++i) {
        auto k = safe_kind(ks[i]);
        if (k != WKind::Lift) {
          shapes_ok = false;
          add(vtag::kKind, (i < m ? "segment " + std::to_string(i + 1) : std::string("final")) +
                               " is not a lift" + at);
          continue;
        }
        const Ordinal& d = ks[i].ordinal();
        if (i < m && !(d < n.ord))
          add(vtag::kOrdinal, "segment ordinal not < γ: segment " + std::to_string(i + 1) + " at " + d.str() +
                                  at);
        if (i == m && !(d == n.ord)) add(vtag::kFinalOrdinal, "final hat at " + d.str() + at);
      }
      if (!(n.src.statement() == ks[m].statement()))
        add(vtag::kConclusion, "source concludes " + n.src.statement().str() + " but final hat concludes " +
                                   ks[m].statement().str() + at);
      if (!shapes_ok || !guarded || !opt.check_endpoints) continue;
      std::size_t e = opt.depth - lv;
      try {
        DTree cur = n.src;
        for (std::size_t i = 0; i <= m; ++i) {
          const auto& steps = i < m ? n.seg_steps[i] : n.trail;
          try {
            cur = replay(cur, steps, sys);
          } catch (const StepNotApplicable& ex) {
            add(vtag::kBadStep, std::string("step not applicable: ") + ex.what() + at);
            break;
          } catch (const BadPath& ex) {
            add(vtag::kBadStep, ex.what() + at);
            break;
          }
          DTree hs = views.source(ks[i]);
          if (!agree_to_depth(cur, hs, e)) {
            add(vtag::kEndpoint, "endpoint mismatch before " +
                                     (i < m ? "segment " + std::to_string(i + 1) : std::string("final hat")) +
                                     ": " + print_tree(truncate(cur, e)) + " vs " + print_tree(truncate(hs, e)) + at);
            break;
          }
          cur = views.target(ks[i]);
        }
      } catch (const NonProductive& ex) {
        add(vtag::kUnproductive, ex.what() + at);
      }
    } else {
      if (ks.size() != n.rule->arity()) {
        add(vtag::kKind, "lift " + n.rule->key() + " has " + std::to_string(ks.size()) + " premisses" + at);
        continue;
      }
      std::vector<Statement> prem;
      bool shapes_ok = true;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        auto k = safe_kind(ks[i]);
        if (k != WKind::Split) {
          shapes_ok = false;
          add(vtag::kKind, "premiss " + std::to_string(i + 1) + " of lift " + n.rule->key() + " is not a split" + at);
          continue;
        }
        if (!(ks[i].ordinal() == n.ord))
          add(vtag::kLiftOrdinal, "premiss " + std::to_string(i + 1) + " at " + ks[i].ordinal().str() + at);
        prem.push_back(ks[i].statement());
      }
      if (!shapes_ok) continue;
      try {
        Statement s = n.rule->conclude(prem);
        if (!(s == n.stmt))
          add(vtag::kConclusion, n.rule->key() + " concludes " + s.str() + ", node says " + n.stmt.str() + at);
      } catch (const DomainError& ex) {
        add(vtag::kConclusion, ex.what() + at);
      }
    }
  }
  return out;
}

// ---- constructions -------------------------------------------------------

Witness refl_hat(const DTree& t, const Ordinal& g) {
  using C = graph::Corec<WNode, TreeKey, TreeKeyHash, TreeKeyEq>;
  auto arena = WArena::create();
  C** cell = new C*(nullptr);
  std::shared_ptr<C*> own(cell);
  C* c = C::create(arena, [cell, g](const TreeKey& k) {
    C* self = *cell;
    DTree x(k.h);
    if (k.full) {
      WNode n;
      n.kind = WKind::Split;
      n.ord = g;
      n.src = x;
      return graph::Content<WNode>::node(std::move(n), {self->ref(TreeKey{k.h, false}, x.statement())});
    }
    DTree r = x.resolved();
    WNode n;
    n.kind = WKind::Lift;
    n.ord = g;
    n.rule = r.rule();
    n.stmt = r.node().stmt;
    std::vector<WRef> ks;
    for (const auto& ch : r.children()) ks.push_back(self->ref(TreeKey{ch.handle(), true}, ch.handle().slot->hint));
    return graph::Content<WNode>::node(std::move(n), std::move(ks));
  });
  *cell = c;
  arena->keep(own);
  return Witness(c->get(TreeKey{t.handle(), false}, t.statement()));
}

Witness refl_full(const DTree& t, const Ordinal& g) {
  WitnessBuilder b;
  return b.split(g, t, {}, {}, refl_hat(t, g));
}

Witness weaken(const Witness& w, const Ordinal& d) {
  const Ordinal g = w.ordinal();
  if (d < g) throw OrdinalNotLarger("cannot weaken from " + g.str() + " down to " + d.str());
  if (d == g) return w;
  using C = graph::Corec<WNode, WHandle, WHandleHash, WHandleEq>;
  auto arena = WArena::create();
  auto cell = std::make_shared<C*>(nullptr);
  C** pc = cell.get();
  WArena* a = arena.get();
  C* c = C::create(arena, [pc, a, d](const WHandle& h) {
    C* self = *pc;
    Witness x(h);
    WNode n = x.node();
    n.ord = d;
    auto ks = x.kids();
    std::vector<WRef> refs;
    if (n.kind == WKind::Split) {
      for (std::size_t i = 0; i + 1 < ks.size(); ++i) refs.push_back(a->ref(ks[i].handle()));
      refs.push_back(self->ref(ks.back().handle(), hint_of(ks.back().handle())));
    } else {
      for (const auto& k : ks) refs.push_back(self->ref(k.handle(), hint_of(k.handle())));
    }
    return graph::Content<WNode>::node(std::move(n), std::move(refs));
  });
  *cell = c;
  arena->keep(cell);
  return Witness(c->get(w.handle(), hint_of(w.handle())));
}

Witness concat_hat(const Witness& a, const Witness& b, std::size_t check_depth) {
  Witness A = a.resolved();
  Witness B = b.resolved();
  if (!A.is_lift() || !B.is_lift()) throw EndpointMismatch("concatenation of a non-hat witness");
  const WNode& na = A.node();
  const WNode& nb = B.node();
  if (!same_rule(na.rule, nb.rule))
    throw EndpointMismatch("hat rules differ: " + na.rule->key() + " vs " + nb.rule->key());
  if (!(na.stmt == nb.stmt)) throw EndpointMismatch("hat conclusions differ: " + na.stmt.str() + " vs " + nb.stmt.str());
  Ordinal e = ord_max_succ(na.ord, nb.ord);
  auto ka = A.kids();
  auto kb = B.kids();
  if (ka.size() != kb.size()) throw EndpointMismatch("hat arities differ");
  WitnessBuilder wb;
  std::optional<WitnessViews> views;
  std::vector<Witness> kids;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    Witness ai = ka[i].resolved();
    Witness bi = kb[i].resolved();
    if (!ai.is_split() || !bi.is_split()) throw EndpointMismatch("premiss of a hat is not a split");
    const WNode& x = ai.node();
    const WNode& y = bi.node();
    if (check_depth > 0) {
      if (!views) views.emplace();
      if (!agree_to_depth(views->target(ai), y.src, check_depth))
        throw EndpointMismatch("premiss " + std::to_string(i + 1) + ": target and next source differ");
    }
    auto ax = ai.kids();
    auto bx = bi.kids();
    std::vector<Segment> segs;
    for (std::size_t j = 0; j < x.seg_steps.size(); ++j) segs.push_back(Segment{x.seg_steps[j], ax[j]});
    segs.push_back(Segment{x.trail, ax.back()});
    for (std::size_t j = 0; j < y.seg_steps.size(); ++j) segs.push_back(Segment{y.seg_steps[j], bx[j]});
    kids.push_back(wb.split(e, x.src, segs, y.trail, weaken(bx.back(), e)));
  }
  return wb.lift(e, na.rule, na.stmt, kids);
}

Witness hat_to_full(const Witness& h) {
  WitnessBuilder b;
  return b.split(h.ordinal(), witness_source(h), {}, {}, h);
}

// ---- text ----------------------------------------------------------------

namespace {

struct WitnessParser {
  Cursor& c;
  const RuleFamily& fam;
  WitnessBuilder& wb;
  TreeBuilder& tb;
  std::vector<std::pair<std::string, Witness>> scope;
  std::vector<std::pair<Witness, std::optional<Statement>>> binders;

  Ordinal ordinal() {
    c.skip_ws();
    std::string t = c.until(" \t\r\n{");
    if (t.empty()) c.fail("expected an ordinal");
    try {
      return Ordinal::parse(t);
    } catch (const SyntaxError& e) {
      c.fail(std::string("bad ordinal: ") + e.what());
    }
  }

  Witness parse() {
    if (c.accept_word("rec")) {
      std::string label = c.ident();
      std::optional<Statement> s;
      if (c.accept("["))
        s = fam.parse_statement(c.balanced('[', ']'));
      else if (fam.has_default_statement())
        s = fam.default_statement();
      c.expect(".");
      Witness bnd = wb.binder(s);
      scope.emplace_back(label, bnd);
      Witness body = parse();
      scope.pop_back();
      wb.bind(bnd, body);
      binders.emplace_back(bnd, s);
      return bnd;
    }
    if (c.accept("split@")) {
      Ordinal g = ordinal();
      c.expect("{");
      c.accept_word("src");
      c.expect(":");
      DTree src = parse_tree(c, fam, tb);
      std::vector<Segment> segs;
      std::vector<Step> trail;
      bool have_trail = false;
      std::optional<Witness> fin;
      while (c.accept(";")) {
        if (c.accept_word("seg")) {
          if (have_trail) c.fail("segments must precede the trailing steps");
          auto st = parse_steps(c);
          segs.push_back(Segment{std::move(st), parse()});
        } else if (c.accept_word("steps")) {
          trail = parse_steps(c);
          have_trail = true;
        } else if (c.accept_word("final")) {
          fin = parse();
        } else {
          c.fail("expected 'seg', 'steps' or 'final'");
        }
      }
      c.expect("}");
      if (!fin) c.fail("split without a final hat");
      return wb.split(g, src, segs, trail, *fin);
    }
    if (c.accept("lift@")) {
      Ordinal g = ordinal();
      auto [line, col] = c.line_col();
      RuleHead h = parse_rule_head(c);
      std::vector<Witness> kids;
      if (c.accept("(")) {
        if (!c.accept(")")) {
          do kids.push_back(parse());
          while (c.accept(","));
          c.expect(")");
        }
      }
      try {
        RulePtr r = fam.make_rule(h.name, h.params, h.paren, kids.size());
        std::vector<Statement> prem;
        for (const auto& k : kids) {
          if (!k.handle().slot->hint) throw DomainError("premiss statement unknown; annotate the rec binder");
          prem.push_back(*k.handle().slot->hint);
        }
        Statement s = r->conclude(prem);
        return wb.lift(g, r, s, kids);
      } catch (const DomainError& e) {
        throw SyntaxError(e.what(), line, col);
      }
    }
    if (c.accept("refl@")) {
      Ordinal g = ordinal();
      return refl_hat(parse_tree(c, fam, tb), g);
    }
    if (c.accept("id@")) {
      Ordinal g = ordinal();
      return refl_full(parse_tree(c, fam, tb), g);
    }
    auto [line, col] = c.line_col();
    if (!c.at_ident()) c.fail(c.at_end() ? "unexpected end of input" : "expected a witness");
    std::string l = c.ident();
    for (auto it = scope.rbegin(); it != scope.rend(); ++it)
      if (it->first == l) return it->second;
    throw UnboundBackEdge("unbound label '" + l + "'", line, col);
  }
};

}  // namespace

Witness parse_witness(std::string_view text, const RuleFamily& fam) {
  Cursor c(text);
  WitnessBuilder wb;
  TreeBuilder tb;
  WitnessParser p{c, fam, wb, tb, {}, {}};
  Witness w = p.parse();
  if (!c.at_end()) c.fail("unexpected trailing input");
  for (const auto& [bnd, s] : p.binders) {
    Witness r = bnd.resolved();
    Statement actual = r.is_split() ? r.node().src.statement() : r.node().stmt;
    if (s && !(actual == *s))
      throw DomainError("rec binder annotated " + s->str() + " but its body concludes " + actual.str());
  }
  return w;
}

std::string print_witness(const Witness& w, std::size_t budget) {
  auto render = [](const WHandle& h, const std::vector<std::string>& ks) {
    const WNode& n = graph::payload(h);
    if (n.kind == WKind::Lift) {
      std::string out = "lift@" + n.ord.str() + " " + n.rule->key();
      if (ks.empty()) return out;
      out += "(";
      for (std::size_t i = 0; i < ks.size(); ++i) {
        if (i) out += ", ";
        out += ks[i];
      }
      return out + ")";
    }
    std::string out = "split@" + n.ord.str() + "{ src: " + print_tree(n.src);
    for (std::size_t i = 0; i < n.seg_steps.size(); ++i) out += " ; seg " + steps_str(n.seg_steps[i]) + " " + ks[i];
    out += " ; steps " + steps_str(n.trail) + " ; final " + ks.back() + " }";
    return out;
  };
  auto annot = [](const WHandle& h) -> std::string {
    const WNode& n = graph::payload(h);
    Statement s = n.kind == WKind::Split ? n.src.statement() : n.stmt;
    return s.is_unit() ? "" : "[" + s.str() + "]";
  };
  return print_graph(w.handle(), render, annot, {"split", "lift", "refl", "rec"}, budget);
}

std::size_t witness_state_count(const Witness& w, std::size_t budget) {
  auto g = graph::explore(w.handle(), budget);
  if (!g.complete) throw NotRegular("witness state graph exceeds its budget");
  return g.nodes.size();
}

bool witness_bisimilar(const Witness& a, const Witness& b, std::size_t budget) {
  auto eq = [budget](const WNode& x, const WNode& y) {
    if (x.kind != y.kind || !(x.ord == y.ord)) return false;
    if (x.kind == WKind::Lift) return same_rule(x.rule, y.rule) && x.stmt == y.stmt;
    return x.seg_steps == y.seg_steps && x.trail == y.trail && bisimilar(x.src, y.src, budget);
  };
  return graph::bisimilar(a.handle(), b.handle(), eq, budget);
}

}  // namespace coind
