#include "coind/dtree.hpp"

#include <cmath>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace coind {

namespace {

struct SlotDepthHash {
  std::size_t operator()(const std::pair<const void*, std::size_t>& p) const {
    return std::hash<const void*>()(p.first) * 31 + p.second;
  }
};

bool same_node(const TreeNode& a, const TreeNode& b) {
  return same_rule(*a.rule, *b.rule) && a.stmt == b.stmt;
}

}  // namespace

Statement DTree::statement() const {
  if (h_.slot->hint) return *h_.slot->hint;
  return node().stmt;
}

DTree DTree::child(std::size_t i) const {
  TreeHandle r = graph::resolve(h_);
  return DTree(graph::kid(r, i));
}

std::vector<DTree> DTree::children() const {
  TreeHandle r = graph::resolve(h_);
  std::vector<DTree> out;
  for (auto& k : graph::kids(r)) out.emplace_back(std::move(k));
  return out;
}

DTree TreeBuilder::node(RulePtr r, const std::vector<DTree>& kids) {
  std::vector<Statement> stmts;
  stmts.reserve(kids.size());
  for (const auto& k : kids) stmts.push_back(k.statement());
  Statement s = r->conclude(stmts);
  return node_unchecked(std::move(r), kids, std::move(s));
}

DTree TreeBuilder::node_unchecked(RulePtr r, const std::vector<DTree>& kids, Statement s) {
  if (kids.size() != r->arity())
    throw DomainError(r->key() + ": expected " + std::to_string(r->arity()) + " premisses, got " +
                      std::to_string(kids.size()));
  std::vector<TreeRef> refs;
  refs.reserve(kids.size());
  for (const auto& k : kids) refs.push_back(arena_->ref(k.handle()));
  const auto* slot = arena_->filled(TreeNode{std::move(r), s}, std::move(refs), s);
  return DTree(arena_->handle(slot));
}

DTree TreeBuilder::trunc(const Statement& s) { return node_unchecked(trunc_rule(s), {}, s); }

DTree TreeBuilder::binder(std::optional<Statement> s) {
  return DTree(arena_->handle(arena_->binder(std::move(s))));
}

void TreeBuilder::bind(const DTree& binder, const DTree& body) {
  arena_->bind(binder.handle().slot, graph::Content<TreeNode>::to(arena_->ref(body.handle())));
}

DTree TreeBuilder::thunk(std::optional<Statement> s, std::function<DTree()> gen) {
  TreeArena* a = arena_.get();
  const auto* slot = arena_->pending(
      [a, gen = std::move(gen)]() { return graph::Content<TreeNode>::to(a->ref(gen().handle())); },
      std::move(s));
  return DTree(arena_->handle(slot));
}

DTree make_node(RulePtr r, const std::vector<DTree>& kids) {
  TreeBuilder b;
  return b.node(std::move(r), kids);
}

DTree make_trunc(const Statement& s) {
  TreeBuilder b;
  return b.trunc(s);
}

std::pair<RulePtr, std::vector<DTree>> tree_unfold(const DTree& t) {
  DTree r = t.resolved();
  return {r.rule(), r.children()};
}

DTree truncate(const DTree& t, std::size_t d, std::size_t fuel) {
  TreeBuilder b;
  std::unordered_map<std::pair<const void*, std::size_t>, DTree, SlotDepthHash> memo;
  std::unordered_set<std::pair<const void*, std::size_t>, SlotDepthHash> active;
  std::size_t count = 0;
  std::function<DTree(const DTree&, std::size_t)> rec = [&](const DTree& x, std::size_t k) -> DTree {
    if (k == 0) return b.trunc(x.statement());
    DTree r = x.resolved();
    auto key = std::make_pair(r.handle().slot, k);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    if (!active.insert(key).second) throw NonProductive("truncation met a cycle of inductive premisses");
    if (++count > fuel) throw NonProductive("truncation exceeded its fuel");
    const TreeNode& n = r.node();
    std::vector<DTree> kids;
    auto cs = r.children();
    kids.reserve(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) kids.push_back(rec(cs[i], k - (n.rule->coind(i) ? 1 : 0)));
    DTree out = b.node_unchecked(n.rule, kids, n.stmt);
    active.erase(key);
    memo.emplace(key, out);
    return out;
  };
  return rec(t, d);
}

double Distance::value() const { return std::ldexp(1.0, -static_cast<int>(exponent)); }

std::string Distance::str() const {
  std::string e = "2^-" + std::to_string(exponent);
  return decided ? e : "<=" + e;
}

std::optional<std::size_t> first_disagreement(const DTree& s, const DTree& t, std::size_t max_d,
                                              std::size_t budget) {
  // 0-1 breadth-first search over node pairs, keyed by coinductive level.
  std::unordered_map<std::pair<const void*, const void*>, std::size_t, graph::PtrPairHash> level;
  std::deque<std::tuple<DTree, DTree, std::size_t>> work;
  work.emplace_back(s, t, 0);
  std::optional<std::size_t> best;
  while (!work.empty()) {
    auto [x, y, lv] = work.front();
    work.pop_front();
    if (lv > max_d) continue;
    if (best && lv >= *best) continue;
    if (x.statement() != y.statement()) {
      best = best ? std::min(*best, lv) : lv;
      continue;
    }
    if (lv == max_d) continue;
    DTree rx = x.resolved();
    DTree ry = y.resolved();
    auto key = std::make_pair<const void*, const void*>(rx.handle().slot, ry.handle().slot);
    if (key.first == key.second) continue;
    auto it = level.find(key);
    if (it != level.end() && it->second <= lv) continue;
    level[key] = lv;
    if (level.size() > budget) throw NotRegular("distance exceeded its pair budget");
    const TreeNode& nx = rx.node();
    const TreeNode& ny = ry.node();
    if (!same_rule(*nx.rule, *ny.rule)) {
      best = best ? std::min(*best, lv + 1) : lv + 1;
      continue;
    }
    auto kx = rx.children();
    auto ky = ry.children();
    for (std::size_t i = 0; i < kx.size(); ++i) {
      if (nx.rule->coind(i))
        work.emplace_back(kx[i], ky[i], lv + 1);
      else
        work.emplace_front(kx[i], ky[i], lv);
    }
  }
  if (best && *best <= max_d) return best;
  return std::nullopt;
}

Distance tree_distance(const DTree& s, const DTree& t, std::size_t budget) {
  auto d = first_disagreement(s, t, budget);
  if (!d) return Distance{false, budget};
  return Distance{true, *d - 1};
}

bool agree_to_depth(const DTree& s, const DTree& t, std::size_t d) {
  return !first_disagreement(s, t, d).has_value();
}

bool bisimilar(const DTree& s, const DTree& t, std::size_t budget) {
  return graph::bisimilar(s.handle(), t.handle(), same_node, budget);
}

bool finite_equal(const DTree& s, const DTree& t) {
  return graph::bisimilar(s.handle(), t.handle(), same_node, kDefaultPairBudget);
}

bool has_unguarded_cycle(const DTree& t, std::size_t budget) {
  graph::StateGraph<TreeNode> g;
  try {
    g = graph::explore(t.handle(), budget);
  } catch (const NonProductive&) {
    return true;
  }
  return graph::has_inductive_cycle(g, [](const TreeNode& n, std::size_t i) { return n.rule->coind(i); });
}

std::vector<std::string> check_conclusions(const DTree& t, std::size_t depth) {
  std::vector<std::string> out;
  std::unordered_set<std::pair<const void*, std::size_t>, SlotDepthHash> seen;
  std::vector<std::pair<DTree, std::size_t>> work{{t, depth}};
  while (!work.empty()) {
    auto [x, k] = work.back();
    work.pop_back();
    DTree r = x.resolved();
    if (!seen.insert({r.handle().slot, k}).second) continue;
    const TreeNode& n = r.node();
    auto cs = r.children();
    std::vector<Statement> prem;
    for (const auto& c : cs) prem.push_back(c.statement());
    try {
      Statement s = n.rule->conclude(prem);
      if (!(s == n.stmt)) out.push_back(n.rule->key() + ": conclusion " + n.stmt.str() + " differs from " + s.str());
    } catch (const DomainError& e) {
      out.push_back(e.what());
    }
    if (k == 0) continue;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      bool co = n.rule->coind(i);
      if (co && k == 0) continue;
      work.emplace_back(cs[i], co ? k - 1 : k);
    }
  }
  return out;
}

std::size_t state_count(const DTree& t, std::size_t budget) {
  auto g = graph::explore(t.handle(), budget);
  if (!g.complete) throw NotRegular("state graph exceeds its budget");
  return g.nodes.size();
}

DTree subtree_at(const DTree& t, const std::vector<std::size_t>& path) {
  DTree cur = t;
  for (std::size_t i : path) {
    DTree r = cur.resolved();
    if (i >= r.arity()) throw BadPath("path leaves the tree at premiss " + std::to_string(i + 1));
    cur = r.child(i);
  }
  return cur;
}

std::size_t finite_size(const DTree& t, std::size_t budget) {
  std::unordered_map<const void*, std::size_t> memo;
  std::unordered_set<const void*> active;
  std::function<std::size_t(const DTree&)> rec = [&](const DTree& x) -> std::size_t {
    DTree r = x.resolved();
    const void* id = r.handle().slot;
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    if (!active.insert(id).second) throw NotRegular("tree is infinite");
    if (memo.size() > budget) throw NotRegular("tree exceeds its budget");
    std::size_t n = 1;
    for (const auto& c : r.children()) n += rec(c);
    active.erase(id);
    memo.emplace(id, n);
    return n;
  };
  return rec(t);
}

}  // namespace coind
