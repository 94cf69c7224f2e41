#pragma once

// Arena-backed storage for possibly cyclic, possibly lazy labelled graphs.
// Trees and witnesses are both built on top of it.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "coind/error.hpp"
#include "coind/statement.hpp"

namespace coind::graph {

template <class P>
class Arena;
template <class P>
struct Slot;

/// Reference stored inside a slot. `ext` is null when the target lives in the
/// same arena as the slot holding the reference.
template <class P>
struct Ref {
  std::shared_ptr<const Arena<P>> ext;
  const Slot<P>* slot = nullptr;
};

template <class P>
struct Content {
  std::optional<P> payload;  // empty: alias
  std::vector<Ref<P>> kids;
  Ref<P> alias;

  static Content node(P p, std::vector<Ref<P>> kids) {
    Content c;
    c.payload = std::move(p);
    c.kids = std::move(kids);
    return c;
  }
  static Content to(Ref<P> r) {
    Content c;
    c.alias = std::move(r);
    return c;
  }
};

template <class P>
struct Slot {
  std::optional<Statement> hint;
  mutable std::recursive_mutex mu;
  mutable std::atomic<int> state{0};  // 0 pending, 1 forcing, 2 ready
  mutable Content<P> content;
  mutable std::function<Content<P>()> gen;
};

template <class P>
struct Handle {
  std::shared_ptr<const Arena<P>> arena;
  const Slot<P>* slot = nullptr;

  explicit operator bool() const { return slot != nullptr; }
};

template <class P>
class Arena : public std::enable_shared_from_this<Arena<P>> {
 public:
  static std::shared_ptr<Arena> create() { return std::shared_ptr<Arena>(new Arena()); }

  const Slot<P>* filled(P payload, std::vector<Ref<P>> kids, std::optional<Statement> hint = {}) {
    Slot<P>& s = alloc(std::move(hint));
    s.content = Content<P>::node(std::move(payload), std::move(kids));
    s.state.store(2, std::memory_order_release);
    return &s;
  }

  const Slot<P>* alias(Ref<P> target, std::optional<Statement> hint = {}) {
    Slot<P>& s = alloc(std::move(hint));
    s.content = Content<P>::to(std::move(target));
    s.state.store(2, std::memory_order_release);
    return &s;
  }

  const Slot<P>* pending(std::function<Content<P>()> gen, std::optional<Statement> hint = {}) {
    Slot<P>& s = alloc(std::move(hint));
    s.gen = std::move(gen);
    return &s;
  }

  /// Slot with no content yet; must be completed by bind().
  const Slot<P>* binder(std::optional<Statement> hint = {}) { return &alloc(std::move(hint)); }

  void bind(const Slot<P>* s, Content<P> c) {
    std::lock_guard<std::recursive_mutex> lk(s->mu);
    if (s->state.load() != 0 || s->gen) throw InternalInvariant("binder already bound");
    s->content = std::move(c);
    s->state.store(2, std::memory_order_release);
  }

  /// Reference to `h` as seen from a slot of this arena.
  Ref<P> ref(const Handle<P>& h) const {
    if (h.arena.get() == this) return Ref<P>{nullptr, h.slot};
    return Ref<P>{h.arena, h.slot};
  }
  Ref<P> local(const Slot<P>* s) const { return Ref<P>{nullptr, s}; }

  Handle<P> handle(const Slot<P>* s) const { return Handle<P>{this->shared_from_this(), s}; }

  void keep(std::shared_ptr<const void> p) {
    std::lock_guard<std::mutex> lk(mu_);
    keep_.push_back(std::move(p));
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return slots_.size();
  }

 private:
  Arena() = default;

  Slot<P>& alloc(std::optional<Statement> hint) {
    std::lock_guard<std::mutex> lk(mu_);
    Slot<P>& s = slots_.emplace_back();
    s.hint = std::move(hint);
    return s;
  }

  mutable std::mutex mu_;
  std::deque<Slot<P>> slots_;
  std::vector<std::shared_ptr<const void>> keep_;
};

template <class P>
Handle<P> rebase(const Handle<P>& from, const Ref<P>& r) {
  if (r.ext) return Handle<P>{r.ext, r.slot};
  return Handle<P>{from.arena, r.slot};
}

/// Runs the generator of a pending slot at most once; re-entrant forcing
/// from inside the generator signals a non-productive definition.
template <class P>
const Content<P>& force(const Handle<P>& h) {
  const Slot<P>* s = h.slot;
  if (!s) throw InternalInvariant("force on null handle");
  if (s->state.load(std::memory_order_acquire) == 2) return s->content;
  std::unique_lock<std::recursive_mutex> lk(s->mu);
  int st = s->state.load(std::memory_order_acquire);
  if (st == 2) return s->content;
  if (st == 1) throw NonProductive("lazy node depends on itself before producing a rule");
  if (!s->gen) throw NonProductive("unbound binder");
  s->state.store(1);
  try {
    Content<P> c = s->gen();
    s->content = std::move(c);
    s->gen = nullptr;
    s->state.store(2, std::memory_order_release);
  } catch (...) {
    s->state.store(0);
    throw;
  }
  return s->content;
}

inline constexpr std::size_t kDefaultAliasFuel = 1u << 16;

/// Follows aliases until a filled slot is reached.
template <class P>
Handle<P> resolve(Handle<P> h, std::size_t fuel = kDefaultAliasFuel) {
  for (std::size_t i = 0;; ++i) {
    const Content<P>& c = force(h);
    if (c.payload) return h;
    if (i >= fuel) throw NonProductive("alias chain exhausted its budget");
    h = rebase(h, c.alias);
  }
}

template <class P>
bool is_pending(const Handle<P>& h) {
  return h.slot->state.load(std::memory_order_acquire) != 2;
}

/// Payload of a resolved handle.
template <class P>
const P& payload(const Handle<P>& resolved) {
  const Content<P>& c = force(resolved);
  if (!c.payload) throw InternalInvariant("payload() on an alias");
  return *c.payload;
}

template <class P>
std::vector<Handle<P>> kids(const Handle<P>& resolved) {
  const Content<P>& c = force(resolved);
  std::vector<Handle<P>> out;
  out.reserve(c.kids.size());
  for (const auto& r : c.kids) out.push_back(rebase(resolved, r));
  return out;
}

template <class P>
Handle<P> kid(const Handle<P>& resolved, std::size_t i) {
  const Content<P>& c = force(resolved);
  if (i >= c.kids.size()) throw BadPath("premiss index out of range");
  return rebase(resolved, c.kids[i]);
}

struct PtrPairHash {
  std::size_t operator()(const std::pair<const void*, const void*>& p) const {
    auto a = reinterpret_cast<std::uintptr_t>(p.first);
    auto b = reinterpret_cast<std::uintptr_t>(p.second);
    return std::hash<std::uintptr_t>()(a * 1000003u ^ b);
  }
};

inline constexpr std::size_t kMissing = static_cast<std::size_t>(-1);

template <class P>
struct StateGraph {
  std::vector<Handle<P>> nodes;  // resolved
  std::vector<std::vector<std::size_t>> kids;  // kMissing past the budget
  bool complete = true;
};

/// Breadth-first exploration of the reachable resolved nodes.
template <class P>
StateGraph<P> explore(const Handle<P>& root, std::size_t budget) {
  StateGraph<P> g;
  std::unordered_map<const void*, std::size_t> index;
  auto add = [&](const Handle<P>& h) -> std::size_t {
    Handle<P> r = resolve(h);
    auto it = index.find(r.slot);
    if (it != index.end()) return it->second;
    std::size_t id = g.nodes.size();
    index.emplace(r.slot, id);
    g.nodes.push_back(r);
    g.kids.emplace_back();
    return id;
  };
  add(root);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (i >= budget) {
      g.complete = false;
      g.nodes.resize(budget);
      g.kids.resize(budget);
      for (auto& ks : g.kids)
        for (auto& k : ks)
          if (k >= budget) k = kMissing;
      break;
    }
    std::vector<Handle<P>> ks = kids(g.nodes[i]);
    std::vector<std::size_t> ids;
    ids.reserve(ks.size());
    for (const auto& k : ks) ids.push_back(add(k));
    g.kids[i] = std::move(ids);
  }
  return g;
}

/// True when some cycle of the explored graph uses only inductive edges.
template <class P, class CoindFn>
bool has_inductive_cycle(const StateGraph<P>& g, CoindFn coind) {
  std::size_t n = g.nodes.size();
  std::vector<int> color(n, 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (color[s]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, 0}};
    color[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i >= g.kids[v].size()) {
        color[v] = 2;
        stack.pop_back();
        continue;
      }
      std::size_t k = i++;
      if (coind(payload(g.nodes[v]), k)) continue;
      std::size_t w = g.kids[v][k];
      if (w == kMissing) continue;
      if (color[w] == 1) return true;
      if (color[w] == 0) {
        color[w] = 1;
        stack.emplace_back(w, 0);
      }
    }
  }
  return false;
}

/// Coinductive pairing: true iff the unfoldings agree, comparing payloads with `eq`.
/// Throws NotRegular when more than `budget` pairs are needed.
template <class P, class EqFn>
bool bisimilar(const Handle<P>& a, const Handle<P>& b, EqFn eq, std::size_t budget) {
  std::unordered_set<std::pair<const void*, const void*>, PtrPairHash> seen;
  std::vector<std::pair<Handle<P>, Handle<P>>> work{{a, b}};
  while (!work.empty()) {
    auto [x0, y0] = std::move(work.back());
    work.pop_back();
    Handle<P> x = resolve(x0);
    Handle<P> y = resolve(y0);
    if (x.slot == y.slot) continue;
    if (!seen.insert({x.slot, y.slot}).second) continue;
    if (seen.size() > budget) throw NotRegular("bisimulation exceeded its pair budget");
    if (!eq(payload(x), payload(y))) return false;
    auto kx = kids(x);
    auto ky = kids(y);
    if (kx.size() != ky.size()) return false;
    for (std::size_t i = 0; i < kx.size(); ++i) work.emplace_back(kx[i], ky[i]);
  }
  return true;
}

/// Memoised corecursion into a fresh arena: get(key) returns a lazy slot whose
/// content is fn(key). The object lives as long as the arena.
template <class P, class Key, class Hash = std::hash<Key>, class KeyEq = std::equal_to<Key>>
class Corec {
 public:
  using Fn = std::function<Content<P>(const Key&)>;

  static Corec* create(const std::shared_ptr<Arena<P>>& arena, Fn fn) {
    auto c = std::shared_ptr<Corec>(new Corec(arena.get(), std::move(fn)));
    arena->keep(c);
    return c.get();
  }

  const Slot<P>* slot(const Key& k, std::optional<Statement> hint = {}) {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    Corec* self = this;
    const Slot<P>* s = arena_->pending([self, k]() { return self->fn_(k); }, std::move(hint));
    memo_.emplace(k, s);
    return s;
  }

  Ref<P> ref(const Key& k, std::optional<Statement> hint = {}) { return arena_->local(slot(k, std::move(hint))); }
  Handle<P> get(const Key& k, std::optional<Statement> hint = {}) { return arena_->handle(slot(k, std::move(hint))); }
  Arena<P>& arena() { return *arena_; }

 private:
  Corec(Arena<P>* a, Fn fn) : arena_(a), fn_(std::move(fn)) {}

  Arena<P>* arena_;
  Fn fn_;
  std::mutex mu_;
  std::unordered_map<Key, const Slot<P>*, Hash, KeyEq> memo_;
};

}  // namespace coind::graph
