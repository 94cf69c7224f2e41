#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coind/graph.hpp"
#include "coind/statement.hpp"

namespace coind {

struct TreeNode {
  RulePtr rule;
  Statement stmt;
};

using TreeArena = graph::Arena<TreeNode>;
using TreeHandle = graph::Handle<TreeNode>;
using TreeRef = graph::Ref<TreeNode>;

inline constexpr std::size_t kDefaultFuel = 1u << 20;
inline constexpr std::size_t kDefaultPairBudget = 1u << 20;

/// Handle on a (possibly cyclic or lazy) derivation tree.
class DTree {
 public:
  DTree() = default;
  explicit DTree(TreeHandle h) : h_(std::move(h)) {}

  const TreeHandle& handle() const { return h_; }
  bool valid() const { return static_cast<bool>(h_); }

  /// Forces pending generators and follows aliases.
  DTree resolved() const { return DTree(graph::resolve(h_)); }
  const TreeNode& node() const { return graph::payload(graph::resolve(h_)); }
  const RulePtr& rule() const { return node().rule; }
  Statement statement() const;
  std::size_t arity() const { return rule()->arity(); }
  DTree child(std::size_t i) const;
  std::vector<DTree> children() const;
  /// Identity of the resolved node.
  const void* id() const { return graph::resolve(h_).slot; }
  bool pending() const { return graph::is_pending(h_); }

 private:
  TreeHandle h_;
};

/// Builds tree nodes inside one arena.
class TreeBuilder {
 public:
  TreeBuilder() : arena_(TreeArena::create()) {}
  explicit TreeBuilder(std::shared_ptr<TreeArena> a) : arena_(std::move(a)) {}

  /// Node whose conclusion is computed (and checked) by the rule.
  DTree node(RulePtr r, const std::vector<DTree>& kids);
  /// Node with a caller-supplied conclusion; used by corecursive constructions.
  DTree node_unchecked(RulePtr r, const std::vector<DTree>& kids, Statement s);
  DTree trunc(const Statement& s);
  /// Placeholder for a rec binder; must be bound before it is forced.
  DTree binder(std::optional<Statement> s);
  void bind(const DTree& binder, const DTree& body);
  DTree thunk(std::optional<Statement> s, std::function<DTree()> gen);

  TreeArena& arena() { return *arena_; }
  const std::shared_ptr<TreeArena>& arena_ptr() const { return arena_; }

 private:
  std::shared_ptr<TreeArena> arena_;
};

DTree make_node(RulePtr r, const std::vector<DTree>& kids);
DTree make_trunc(const Statement& s);

std::pair<RulePtr, std::vector<DTree>> tree_unfold(const DTree& t);

/// Finite truncation at depth d; inductive premisses keep the budget.
DTree truncate(const DTree& t, std::size_t d, std::size_t fuel = kDefaultFuel);

struct Distance {
  bool decided = false;       // false: truncations agree up to the budget
  std::size_t exponent = 0;   // value 2^-exponent when decided, else the budget
  double value() const;
  std::string str() const;
};

/// Smallest d <= max_d with differing truncations, if any.
std::optional<std::size_t> first_disagreement(const DTree& s, const DTree& t, std::size_t max_d,
                                              std::size_t budget = kDefaultPairBudget);
Distance tree_distance(const DTree& s, const DTree& t, std::size_t budget);
/// truncate(s, d) == truncate(t, d)
bool agree_to_depth(const DTree& s, const DTree& t, std::size_t d);

bool bisimilar(const DTree& s, const DTree& t, std::size_t budget = kDefaultPairBudget);

/// Structural equality of finite trees (e.g. truncations).
bool finite_equal(const DTree& s, const DTree& t);

/// Some cycle crosses no coinductive premiss. Explores up to `budget` nodes.
bool has_unguarded_cycle(const DTree& t, std::size_t budget = kDefaultFuel);

/// Nodes within coinductive depth `depth` whose conclusion differs from the
/// rule applied to the premisses' conclusions.
std::vector<std::string> check_conclusions(const DTree& t, std::size_t depth);

/// Number of distinct reachable nodes, throwing NotRegular past the budget.
std::size_t state_count(const DTree& t, std::size_t budget = kDefaultFuel);

/// Follows a 0-based path.
DTree subtree_at(const DTree& t, const std::vector<std::size_t>& path);

/// Finite tree size (number of nodes of the unfolding); throws NotRegular on cycles.
std::size_t finite_size(const DTree& t, std::size_t budget = kDefaultFuel);

}  // namespace coind
