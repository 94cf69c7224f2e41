#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coind/compress.hpp"
#include "coind/dtree.hpp"
#include "coind/pattern.hpp"
#include "coind/statement.hpp"
#include "coind/step.hpp"

namespace coind::mumall {

enum class FKind { Atom, NegAtom, Zero, One, Top, Bot, Par, Tens, Plus, With, Var, Mu, Nu };

/// Immutable formula tree. Equality is alpha-equivalence.
class Formula {
 public:
  struct Node;

  Formula() = default;
  static Formula atom(const std::string& a);
  static Formula neg_atom(const std::string& a);
  static Formula zero();
  static Formula one();
  static Formula top();
  static Formula bot();
  static Formula par(Formula a, Formula b);
  static Formula tens(Formula a, Formula b);
  static Formula plus(Formula a, Formula b);
  static Formula with(Formula a, Formula b);
  static Formula var(const std::string& x);
  static Formula mu(const std::string& x, Formula body);
  static Formula nu(const std::string& x, Formula body);

  bool valid() const { return static_cast<bool>(n_); }
  FKind kind() const;
  /// Atom name, variable name, or binder name.
  const std::string& name() const;
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const;
  bool is_binary() const;
  bool is_fix() const { return kind() == FKind::Mu || kind() == FKind::Nu; }

  bool closed() const;
  std::size_t hash() const;
  std::size_t size() const;
  std::string str() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Involutive negation; fixed-point variables are self-dual.
Formula neg(const Formula& f);
/// f[g/x]; g is closed, so no capture can happen.
Formula formula_subst(const Formula& f, const Formula& g, const std::string& x);
/// F[sigma X.F / X] for a fixed point sigma X.F.
Formula unfold(const Formula& fix);
/// ASCII syntax: `A`, `~A`, `0`, `1`, `top`, `bot`, `par`, `tens`, `plus`, `with`,
/// `mu X. F`, `nu X. F`, parentheses. Binary connectives associate to the right.
Formula parse_formula(std::string_view text);

using Sequent = std::vector<Formula>;

Statement sequent_statement(Sequent s);
const Sequent& sequent_of(const Statement& s);
std::string sequent_str(const Sequent& s);
/// `|- F, G` or `F, G`.
Sequent parse_sequent(std::string_view text);

/// 0-based premiss / formula coordinate.
struct Coord {
  std::size_t i = 0;
  std::size_t j = 0;
  friend auto operator<=>(const Coord&, const Coord&) = default;
  std::string str() const;  // 1-based `i.j`
};

/// Symmetric cut relation, stored as unordered pairs (first < second).
class CutRel {
 public:
  CutRel() = default;
  explicit CutRel(std::vector<std::pair<Coord, Coord>> pairs);
  void add(Coord a, Coord b);
  const std::vector<std::pair<Coord, Coord>>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  /// Partner of c; nullopt outside the support.
  std::optional<Coord> partner(const Coord& c) const;
  bool in_support(const Coord& c) const { return partner(c).has_value(); }
  std::string str() const;
  friend bool operator==(const CutRel&, const CutRel&) = default;

 private:
  std::vector<std::pair<Coord, Coord>> pairs_;  // sorted
};

struct MulticutCheck {
  std::vector<std::string> violations;  // each starts with the failed condition
  Sequent conclusion;
  bool ok() const { return violations.empty(); }
};

MulticutCheck validate_multicut(std::size_t k, const std::vector<std::size_t>& n, const CutRel& rel,
                                const std::vector<Sequent>& premisses);

/// Partial map from new coordinates to old ones.
using IndexMap = std::map<Coord, Coord>;
/// a ~' b iff pi(a) ~ pi(b), both defined.
CutRel reindex_cutrel(const IndexMap& pi, const CutRel& rel);

/// Context premisses (all but `tensor`) connected to the Gamma side and to the
/// Delta side of the tensor premiss, whose first `gamma` formulas form Gamma.
/// Premisses connected to neither go to the Gamma side.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> partition_tensor_premisses(
    const CutRel& rel, const std::vector<std::size_t>& n, std::size_t tensor, std::size_t gamma);

// ---- rules ----

enum class RKind { Ax, Cut, Exch, One, Top, Bot, Par, Tens, Plus, With, Mu, Nu, Mcut };

class MRule : public Rule {
 public:
  MRule(RKind kind, std::string key, std::size_t arity, std::vector<bool> coind)
      : Rule(std::move(key), arity, std::move(coind)), kind_(kind) {}
  RKind kind() const { return kind_; }

 private:
  RKind kind_;
};

const MRule& mrule(const RulePtr& r);
RKind rule_kind(const RulePtr& r);

RulePtr ax_rule(const Formula& f);
RulePtr cut_rule();
/// x_sigma with sigma 0-based: conclusion[sigma[p]] = premiss[p].
RulePtr exch_rule(const std::vector<std::size_t>& sigma);
RulePtr one_rule();
RulePtr top_rule(const Sequent& gamma);
RulePtr bot_rule();
RulePtr par_rule();
RulePtr tens_rule();
/// plus_{i, other}: premiss ends with F_i, `other` is F_{1-i}.
RulePtr plus_rule(std::size_t i, const Formula& other);
RulePtr with_rule();
RulePtr mu_rule(const Formula& fix);
RulePtr nu_rule(const Formula& fix);
RulePtr mcut_rule(std::size_t k, std::vector<std::size_t> n, CutRel rel);

/// Parameters of the rule instances.
const Formula& rule_formula(const RulePtr& r);   // ax, mu, nu, plus (other disjunct)
std::size_t plus_index(const RulePtr& r);
const std::vector<std::size_t>& exch_sigma(const RulePtr& r);
const Sequent& top_context(const RulePtr& r);
struct McutParams {
  std::size_t k = 0;
  std::vector<std::size_t> n;
  CutRel rel;
};
const McutParams& mcut_params(const RulePtr& r);

class Family : public RuleFamily {
 public:
  RulePtr make_rule(const std::string& name, const std::string& params, const std::string& paren,
                    std::size_t nkids) const override;
  Statement parse_statement(const std::string& text) const override;
  bool has_default_statement() const override { return false; }
};

const Family& family();

/// Proof tree in the tree grammar, e.g. `rec L[|- nu X. X]. nu[nu X. X](L)`.
DTree parse_proof(std::string_view text);

struct ProofCheck {
  DTree proof;
  std::vector<std::string> violations;  // `KEY: condition: detail`
};
/// Like parse_proof, but multicut side conditions are collected instead of rejected.
ProofCheck check_proof(std::string_view text);

// ---- cut elimination ----

enum class StepKind {
  MergeCutMcut,
  PremissPerm,
  Ax,
  TensorPar,
  WithPlus,
  MuNu,
  BotOne,
  CommPar,
  CommTensor,
  CommOne,
  CommBot,
  CommPlus,
  CommWith,
  CommMu,
  CommNu,
  CommTop,
  CommExch,
  CommAx,
};

struct RootStep {
  StepKind kind = StepKind::MergeCutMcut;
  std::vector<std::size_t> tau;  // PremissPerm: new premiss p is old premiss tau[p]

  /// `merge`, `perm[2,1,3]` (1-based), `ax`, `tens-par`, ..., `comm-exch`, `comm-ax`.
  std::string name() const;
  static RootStep parse(const std::string& name);
  friend bool operator==(const RootStep&, const RootStep&) = default;
};

bool is_principal(StepKind k);
bool is_commutative(StepKind k);

/// The step as a pair of finite patterns over the same holes.
struct StepPlan {
  Pattern lhs;
  Pattern rhs;
  std::size_t fresh_pairs = 0;    // cut pairs added by the clause
  std::size_t dropped_pairs = 0;  // cut pairs consumed by the clause
};

/// NotApplicable when t's root does not have the step's left-hand shape.
StepPlan plan_root_step(const DTree& t, const RootStep& st);
DTree apply_root_step(const RootStep& st, const DTree& t);
/// Exact matches at the root (premiss permutations excluded).
std::vector<RootStep> applicable_root_steps(const DTree& t);
/// Step the elimination strategy takes at an mcut root, possibly a premiss permutation
/// that brings a redex into position.
std::optional<RootStep> strategy_step(const DTree& t);

class System : public RewriteSystem, public QInstance {
 public:
  const RuleFamily& family() const override { return mumall::family(); }
  /// applicable_root_steps plus the strategy's permutation, if any.
  std::vector<std::pair<std::string, DTree>> enumerate(const DTree& t) const override;
  DTree apply(const std::string& name, const DTree& t) const override;
  const RewriteSystem& system() const override { return *this; }
  QResult root_q(const Witness& w, const Step& st, Engine& e) const override;
};

struct StuckReport {
  std::string reason;
  std::vector<std::size_t> path;  // position of the blocking cut
};

struct CutElimResult {
  std::vector<Step> steps;
  DTree reached;
  DTree truncation;  // truncate(reached, d); cut-free unless stuck
  std::optional<StuckReport> stuck;
  bool wrapped = false;  // a root cut was first placed under a unary multicut
};

/// Applies strategy steps at the shallowest (then leftmost) cut until the
/// depth-d truncation is cut-free, or reports why it stopped.
CutElimResult cut_elim_observe(const DTree& p, std::size_t d, std::size_t fuel = 10000);

/// Positions of cut / mcut nodes in the depth-d truncation, shallowest first.
std::vector<std::vector<std::size_t>> cuts_within(const DTree& t, std::size_t d, std::size_t budget = 1u << 16);

}  // namespace coind::mumall
