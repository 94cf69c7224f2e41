#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coind/dtree.hpp"
#include "coind/graph.hpp"
#include "coind/ordinal.hpp"
#include "coind/step.hpp"

namespace coind {

enum class WKind { Split, Lift };

/// One node of a reduction witness.
///  Split@g: src =>* s1 ^>_{d1} t1 =>* ... ^>_{dm} tm =>* s' ^>_g t.
///    kids[0..m) are the segment hats, kids[m] the final hat.
///  Lift@g: rule(s_1..s_k) ^>_g rule(t_1..t_k); kids are full witnesses.
struct WNode {
  WKind kind = WKind::Split;
  Ordinal ord;
  DTree src;
  std::vector<std::vector<Step>> seg_steps;
  std::vector<Step> trail;
  RulePtr rule;
  Statement stmt;
};

using WArena = graph::Arena<WNode>;
using WHandle = graph::Handle<WNode>;
using WRef = graph::Ref<WNode>;

/// Handle on a (possibly cyclic or lazy) witness.
class Witness {
 public:
  Witness() = default;
  explicit Witness(WHandle h) : h_(std::move(h)) {}

  const WHandle& handle() const { return h_; }
  bool valid() const { return static_cast<bool>(h_); }
  Witness resolved() const { return Witness(graph::resolve(h_)); }
  const WNode& node() const { return graph::payload(graph::resolve(h_)); }
  WKind kind() const { return node().kind; }
  bool is_split() const { return kind() == WKind::Split; }
  bool is_lift() const { return kind() == WKind::Lift; }
  const Ordinal& ordinal() const { return node().ord; }
  /// Conclusion shared by source and target.
  Statement statement() const;

  std::vector<Witness> kids() const;
  Witness kid(std::size_t i) const;
  /// Split accessors.
  std::size_t segments() const { return node().seg_steps.size(); }
  Witness segment_hat(std::size_t i) const { return kid(i); }
  Witness final_hat() const { return kid(segments()); }
  const void* id() const { return graph::resolve(h_).slot; }

 private:
  WHandle h_;
};

struct Segment {
  std::vector<Step> steps;
  Witness hat;
};

class WitnessBuilder {
 public:
  WitnessBuilder() : arena_(WArena::create()) {}
  explicit WitnessBuilder(std::shared_ptr<WArena> a) : arena_(std::move(a)) {}

  Witness split(const Ordinal& g, DTree src, const std::vector<Segment>& segs, std::vector<Step> trail,
                const Witness& final_hat);
  Witness lift(const Ordinal& g, RulePtr rule, Statement stmt, const std::vector<Witness>& kids);
  Witness binder(std::optional<Statement> s = {});
  void bind(const Witness& binder, const Witness& body);

  WArena& arena() { return *arena_; }
  const std::shared_ptr<WArena>& arena_ptr() const { return arena_; }

 private:
  std::shared_ptr<WArena> arena_;
};

/// Lazily built source and target trees of witnesses, memoised per object.
class WitnessViews {
 public:
  WitnessViews();
  DTree source(const Witness& w);
  DTree target(const Witness& w);

 private:
  struct Impl;
  std::shared_ptr<TreeArena> arena_;
  Impl* impl_;  // owned by arena_
};

DTree witness_source(const Witness& w);
DTree witness_target(const Witness& w);

/// truncate(target, d); NonProductive on unguarded witnesses.
DTree target_truncation(const Witness& w, std::size_t d, std::size_t fuel = kDefaultFuel);

struct Violation {
  std::string tag;
  std::string message;
};

/// Tags used by validate_witness.
namespace vtag {
inline constexpr const char* kOrdinal = "ordinal";
inline constexpr const char* kFinalOrdinal = "final-ordinal";
inline constexpr const char* kLiftOrdinal = "lift-ordinal";
inline constexpr const char* kEndpoint = "endpoint";
inline constexpr const char* kUnguarded = "unguarded";
inline constexpr const char* kKind = "kind";
inline constexpr const char* kBadStep = "bad-step";
inline constexpr const char* kConclusion = "conclusion";
inline constexpr const char* kUnproductive = "unproductive";
}  // namespace vtag

struct ValidateOptions {
  std::size_t depth = 8;
  /// Witness nodes explored for the cycle scan.
  std::size_t node_budget = 1u << 16;
  bool check_endpoints = true;
};

std::vector<Violation> validate_witness(const Witness& w, const RewriteSystem& sys, const ValidateOptions& opt = {});
inline std::vector<Violation> validate_witness(const Witness& w, const RewriteSystem& sys, std::size_t depth) {
  ValidateOptions o;
  o.depth = depth;
  return validate_witness(w, sys, o);
}

/// Some cycle of the witness crosses no coinductive lift premiss.
bool witness_unguarded(const Witness& w, std::size_t budget = 1u << 16);

/// t ^>_g t, lifting t's own rules.
Witness refl_hat(const DTree& t, const Ordinal& g);
/// t ->>_g t
Witness refl_full(const DTree& t, const Ordinal& g);
/// Raises the annotation from w's ordinal to d; OrdinalNotLarger when d < w's ordinal.
Witness weaken(const Witness& w, const Ordinal& d);

inline constexpr std::size_t kEndpointBudget = 32;

/// s ^>_g t and t ^>_d u give s ^>_e u with e = max(g+1, d). `check_depth` bounds the
/// truncation comparison of the midpoints (0: rule and statement only).
Witness concat_hat(const Witness& a, const Witness& b, std::size_t check_depth = kEndpointBudget);
/// Split with no segments or steps around the hat.
Witness hat_to_full(const Witness& h);

Witness parse_witness(std::string_view text, const RuleFamily& fam);
std::string print_witness(const Witness& w, std::size_t budget = 1u << 20);

/// Number of distinct reachable witness nodes; NotRegular past the budget.
std::size_t witness_state_count(const Witness& w, std::size_t budget = 1u << 16);
bool witness_bisimilar(const Witness& a, const Witness& b, std::size_t budget = kDefaultPairBudget);

}  // namespace coind
