#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coind/compress.hpp"
#include "coind/dtree.hpp"
#include "coind/statement.hpp"
#include "coind/step.hpp"
#include "coind/witness.hpp"

namespace coind::lambda {

/// Coinductive markings of abstraction body (a), function (b) and argument (c).
struct Flags {
  bool a = false;
  bool b = false;
  bool c = true;

  static Flags parse(std::string_view bits);
  std::string str() const;
  friend bool operator==(const Flags&, const Flags&) = default;
};

/// Terms are trees over `lam` (1 premiss), `app` (2), bound variables `%k`
/// (de Bruijn index to the k-th enclosing `lam`) and free variables (names).
class Family : public RuleFamily {
 public:
  explicit Family(Flags f);
  RulePtr make_rule(const std::string& name, const std::string& params, const std::string& paren,
                    std::size_t nkids) const override;
  const Flags& flags() const { return flags_; }
  const RulePtr& lam() const { return lam_; }
  const RulePtr& app() const { return app_; }

 private:
  Flags flags_;
  RulePtr lam_;
  RulePtr app_;
};

RulePtr bound_var(std::size_t k);
RulePtr free_var(const std::string& name);

enum class NodeKind { Lam, App, Bound, Free, Trunc };
NodeKind kind_of(const RulePtr& r);
/// Index of a bound variable rule.
std::size_t index_of(const RulePtr& r);

/// body[v/0]: the outermost binder's occurrences replaced by v, indices adjusted.
DTree subst(const DTree& body, const DTree& v);
/// Adds n to every index >= cutoff.
DTree shift(const DTree& t, std::size_t n, std::size_t cutoff = 0);
/// Smallest b such that every loose index is < b; nullopt past the budget.
std::optional<std::size_t> loose_bound(const DTree& t, std::size_t budget = 1u << 16);

class Calculus : public RewriteSystem, public QInstance {
 public:
  explicit Calculus(Flags f) : fam_(f) {}

  const RuleFamily& family() const override { return fam_; }
  const Family& fam() const { return fam_; }
  const Flags& flags() const { return fam_.flags(); }

  /// Root beta step; NotARedex when t is not (\x.s) t.
  DTree beta(const DTree& t) const;
  std::vector<std::pair<std::string, DTree>> enumerate(const DTree& t) const override;
  DTree apply(const std::string& name, const DTree& t) const override;

  DTree make_lam(const DTree& body) const;
  DTree make_app(const DTree& f, const DTree& x) const;

  struct Extracted {
    std::vector<Step> prefix;  // s =>* (\x.u')v'
    Witness body;              // u' ->>_d u
    Witness arg;               // v' ^>_d v
    DTree arg_source;          // v'
  };
  /// w : s ->>_d (\x.u)v.
  Extracted pattern_extract(const Witness& w, Engine& e) const;
  /// u' ->>_d u and v' ^>_d v give u'[v'/x] ->>_d u[v/x].
  Witness pattern_fill(const Witness& body, const Witness& arg, const DTree& arg_source) const;

  const RewriteSystem& system() const override { return *this; }
  QResult root_q(const Witness& w, const Step& st, Engine& e) const override;

 private:
  Family fam_;
};

/// `.lam` text: optional header `flags abc`, then a term in the surface
/// syntax `\x y. e`, juxtaposition, parentheses, `rec L. e`, `*`.
struct Parsed {
  Flags flags;
  DTree term;
};
Parsed parse_lam(std::string_view text, std::optional<Flags> default_flags = {});
DTree parse_lam_term(std::string_view text, const Calculus& calc);
/// Named surface syntax; DomainError when a cycle cannot be named consistently.
std::string print_lam(const DTree& t);

/// One fused split/lift node of the standard presentation:
/// src =>* rule(...) followed by the premisses of the rule.
struct StdNode {
  DTree src;
  std::vector<Step> steps;
  RulePtr rule;
  Statement stmt;
};
using StdArena = graph::Arena<StdNode>;
using StdHandle = graph::Handle<StdNode>;

class StdDerivation {
 public:
  StdDerivation() = default;
  explicit StdDerivation(StdHandle h) : h_(std::move(h)) {}
  const StdHandle& handle() const { return h_; }
  const StdNode& node() const { return graph::payload(graph::resolve(h_)); }
  std::vector<StdDerivation> kids() const;

 private:
  StdHandle h_;
};

/// Fuses each split with its final lift; the witness must be omega-shaped.
StdDerivation to_standard_form(const Witness& w);
Witness from_standard_form(const StdDerivation& d);
std::string print_standard(const StdDerivation& d, std::size_t budget = 1u << 20);
std::size_t standard_state_count(const StdDerivation& d, std::size_t budget = 1u << 16);

}  // namespace coind::lambda
