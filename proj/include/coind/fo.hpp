#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coind/compress.hpp"
#include "coind/dtree.hpp"
#include "coind/pattern.hpp"
#include "coind/statement.hpp"
#include "coind/step.hpp"

namespace coind::fo {

/// Function symbols with arities and per-premiss coinductive flags (default all 1).
class Signature {
 public:
  void add(const std::string& name, std::size_t arity);
  /// Marks premiss i (0-based) of `name` inductive.
  void set_inductive(const std::string& name, std::size_t i);
  bool has(const std::string& name) const { return syms_.count(name) > 0; }
  std::size_t arity(const std::string& name) const;
  RulePtr cons(const std::string& name) const;
  const std::map<std::string, RulePtr>& symbols() const { return syms_; }

 private:
  std::map<std::string, RulePtr> syms_;
};

/// Leaf rule for a variable.
class VarRule : public UnitRule {
 public:
  explicit VarRule(const std::string& name) : UnitRule(name, 0, {}) {}
};

RulePtr var_rule(const std::string& name);
/// Variable name when t's root is a variable leaf.
std::optional<std::string> as_var(const DTree& t);

/// Names outside the signature are variables.
class Family : public RuleFamily {
 public:
  explicit Family(std::shared_ptr<const Signature> sig) : sig_(std::move(sig)) {}
  RulePtr make_rule(const std::string& name, const std::string& params, const std::string& paren,
                    std::size_t nkids) const override;
  const Signature& signature() const { return *sig_; }

 private:
  std::shared_ptr<const Signature> sig_;
};

using Substitution = std::map<std::string, DTree>;

/// Corecursive grafting; regular in, regular out.
DTree subst_apply(const Substitution& s, const DTree& t);
/// nullopt on mismatch; NotLinear when l repeats a variable.
std::optional<Substitution> match_lhs(const DTree& l, const DTree& t);
bool check_left_linear(const DTree& l);
std::vector<std::string> variables(const DTree& t, std::size_t budget = kDefaultFuel);

struct Rule {
  std::string name;
  DTree lhs;
  DTree rhs;
  Pattern lhs_pattern;            // variables replaced by holes, left to right
  std::vector<std::string> holes; // variable of each hole
};

/// Left-linear system; also provides the root case of property Q.
class System : public RewriteSystem, public QInstance, public std::enable_shared_from_this<System> {
 public:
  explicit System(std::shared_ptr<const Signature> sig);

  /// Validates: lhs finite, not a variable, linear; vars(rhs) within vars(lhs).
  void add_rule(const std::string& name, const DTree& lhs, const DTree& rhs);

  const RuleFamily& family() const override { return fam_; }
  std::vector<std::pair<std::string, DTree>> enumerate(const DTree& t) const override;
  DTree apply(const std::string& name, const DTree& t) const override;

  const RewriteSystem& system() const override { return *this; }
  QResult root_q(const Witness& w, const Step& st, Engine& e) const override;

  const std::vector<Rule>& rules() const { return rules_; }
  const Rule& rule(const std::string& name) const;
  const Signature& signature() const { return *sig_; }
  const Family& fam() const { return fam_; }

 private:
  std::shared_ptr<const Signature> sig_;
  Family fam_;
  std::vector<Rule> rules_;
};

/// Parses a `.trs` file: `sig f/1 a/0 ;`, `inductive f.1 ;`, `[name:] l -> r ;`.
std::shared_ptr<System> parse_trs(std::string_view text);

/// Witness tau(r) ->>_d sigma(r) from per-variable witnesses tau(x) ->>_d sigma(x).
Witness pattern_fill(const DTree& r, const std::map<std::string, Witness>& var_witnesses, const Ordinal& d);

}  // namespace coind::fo
