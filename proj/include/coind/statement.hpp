#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coind/error.hpp"

namespace coind {

/// Instance-defined statement payload.
class StatementData {
 public:
  virtual ~StatementData() = default;
  virtual bool equals(const StatementData& other) const = 0;
  virtual std::size_t hash() const = 0;
  virtual std::string str() const = 0;
};

/// Opaque, equality-comparable statement. Default-constructed is the unit statement.
class Statement {
 public:
  Statement() = default;
  explicit Statement(std::shared_ptr<const StatementData> d) : d_(std::move(d)) {}

  static Statement unit() { return Statement(); }
  bool is_unit() const { return !d_; }
  const StatementData* data() const { return d_.get(); }

  template <class T>
  const T* as() const {
    return dynamic_cast<const T*>(d_.get());
  }

  std::string str() const { return d_ ? d_->str() : "*"; }
  std::size_t hash() const { return d_ ? d_->hash() : 0x9e3779b9u; }

  friend bool operator==(const Statement& a, const Statement& b) {
    if (a.d_ == b.d_) return true;
    if (!a.d_ || !b.d_) return false;
    return a.d_->equals(*b.d_);
  }

 private:
  std::shared_ptr<const StatementData> d_;
};

/// A derivation rule: arity, per-premiss coinductive flag, and a partial
/// conclusion function. Identity is the canonical key string.
class Rule {
 public:
  Rule(std::string key, std::size_t arity, std::vector<bool> coind)
      : key_(std::move(key)), arity_(arity), coind_(std::move(coind)) {
    if (coind_.size() != arity_) throw InternalInvariant("rule " + key_ + ": coind size != arity");
  }
  virtual ~Rule() = default;

  const std::string& key() const { return key_; }
  std::size_t arity() const { return arity_; }
  /// 0-based premiss index.
  bool coind(std::size_t i) const { return coind_.at(i); }
  const std::vector<bool>& coind_flags() const { return coind_; }

  /// Throws DomainError when the premisses are outside the rule's domain.
  virtual Statement conclude(std::span<const Statement> premisses) const = 0;
  virtual bool is_trunc() const { return false; }

 protected:
  void check_arity(std::span<const Statement> premisses) const {
    if (premisses.size() != arity_)
      throw DomainError(key_ + ": expected " + std::to_string(arity_) + " premisses, got " +
                        std::to_string(premisses.size()));
  }

 private:
  std::string key_;
  std::size_t arity_;
  std::vector<bool> coind_;
};

using RulePtr = std::shared_ptr<const Rule>;

inline bool same_rule(const Rule& a, const Rule& b) { return &a == &b || a.key() == b.key(); }
inline bool same_rule(const RulePtr& a, const RulePtr& b) { return same_rule(*a, *b); }

/// Rule whose premisses and conclusion are all the unit statement.
class UnitRule : public Rule {
 public:
  using Rule::Rule;
  Statement conclude(std::span<const Statement> premisses) const override;
};

/// The nullary axiom trunc_S.
class TruncRule : public Rule {
 public:
  explicit TruncRule(Statement s);
  Statement conclude(std::span<const Statement> premisses) const override;
  bool is_trunc() const override { return true; }
  const Statement& statement() const { return s_; }

 private:
  Statement s_;
};

RulePtr trunc_rule(const Statement& s);

/// Instance hook used by the text parser to rebuild rule instances and statements.
class RuleFamily {
 public:
  virtual ~RuleFamily() = default;
  /// `params` is the raw text between brackets (empty when absent); `paren_param`
  /// is the digits of a `name(i)` parameter, empty when absent.
  virtual RulePtr make_rule(const std::string& name, const std::string& params,
                            const std::string& paren_param, std::size_t nkids) const = 0;
  virtual Statement parse_statement(const std::string& text) const;
  /// Statement assumed for an unannotated rec binder; nullptr-like failure throws.
  virtual bool has_default_statement() const { return true; }
  virtual Statement default_statement() const { return Statement::unit(); }
};

}  // namespace coind
