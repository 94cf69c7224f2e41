#include "coind/statement.hpp"

namespace coind {

Statement UnitRule::conclude(std::span<const Statement> premisses) const {
  check_arity(premisses);
  for (const auto& p : premisses)
    if (!p.is_unit()) throw DomainError(key() + ": premiss is not the unit statement");
  return Statement::unit();
}

namespace {
std::string trunc_key(const Statement& s) { return s.is_unit() ? "*" : "#[" + s.str() + "]"; }
}  // namespace

TruncRule::TruncRule(Statement s) : Rule(trunc_key(s), 0, {}), s_(std::move(s)) {}

Statement TruncRule::conclude(std::span<const Statement> premisses) const {
  check_arity(premisses);
  return s_;
}

RulePtr trunc_rule(const Statement& s) {
  if (s.is_unit()) {
    static const RulePtr unit = std::make_shared<TruncRule>(Statement::unit());
    return unit;
  }
  return std::make_shared<TruncRule>(s);
}

Statement RuleFamily::parse_statement(const std::string& text) const {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '\t' && c != '\n') t += c;
  if (t == "*" || t.empty()) return Statement::unit();
  throw DomainError("statement literal not supported by this rule family: " + text);
}

}  // namespace coind
