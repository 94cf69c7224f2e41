#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coind/dtree.hpp"
#include "coind/statement.hpp"

namespace coind {

/// Finite derivation prefix whose leaves may be numbered holes (0-based).
struct Pattern {
  std::optional<std::size_t> hole;
  RulePtr rule;
  std::vector<Pattern> kids;

  static Pattern make_hole(std::size_t i) {
    Pattern p;
    p.hole = i;
    return p;
  }
  static Pattern node(RulePtr r, std::vector<Pattern> kids) {
    Pattern p;
    p.rule = std::move(r);
    p.kids = std::move(kids);
    return p;
  }

  bool is_hole() const { return hole.has_value(); }
  /// One more than the largest hole index (0 when ground).
  std::size_t arity() const;
  /// Each hole index occurs exactly once and all of 0..arity-1 occur.
  bool linear() const;
  std::string str() const;
};

/// Subtrees under the holes, or nullopt when `t` does not unfold along `p`.
/// Throws NotLinear for a pattern with a repeated hole.
std::optional<std::vector<DTree>> pattern_match(const Pattern& p, const DTree& t);

/// Rebuilds p(children); holes may repeat or be absent. DomainError when a
/// rule along the skeleton rejects its premisses.
DTree pattern_fill(const Pattern& p, const std::vector<DTree>& children, TreeBuilder& b);
DTree pattern_fill(const Pattern& p, const std::vector<DTree>& children);

/// Tree grammar with `$1`, `$2`, ... for holes (1-based in text).
Pattern parse_pattern(std::string_view text, const RuleFamily& fam);

}  // namespace coind
