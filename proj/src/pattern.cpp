#include "coind/pattern.hpp"

#include <algorithm>

#include "coind/text.hpp"

namespace coind {

namespace {

void holes_of(const Pattern& p, std::vector<std::size_t>& out) {
  if (p.is_hole()) {
    out.push_back(*p.hole);
    return;
  }
  for (const auto& k : p.kids) holes_of(k, out);
}

bool match_into(const Pattern& p, const DTree& t, std::vector<DTree>& out) {
  if (p.is_hole()) {
    out[*p.hole] = t;
    return true;
  }
  DTree r = t.resolved();
  if (!same_rule(r.rule(), p.rule)) return false;
  auto cs = r.children();
  if (cs.size() != p.kids.size()) return false;
  for (std::size_t i = 0; i < cs.size(); ++i)
    if (!match_into(p.kids[i], cs[i], out)) return false;
  return true;
}

Pattern parse_pat(Cursor& c, const RuleFamily& fam) {
  if (c.accept("$")) {
    std::size_t n = std::stoul(c.number());
    if (n == 0) c.fail("holes are numbered from 1");
    return Pattern::make_hole(n - 1);
  }
  auto [line, col] = c.line_col();
  RuleHead h = parse_rule_head(c);
  std::vector<Pattern> kids;
  if (c.accept("(")) {
    if (!c.accept(")")) {
      do kids.push_back(parse_pat(c, fam));
      while (c.accept(","));
      c.expect(")");
    }
  }
  try {
    RulePtr r = fam.make_rule(h.name, h.params, h.paren, kids.size());
    return Pattern::node(std::move(r), std::move(kids));
  } catch (const DomainError& e) {
    throw SyntaxError(e.what(), line, col);
  }
}

}  // namespace

std::size_t Pattern::arity() const {
  std::vector<std::size_t> hs;
  holes_of(*this, hs);
  std::size_t n = 0;
  for (auto h : hs) n = std::max(n, h + 1);
  return n;
}

bool Pattern::linear() const {
  std::vector<std::size_t> hs;
  holes_of(*this, hs);
  std::sort(hs.begin(), hs.end());
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (hs[i] != i) return false;
  return true;
}

std::string Pattern::str() const {
  if (is_hole()) return "$" + std::to_string(*hole + 1);
  std::string out = rule->key();
  if (kids.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) out += ", ";
    out += kids[i].str();
  }
  return out + ")";
}

std::optional<std::vector<DTree>> pattern_match(const Pattern& p, const DTree& t) {
  std::vector<std::size_t> hs;
  holes_of(p, hs);
  std::sort(hs.begin(), hs.end());
  if (std::adjacent_find(hs.begin(), hs.end()) != hs.end())
    throw NotLinear("pattern " + p.str() + " repeats a hole");
  std::vector<DTree> out(p.arity());
  if (!match_into(p, t, out)) return std::nullopt;
  return out;
}

DTree pattern_fill(const Pattern& p, const std::vector<DTree>& children, TreeBuilder& b) {
  if (p.is_hole()) {
    if (*p.hole >= children.size()) throw DomainError("pattern hole $" + std::to_string(*p.hole + 1) + " has no filler");
    return children[*p.hole];
  }
  std::vector<DTree> kids;
  kids.reserve(p.kids.size());
  for (const auto& k : p.kids) kids.push_back(pattern_fill(k, children, b));
  return b.node(p.rule, kids);
}

DTree pattern_fill(const Pattern& p, const std::vector<DTree>& children) {
  TreeBuilder b;
  return pattern_fill(p, children, b);
}

Pattern parse_pattern(std::string_view text, const RuleFamily& fam) {
  Cursor c(text);
  Pattern p = parse_pat(c, fam);
  if (!c.at_end()) c.fail("unexpected trailing input");
  return p;
}

}  // namespace coind
