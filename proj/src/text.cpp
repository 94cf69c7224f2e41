#include "coind/text.hpp"

#include <cctype>
#include <unordered_set>

namespace coind {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '%' || c == '\'' || c == '!' ||
         c == '?';
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_top(std::string_view s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

void Cursor::skip_ws() {
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
    } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
    } else {
      break;
    }
  }
}

bool Cursor::at_end() {
  skip_ws();
  return pos_ >= text_.size();
}

char Cursor::peek() {
  skip_ws();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool Cursor::accept(std::string_view s) {
  skip_ws();
  if (text_.substr(pos_, s.size()) == s) {
    pos_ += s.size();
    return true;
  }
  return false;
}

void Cursor::expect(std::string_view s) {
  if (!accept(s)) {
    if (pos_ >= text_.size()) fail("expected '" + std::string(s) + "' but reached end of input");
    fail("expected '" + std::string(s) + "'");
  }
}

bool Cursor::accept_word(std::string_view w) {
  skip_ws();
  if (text_.substr(pos_, w.size()) != w) return false;
  std::size_t e = pos_ + w.size();
  if (e < text_.size() && is_ident_char(text_[e])) return false;
  pos_ = e;
  return true;
}

bool Cursor::at_ident() {
  skip_ws();
  return pos_ < text_.size() && is_ident_char(text_[pos_]);
}

std::string Cursor::ident() {
  skip_ws();
  std::size_t s = pos_;
  while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
  if (s == pos_) fail(pos_ >= text_.size() ? "unexpected end of input" : "expected an identifier");
  return std::string(text_.substr(s, pos_ - s));
}

std::string Cursor::number() {
  skip_ws();
  std::size_t s = pos_;
  while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  if (s == pos_) fail("expected a number");
  return std::string(text_.substr(s, pos_ - s));
}

std::string Cursor::balanced(char open, char close) {
  int depth = 1;
  std::size_t s = pos_;
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (c == open) ++depth;
    if (c == close && --depth == 0) {
      std::string out(text_.substr(s, pos_ - s));
      ++pos_;
      return out;
    }
    ++pos_;
  }
  fail(std::string("unbalanced '") + open + "'");
}

std::string Cursor::until(std::string_view stops) {
  int depth = 0;
  std::size_t s = pos_;
  while (pos_ < text_.size()) {
    char c = text_[pos_];
    if (depth == 0 && stops.find(c) != std::string_view::npos) break;
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') {
      if (depth == 0) break;
      --depth;
    }
    ++pos_;
  }
  return std::string(text_.substr(s, pos_ - s));
}

std::pair<std::size_t, std::size_t> Cursor::line_col() const {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
    if (text_[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void Cursor::fail(const std::string& msg) const {
  auto [l, c] = line_col();
  throw SyntaxError(msg, l, c);
}

RuleHead parse_rule_head(Cursor& c) {
  RuleHead h;
  h.name = c.ident();
  std::string_view r = c.rest();
  // `(digits)` directly after the name is a parameter, not a premiss list.
  if (!r.empty() && r[0] == '(') {
    std::size_t i = 1;
    while (i < r.size() && std::isdigit(static_cast<unsigned char>(r[i]))) ++i;
    if (i > 1 && i < r.size() && r[i] == ')') {
      h.paren = std::string(r.substr(1, i - 1));
      c.expect("(");
      c.number();
      c.expect(")");
    }
  }
  if (!c.rest().empty() && c.rest()[0] == '[') {
    c.expect("[");
    h.params = c.balanced('[', ']');
  }
  return h;
}

namespace {

struct TreeParser {
  Cursor& c;
  const RuleFamily& fam;
  TreeBuilder& b;
  std::vector<std::pair<std::string, DTree>> scope;
  std::vector<std::pair<DTree, Statement>> binders;

  Statement rec_statement() {
    if (c.accept("[")) return fam.parse_statement(c.balanced('[', ']'));
    if (!fam.has_default_statement()) c.fail("rec binder needs a statement annotation [..]");
    return fam.default_statement();
  }

  DTree parse() {
    if (c.accept_word("rec")) {
      std::string label = c.ident();
      Statement s = rec_statement();
      c.expect(".");
      DTree bnd = b.binder(s);
      scope.emplace_back(label, bnd);
      DTree body = parse();
      scope.pop_back();
      b.bind(bnd, body);
      binders.emplace_back(bnd, s);
      return bnd;
    }
    if (c.accept("*")) return b.trunc(Statement::unit());
    if (c.accept("#")) {
      c.expect("[");
      return b.trunc(fam.parse_statement(c.balanced('[', ']')));
    }
    if (!c.at_ident()) {
      if (c.at_end()) c.fail("unexpected end of input");
      c.fail("expected a tree");
    }
    auto [line, col] = c.line_col();
    RuleHead h = parse_rule_head(c);
    if (h.paren.empty() && h.params.empty() && c.peek() != '(') {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == h.name) return it->second;
    }
    std::vector<DTree> kids;
    if (c.accept("(")) {
      if (!c.accept(")")) {
        do kids.push_back(parse());
        while (c.accept(","));
        c.expect(")");
      }
    }
    try {
      RulePtr r = fam.make_rule(h.name, h.params, h.paren, kids.size());
      return b.node(std::move(r), kids);
    } catch (const DomainError& e) {
      throw SyntaxError(e.what(), line, col);
    }
  }
};

}  // namespace

DTree parse_tree(Cursor& c, const RuleFamily& fam, TreeBuilder& b) {
  TreeParser p{c, fam, b, {}, {}};
  DTree t = p.parse();
  for (const auto& [bnd, s] : p.binders) {
    if (!(bnd.statement() == s))
      throw DomainError("rec binder annotated " + s.str() + " but its body concludes " + bnd.node().stmt.str());
  }
  if (has_unguarded_cycle(t)) throw DomainError("unguarded cycle: a rec loop crosses no coinductive premiss");
  return t;
}

DTree parse_tree(std::string_view text, const RuleFamily& fam) {
  Cursor c(text);
  TreeBuilder b;
  DTree t = parse_tree(c, fam, b);
  if (!c.at_end()) c.fail("unexpected trailing input");
  return t;
}

std::string print_tree(const DTree& t, std::size_t budget) {
  std::vector<std::string> reserved;
  {
    auto g = graph::explore(t.handle(), budget);
    std::unordered_set<std::string> seen;
    for (const auto& h : g.nodes) {
      const std::string& k = graph::payload(h).rule->key();
      if (seen.insert(k).second) reserved.push_back(k);
    }
  }
  auto render = [](const TreeHandle& h, const std::vector<std::string>& ks) {
    std::string out = graph::payload(h).rule->key();
    if (ks.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (i) out += ", ";
      out += ks[i];
    }
    return out + ")";
  };
  auto annot = [](const TreeHandle& h) -> std::string {
    const Statement& s = graph::payload(h).stmt;
    return s.is_unit() ? "" : "[" + s.str() + "]";
  };
  return print_graph(t.handle(), render, annot, reserved, budget);
}

}  // namespace coind
