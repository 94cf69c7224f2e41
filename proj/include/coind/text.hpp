#pragma once

#include <cstddef>
#include <functional>
#include <unordered_map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coind/dtree.hpp"
#include "coind/error.hpp"
#include "coind/statement.hpp"

namespace coind {

/// Character cursor with line/column tracking and `-- comment` skipping.
class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws();
  bool at_end();
  char peek();
  /// True (and consumes) when the next non-blank text is `s`.
  bool accept(std::string_view s);
  void expect(std::string_view s);
  /// Keyword match that does not swallow a prefix of a longer identifier.
  bool accept_word(std::string_view w);
  bool at_ident();
  std::string ident();
  std::string number();
  /// Raw text up to the bracket matching an already consumed opener.
  std::string balanced(char open, char close);
  /// Raw text until one of `stops` at bracket depth zero (not consumed).
  std::string until(std::string_view stops);

  std::size_t pos() const { return pos_; }
  void reset(std::size_t p) { pos_ = p; }
  std::string_view rest() const { return text_.substr(pos_); }
  [[noreturn]] void fail(const std::string& msg) const;
  std::pair<std::size_t, std::size_t> line_col() const;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_ident_char(char c);
std::string trim(std::string_view s);
/// Splits at `sep` occurring at bracket depth zero.
std::vector<std::string> split_top(std::string_view s, char sep);

/// Parses one tree; labels bound by enclosing `rec` are back edges. Rejects
/// cycles that cross no coinductive premiss.
DTree parse_tree(Cursor& c, const RuleFamily& fam, TreeBuilder& b);
DTree parse_tree(std::string_view text, const RuleFamily& fam);

/// Parses `name` `(digits)`? `[raw]`? and returns the pieces.
struct RuleHead {
  std::string name;
  std::string paren;
  std::string params;
};
RuleHead parse_rule_head(Cursor& c);

/// Output budget for printers (number of nodes written).
inline constexpr std::size_t kPrintBudget = 1u << 20;

/// Prints with `rec Ln.` labels on cycles; shared acyclic parts are duplicated.
std::string print_tree(const DTree& t, std::size_t budget = kPrintBudget);

/// Prints a node graph, introducing `rec L` binders exactly where a node is
/// re-entered while it is still being printed. `render(handle, kid_texts)`
/// writes one node; `annot(handle)` is appended to the binder label.
template <class P, class Render, class Annot>
std::string print_graph(const graph::Handle<P>& root, Render render, Annot annot,
                        const std::vector<std::string>& reserved, std::size_t budget = kPrintBudget) {
  std::unordered_map<const void*, std::string> open;  // node -> label ("" until needed)
  std::size_t next = 0;
  std::size_t written = 0;
  auto fresh = [&]() {
    for (;;) {
      std::string l = "L" + std::to_string(next++);
      bool clash = false;
      for (const auto& r : reserved) clash = clash || r == l;
      if (!clash) return l;
    }
  };
  std::function<std::string(const graph::Handle<P>&)> rec = [&](const graph::Handle<P>& h0) -> std::string {
    graph::Handle<P> h = graph::resolve(h0);
    if (auto it = open.find(h.slot); it != open.end()) {
      if (it->second.empty()) it->second = fresh();
      return it->second;
    }
    if (++written > budget) throw NotRegular("printed form exceeds its budget");
    open.emplace(h.slot, std::string());
    std::vector<std::string> ks;
    for (const auto& k : graph::kids(h)) ks.push_back(rec(k));
    std::string body = render(h, ks);
    std::string label = std::move(open[h.slot]);
    open.erase(h.slot);
    if (label.empty()) return body;
    return "rec " + label + annot(h) + ". " + body;
  };
  return rec(root);
}

}  // namespace coind
