#include "coind/ordinal.hpp"

#include <cctype>

#include "coind/error.hpp"

namespace coind {

namespace {

const std::vector<Ordinal::Term>& empty_terms() {
  static const std::vector<Ordinal::Term> empty;
  return empty;
}

class OrdParser {
 public:
  explicit OrdParser(std::string_view s) : s_(s) {}

  Ordinal run() {
    Ordinal o = sum();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return o;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError("ordinal: " + msg, 1, i_ + 1);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  bool eat_omega() {
    skip();
    if (i_ < s_.size() && s_[i_] == 'w') {
      ++i_;
      return true;
    }
    static const std::string_view kOmega = "\xCF\x89";
    if (s_.substr(i_, kOmega.size()) == kOmega) {
      i_ += kOmega.size();
      return true;
    }
    return false;
  }

  std::uint64_t number() {
    skip();
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) fail("expected number");
    std::uint64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      v = v * 10 + static_cast<std::uint64_t>(s_[i_] - '0');
      ++i_;
    }
    return v;
  }

  Ordinal sum() {
    Ordinal acc = term();
    while (eat('+')) acc = acc + term();
    return acc;
  }

  Ordinal term() {
    if (eat_omega()) {
      Ordinal e = Ordinal::from(1);
      if (eat('^')) {
        if (eat('(')) {
          e = sum();
          if (!eat(')')) fail("expected ')'");
        } else if (eat_omega()) {
          e = Ordinal::omega();
        } else {
          e = Ordinal::from(number());
        }
      }
      std::uint64_t c = 1;
      if (eat('*') || eat('.')) c = number();
      return Ordinal::power(e, c);
    }
    if (eat('(')) {
      Ordinal o = sum();
      if (!eat(')')) fail("expected ')'");
      return o;
    }
    return Ordinal::from(number());
  }
};

}  // namespace

const std::vector<Ordinal::Term>& Ordinal::terms() const { return terms_ ? *terms_ : empty_terms(); }

Ordinal Ordinal::from(std::uint64_t n) {
  if (n == 0) return Ordinal();
  return power(Ordinal(), n);
}

Ordinal Ordinal::omega() { return power(from(1), 1); }

Ordinal Ordinal::power(const Ordinal& e, std::uint64_t c) {
  Ordinal o;
  if (c == 0) return o;
  o.terms_ = std::make_shared<const std::vector<Term>>(std::vector<Term>{Term{e, c}});
  return o;
}

Ordinal Ordinal::from_terms(std::vector<Term> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coefficient == 0) throw DomainError("ordinal: zero coefficient");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw DomainError("ordinal: exponents not strictly decreasing");
  }
  Ordinal o;
  if (!terms.empty()) o.terms_ = std::make_shared<const std::vector<Term>>(std::move(terms));
  return o;
}

Ordinal Ordinal::parse(std::string_view text) { return OrdParser(text).run(); }

bool Ordinal::is_finite() const {
  const auto& t = terms();
  return t.empty() || (t.size() == 1 && t[0].exponent.is_zero());
}

bool Ordinal::is_successor() const {
  const auto& t = terms();
  return !t.empty() && t.back().exponent.is_zero();
}

std::uint64_t Ordinal::finite_value() const {
  const auto& t = terms();
  if (t.empty()) return 0;
  return t.back().exponent.is_zero() ? t.back().coefficient : 0;
}

Ordinal Ordinal::succ() const { return *this + from(1); }

Ordinal Ordinal::operator+(const Ordinal& o) const {
  if (o.is_zero()) return *this;
  if (is_zero()) return o;
  const auto& a = terms();
  const auto& b = o.terms();
  const Ordinal& lead = b.front().exponent;
  std::vector<Term> out;
  for (const auto& t : a) {
    if (t.exponent > lead) {
      out.push_back(t);
    } else if (t.exponent == lead) {
      out.push_back(Term{t.exponent, t.coefficient + b.front().coefficient});
      out.insert(out.end(), b.begin() + 1, b.end());
      return from_terms(std::move(out));
    } else {
      break;
    }
  }
  out.insert(out.end(), b.begin(), b.end());
  return from_terms(std::move(out));
}

std::string Ordinal::str() const {
  const auto& t = terms();
  if (t.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += "+";
    const auto& e = t[i].exponent;
    if (e.is_zero()) {
      s += std::to_string(t[i].coefficient);
      continue;
    }
    s += "w";
    if (!(e == from(1))) {
      if (e.is_finite())
        s += "^" + e.str();
      else if (e == omega())
        s += "^w";
      else
        s += "^(" + e.str() + ")";
    }
    if (t[i].coefficient != 1) s += "*" + std::to_string(t[i].coefficient);
  }
  return s;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto c = x[i].exponent <=> y[i].exponent;
    if (c != std::strong_ordering::equal) return c;
    if (x[i].coefficient != y[i].coefficient) return x[i].coefficient <=> y[i].coefficient;
  }
  return x.size() <=> y.size();
}

Ordering ord_compare(const Ordinal& a, const Ordinal& b) {
  auto c = a <=> b;
  if (c == std::strong_ordering::less) return Ordering::LT;
  if (c == std::strong_ordering::greater) return Ordering::GT;
  return Ordering::EQ;
}

Ordinal ord_max(const Ordinal& a, const Ordinal& b) { return a < b ? b : a; }

Ordinal ord_max_succ(const Ordinal& a, const Ordinal& b) { return ord_max(a.succ(), b); }

}  // namespace coind
