#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace coind {

/// Ordinal below epsilon_0 in Cantor normal form: sum of w^e_i * c_i with
/// strictly decreasing exponents and positive coefficients.
class Ordinal {
 public:
  struct Term;

  Ordinal() = default;  // zero

  static Ordinal from(std::uint64_t n);
  static Ordinal omega();
  /// w^e * c; c == 0 yields zero.
  static Ordinal power(const Ordinal& e, std::uint64_t c = 1);
  /// Builds from terms; throws DomainError if not in normal form.
  static Ordinal from_terms(std::vector<Term> terms);
  /// Parses `0`, `3`, `w`, `w*2+1`, `w^2*3+w+1`, `w^(w+1)`; unicode `ω` accepted.
  static Ordinal parse(std::string_view text);

  const std::vector<Term>& terms() const;
  bool is_zero() const { return !terms_ || terms_->empty(); }
  bool is_finite() const;
  bool is_successor() const;
  bool is_limit() const { return !is_zero() && !is_successor(); }
  /// Finite value; only meaningful when is_finite().
  std::uint64_t finite_value() const;

  Ordinal succ() const;
  /// Ordinary (non-commutative) ordinal addition.
  Ordinal operator+(const Ordinal& o) const;

  std::string str() const;

  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  std::shared_ptr<const std::vector<Term>> terms_;
};

struct Ordinal::Term {
  Ordinal exponent;
  std::uint64_t coefficient = 1;
};

enum class Ordering { LT, EQ, GT };

Ordering ord_compare(const Ordinal& a, const Ordinal& b);
Ordinal ord_max(const Ordinal& a, const Ordinal& b);
/// max(a + 1, b)
Ordinal ord_max_succ(const Ordinal& a, const Ordinal& b);

}  // namespace coind
