#include "doctest.h"

#include "coind/pattern.hpp"
#include "coind/text.hpp"
#include "support.hpp"

using namespace coind;
using namespace coind::testing;

namespace {

std::shared_ptr<fo::System> intro() { return intro_system(); }

DTree tree(const fo::System& sys, const char* text) { return parse_tree(text, sys.family()); }

}  // namespace

TEST_CASE("ordinal comparison") {
  CHECK(ord_compare(Ordinal(), Ordinal()) == Ordering::EQ);
  CHECK(ord_compare(Ordinal::omega(), Ordinal::from(3)) == Ordering::GT);
  CHECK(ord_compare(Ordinal::parse("w*2+1"), Ordinal::parse("w*3")) == Ordering::LT);
  CHECK(Ordinal::parse("w^2") > Ordinal::parse("w*5+7"));
  CHECK(Ordinal::parse("w+1").is_successor());
  CHECK_FALSE(Ordinal::omega().is_successor());
  CHECK(Ordinal::parse("w*2+1").str() == "w*2+1");
}

TEST_CASE("ordinal max successor") {
  CHECK(ord_max_succ(Ordinal(), Ordinal()) == Ordinal::from(1));
  CHECK(ord_max_succ(Ordinal::omega(), Ordinal::omega()) == Ordinal::parse("w+1"));
  CHECK(ord_max_succ(Ordinal::from(2), Ordinal::omega()) == Ordinal::omega());
}

TEST_CASE("ordinal syntax errors") { CHECK_THROWS_AS(Ordinal::parse("w*"), SyntaxError); }

TEST_CASE("truncation") {
  auto sys = intro();
  DTree fw = tree(*sys, "rec x. f(x)");
  CHECK(print_tree(truncate(fw, 0)) == "*");
  CHECK(print_tree(truncate(fw, 2)) == "f(f(*))");
  CHECK(print_tree(truncate(tree(*sys, "f(g(a))"), 5)) == "f(g(a))");
}

TEST_CASE("unfolding a cyclic tree") {
  auto sys = intro();
  DTree fw = tree(*sys, "rec x. f(x)");
  auto [rule, kids] = tree_unfold(fw);
  CHECK(rule->key() == "f");
  REQUIRE(kids.size() == 1);
  CHECK(bisimilar(kids[0], fw));
}

TEST_CASE("distance") {
  auto sys = intro();
  DTree s = tree(*sys, "f(g(a))");
  Distance self = tree_distance(s, s, 5);
  CHECK_FALSE(self.decided);
  CHECK(self.str() == "<=2^-5");
  Distance d = tree_distance(s, tree(*sys, "f(g(f(g(a))))"), 8);
  CHECK(d.decided);
  CHECK(d.exponent == 2);
  Distance root = tree_distance(tree(*sys, "a"), s, 8);
  CHECK(root.decided);
  CHECK(root.value() == doctest::Approx(1.0));
}

TEST_CASE("bisimilarity") {
  auto sys = intro();
  CHECK(bisimilar(tree(*sys, "rec x. f(x)"), tree(*sys, "rec y. f(f(y))")));
  CHECK_FALSE(bisimilar(tree(*sys, "rec x. f(x)"), tree(*sys, "rec x. g(x)")));
  CHECK(bisimilar(tree(*sys, "rec x. f(g(x))"), tree(*sys, "f(rec y. g(f(y)))")));
}

TEST_CASE("tree syntax") {
  auto sys = intro();
  CHECK_THROWS_AS(tree(*sys, "rec x. f("), SyntaxError);
  CHECK_THROWS_AS(tree(*sys, "f(a, a)"), Error);
  CHECK(state_count(tree(*sys, "rec x. f(g(x))")) == 2);
  CHECK(finite_size(tree(*sys, "f(g(a))")) == 3);
}

TEST_CASE("patterns") {
  auto sys = intro();
  Pattern p = parse_pattern("f(g($1))", sys->family());
  auto m = pattern_match(p, tree(*sys, "f(g(a))"));
  REQUIRE(m);
  CHECK(print_tree((*m)[0]) == "a");
  CHECK_FALSE(pattern_match(parse_pattern("f($1)", sys->family()), tree(*sys, "g(a)")));
  CHECK(print_tree(pattern_fill(p, {tree(*sys, "a")})) == "f(g(a))");
  auto id = pattern_match(Pattern::make_hole(0), tree(*sys, "g(a)"));
  REQUIRE(id);
  CHECK(print_tree((*id)[0]) == "g(a)");
}

TEST_CASE("zero steps") {
  auto sys = intro();
  DTree a = tree(*sys, "a");
  CHECK(print_tree(apply_step(a, Step{{}, "r1", 0}, *sys)) == "f(g(a))");
  DTree t = tree(*sys, "f(g(f(g(a))))");
  CHECK(print_tree(apply_step(t, Step{{0}, "r2", 1}, *sys)) == "f(f(g(a)))");
  CHECK_THROWS_AS(apply_step(a, Step{{0}, "r1", 1}, *sys), BadPath);
  CHECK_THROWS_AS(apply_step(a, Step{{}, "r2", 0}, *sys), Error);
}

TEST_CASE("step text") {
  Cursor c("r2@[1,2]");
  Step st = parse_step(c);
  CHECK(st.name == "r2");
  CHECK(st.path == std::vector<std::size_t>{0, 1});
  CHECK(steps_str({st}) == "[r2@[1,2]]");
}

TEST_CASE("random trees truncate like the naive unfolding") {
  Rng rng(11);
  auto sig = mixed_signature();
  for (int i = 0; i < 50; ++i) {
    DTree t = build_tree(*sig, random_tree_spec(rng, *sig, 5));
    for (std::size_t d = 0; d < 5; ++d) CHECK(print_tree(truncate(t, d)) == naive_truncation(t, d));
    CHECK_FALSE(has_unguarded_cycle(t));
  }
}
