#include "doctest.h"

#include "coind/text.hpp"
#include "support.hpp"

using namespace coind;
using namespace coind::testing;
using namespace coind::mumall;

namespace {

Formula F(const char* s) { return parse_formula(s); }
Sequent conc(const DTree& t) { return sequent_of(t.statement()); }

bool has_step(const std::vector<RootStep>& steps, StepKind k) {
  for (const auto& s : steps)
    if (s.kind == k) return true;
  return false;
}

}  // namespace

TEST_CASE("negation") {
  CHECK(neg(F("1")) == F("bot"));
  CHECK(neg(neg(F("A"))) == F("A"));
  CHECK(neg(F("mu X. X plus 1")) == F("nu X. X with bot"));
  CHECK(neg(F("A tens ~B")) == F("~A par B"));
  CHECK_THROWS_AS(F("A tens"), SyntaxError);
}

TEST_CASE("substitution and unfolding") {
  CHECK(formula_subst(Formula::var("X"), F("mu X. X"), "X") == F("mu X. X"));
  CHECK(formula_subst(Formula::plus(Formula::var("X"), F("1")), F("A"), "X") == F("A plus 1"));
  CHECK(unfold(F("mu X. X")) == F("mu X. X"));
  CHECK(unfold(F("nu X. X par bot")) == F("(nu X. X par bot) par bot"));
  CHECK(unfold(F("mu X. (nu Y. X par Y)")) == F("nu Y. (mu X. (nu Y. X par Y)) par Y"));
}

TEST_CASE("rule conclusions") {
  Statement a = ax_rule(F("A"))->conclude({});
  CHECK(sequent_of(a) == Sequent{F("A"), F("~A")});
  Statement p = par_rule()->conclude(std::vector<Statement>{sequent_statement({F("C"), F("A"), F("B")})});
  CHECK(sequent_of(p) == Sequent{F("C"), F("A par B")});
  Statement t = tens_rule()->conclude(
      std::vector<Statement>{sequent_statement({F("C"), F("A")}), sequent_statement({F("D"), F("B")})});
  CHECK(sequent_of(t) == Sequent{F("C"), F("D"), F("A tens B")});
  CHECK_THROWS_AS(par_rule()->conclude(std::vector<Statement>{sequent_statement({F("A")})}), DomainError);
  CHECK_THROWS_AS(mu_rule(F("mu X. X plus 1"))->conclude(std::vector<Statement>{sequent_statement({F("1")})}),
                  DomainError);
}

TEST_CASE("multicut conclusions") {
  CutRel both({{Coord{0, 0}, Coord{1, 0}}});
  auto full = validate_multicut(2, {1, 1}, both, {{F("A tens B")}, {F("~A par ~B")}});
  CHECK(full.ok());
  CHECK(full.conclusion.empty());

  auto one = validate_multicut(1, {1}, CutRel{}, {{F("A")}});
  CHECK(one.ok());
  CHECK(one.conclusion == Sequent{F("A")});

  CutRel chain({{Coord{0, 1}, Coord{1, 0}}, {Coord{1, 1}, Coord{2, 0}}});
  auto c = validate_multicut(3, {2, 2, 2}, chain,
                             {{F("A"), F("1")}, {F("bot"), F("top")}, {F("0"), F("B")}});
  CHECK(c.ok());
  CHECK(c.conclusion == Sequent{F("A"), F("B")});

  auto bad = validate_multicut(2, {1, 1}, both, {{F("1")}, {F("1")}});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.violations[0].rfind("duality", 0) == 0);

  auto apart = validate_multicut(2, {1, 1}, CutRel{}, {{F("1")}, {F("1")}});
  CHECK_FALSE(apart.ok());

  CutRel twice({{Coord{0, 0}, Coord{1, 0}}, {Coord{0, 1}, Coord{1, 1}}});
  CHECK_FALSE(validate_multicut(2, {2, 2}, twice, {{F("1"), F("A")}, {F("bot"), F("~A")}}).ok());
}

TEST_CASE("cut relations are sets") {
  CutRel r({{Coord{1, 0}, Coord{0, 0}}, {Coord{0, 0}, Coord{1, 0}}});
  CHECK(r.size() == 1);
  CHECK(r.partner(Coord{1, 0}) == Coord{0, 0});
  r.add(Coord{0, 0}, Coord{1, 0});
  CHECK(r.size() == 1);
}

TEST_CASE("reindexing") {
  CutRel r({{Coord{0, 0}, Coord{1, 0}}});
  IndexMap id{{Coord{0, 0}, Coord{0, 0}}, {Coord{1, 0}, Coord{1, 0}}};
  CHECK(reindex_cutrel(id, r) == r);
  IndexMap moved{{Coord{0, 0}, Coord{0, 0}}, {Coord{2, 1}, Coord{1, 0}}};
  CHECK(reindex_cutrel(moved, r).partner(Coord{0, 0}) == Coord{2, 1});
}

TEST_CASE("tensor partitions") {
  CutRel none;
  auto [g0, d0] = partition_tensor_premisses(none, {2}, 0, 1);
  CHECK(g0.empty());
  CHECK(d0.empty());
  // premiss 0 cut into Gamma, premiss 1 reaches Delta through premiss 2
  CutRel r({{Coord{0, 0}, Coord{3, 0}}, {Coord{1, 0}, Coord{2, 0}}, {Coord{2, 1}, Coord{3, 1}}});
  auto [g, d] = partition_tensor_premisses(r, {1, 1, 2, 3}, 3, 1);
  CHECK(g == std::vector<std::size_t>{0});
  CHECK(d == std::vector<std::size_t>{1, 2});
}

TEST_CASE("root steps on bot/one") {
  DTree p = parse_proof("mcut[2;2,1;1.2~2.1](bot(one), one)");
  auto steps = applicable_root_steps(p);
  CHECK(has_step(steps, StepKind::BotOne));
  DTree r = apply_root_step(RootStep{StepKind::BotOne, {}}, p);
  CHECK(conc(r) == conc(p));
  CHECK(rule_kind(r.resolved().rule()) == RKind::Mcut);
  CHECK(mcut_params(r.resolved().rule()).k == 1);

  DTree u = parse_proof("mcut[1;1](one)");
  DTree one = apply_root_step(RootStep{StepKind::CommOne, {}}, u);
  CHECK(rule_kind(one.resolved().rule()) == RKind::One);
}

TEST_CASE("root steps on par and axioms") {
  DTree p = parse_proof("mcut[1;1](par(ax[A]))");
  CHECK(has_step(applicable_root_steps(p), StepKind::CommPar));
  DTree q = parse_proof("mcut[2;2,1;1.2~2.1](ax[1], one)");
  CHECK(has_step(applicable_root_steps(q), StepKind::Ax));
  DTree r = apply_root_step(RootStep{StepKind::Ax, {}}, q);
  CHECK(conc(r) == conc(q));
}

TEST_CASE("tensor against par") {
  DTree p = parse_proof("mcut[2;2,2;1.2~2.2](tens(ax[A], one), par(bot(ax[~A])))");
  REQUIRE(has_step(applicable_root_steps(p), StepKind::TensorPar));
  auto plan = plan_root_step(p, RootStep{StepKind::TensorPar, {}});
  CHECK(plan.fresh_pairs == 2);
  CHECK(plan.dropped_pairs == 1);
  DTree r = apply_root_step(RootStep{StepKind::TensorPar, {}}, p);
  CHECK(conc(r) == conc(p));
  CHECK(conc(p) == Sequent{F("A"), F("~A")});
  CHECK(mcut_params(r.resolved().rule()).rel.size() == 2);
}

TEST_CASE("checking proofs") {
  auto ok = check_proof("mcut[2;2,1;1.2~2.1](bot(one), one)");
  CHECK(ok.violations.empty());
  auto bad = check_proof("mcut[2;1,1;1.1~2.1](one, one)");
  REQUIRE_FALSE(bad.violations.empty());
  CHECK(bad.violations[0].find("duality") != std::string::npos);
  CHECK_THROWS_AS(parse_proof("mcut[2;1,1;1.1~2.1](one, one)"), Error);
}

TEST_CASE("cut elimination") {
  auto nu = cut_elim_observe(parse_proof("cut(rec L[|- nu X. X]. nu[nu X. X](L), ax[nu X. X])"), 3, 10);
  CHECK_FALSE(nu.stuck);
  CHECK(nu.wrapped);
  CHECK(nu.steps.size() <= 10);
  CHECK(cuts_within(nu.truncation, 4).empty());

  DTree free = parse_proof("par(ax[A])");
  auto none = cut_elim_observe(free, 3);
  CHECK(none.steps.empty());
  CHECK(finite_equal(none.truncation, truncate(free, 3)));

  auto stuck = cut_elim_observe(
      parse_proof("mcut[2;1,1;1.1~2.1](rec L[|- nu X. X]. nu[nu X. X](L), rec M[|- mu X. X]. mu[mu X. X](M))"), 3, 20);
  CHECK(stuck.stuck);
}

TEST_CASE("generated proofs are well-formed") {
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    DTree p = wrap_mcut(random_proof(rng, random_formula(rng, 3), 4, 0.4));
    CHECK(check_conclusions(p, 8).empty());
    auto oc = oracle_conclusion(p);
    REQUIRE(oc);
    CHECK(*oc == conc(p));
  }
}
