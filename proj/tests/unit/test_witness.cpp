#include "doctest.h"

#include "coind/text.hpp"
#include "support.hpp"

using namespace coind;
using namespace coind::testing;

namespace {

Witness wit(const fo::System& sys, const char* text) { return parse_witness(text, sys.family()); }

bool has_tag(const std::vector<Violation>& vs, const std::string& tag) {
  for (const auto& v : vs)
    if (v.tag == tag) return true;
  return false;
}

}  // namespace

TEST_CASE("reflexive witnesses validate") {
  auto sys = intro_system();
  DTree t = parse_tree("f(g(a))", sys->family());
  for (const auto& g : {Ordinal(), Ordinal::from(2), Ordinal::omega()}) {
    CHECK(validate_witness(hat_to_full(refl_hat(t, g)), *sys, 6).empty());
    CHECK(validate_witness(refl_full(t, g), *sys, 6).empty());
  }
  CHECK(witness_state_count(refl_hat(t, Ordinal())) == 5);  // three lifts, two splits
  DTree fw = parse_tree("rec x. f(x)", sys->family());
  CHECK(print_tree(target_truncation(refl_full(fw, Ordinal()), 3)) == "f(f(f(*)))");
}

TEST_CASE("weakening") {
  auto sys = intro_system();
  DTree t = parse_tree("f(a)", sys->family());
  Witness w = refl_full(t, Ordinal::from(1));
  Witness up = weaken(w, Ordinal::omega());
  CHECK(up.ordinal() == Ordinal::omega());
  CHECK(validate_witness(up, *sys, 4).empty());
  CHECK_THROWS_AS(weaken(refl_full(t, Ordinal::omega()), Ordinal::from(2)), OrdinalNotLarger);
}

TEST_CASE("hat concatenation") {
  auto sys = intro_system();
  DTree t = parse_tree("f(g(a))", sys->family());
  Witness h = concat_hat(refl_hat(t, Ordinal::from(1)), refl_hat(t, Ordinal::from(1)));
  CHECK(h.ordinal() == Ordinal::from(2));
  CHECK(validate_witness(hat_to_full(h), *sys, 4).empty());
  CHECK_THROWS_AS(concat_hat(refl_hat(t, Ordinal()), refl_hat(parse_tree("a", sys->family()), Ordinal())),
                  EndpointMismatch);
}

TEST_CASE("the omega*2 witness") {
  auto sys = intro_system();
  Witness w = intro_witness(*sys);
  CHECK(validate_witness(w, *sys, 8).empty());
  CHECK(w.ordinal() == Ordinal::from(1));
  CHECK(print_tree(target_truncation(w, 2)) == "f(f(*))");
  CHECK(print_tree(witness_source(w)) == "a");
  Witness again = parse_witness(print_witness(w), sys->family());
  CHECK(witness_bisimilar(w, again));
}

TEST_CASE("compression of the omega*2 witness") {
  auto sys = intro_system();
  Engine e(sys);
  Witness c = e.compress(intro_witness(*sys));
  Observation o = observe_omega(c, 3, *sys);
  CHECK(print_tree(o.certificate) == "f(f(f(*)))");
  REQUIRE(o.steps.size() >= 3);
  CHECK(o.steps[0].name == "r1");
  CHECK(o.steps[1].name == "r1");
  CHECK(o.steps[2].name == "r2");
  DTree a = parse_tree("a", sys->family());
  CHECK(print_tree(replay(a, {o.steps.begin(), o.steps.begin() + 3}, *sys)) == "f(f(g(a)))");
  Observation zero = observe_omega(c, 0, *sys);
  CHECK(zero.steps.empty());
  CHECK(print_tree(zero.certificate) == "*");
}

TEST_CASE("compression of a reflexive witness is reflexive") {
  auto sys = intro_system();
  DTree fw = parse_tree("rec x. f(x)", sys->family());
  Engine e(sys);
  Witness c = e.compress(refl_full(fw, Ordinal::omega()));
  Observation o = observe_omega(c, 4, *sys);
  CHECK(o.steps.empty());
  CHECK(print_tree(o.certificate) == "f(f(f(f(*))))");
}

TEST_CASE("validator violations") {
  auto sys = intro_system();
  CHECK(has_tag(validate_witness(wit(*sys, "split@1{ src: a ; seg [] lift@1 a ; steps [] ; final lift@1 a }"), *sys, 4),
                vtag::kOrdinal));
  CHECK(has_tag(validate_witness(wit(*sys, "split@0{ src: a ; steps [r2@[]] ; final lift@0 a }"), *sys, 4),
                vtag::kBadStep));
  auto loop = fo::parse_trs("sig g/1 a/0 ;\ninductive g.1 ;\nr1: a -> g(a) ;\n");
  Witness w = wit(*loop, "rec V. split@0{ src: a ; steps [r1@[]] ; final lift@0 g(V) }");
  CHECK(has_tag(validate_witness(w, *loop, 4), vtag::kUnguarded));
  CHECK_THROWS_AS(target_truncation(w, 2), NonProductive);
}

TEST_CASE("generated witnesses are valid") {
  Rng rng(5);
  auto sys = fo_test_system();
  for (int i = 0; i < 30; ++i) {
    WitnessGen gen(*sys, rng);
    Witness w = gen.full(fo_sources(rng, *sys, 1)[0], random_ordinal(rng));
    auto vs = validate_witness(w, *sys, 6);
    CHECK_MESSAGE(vs.empty(), print_witness(w));
  }
}
