// Acceptance checks; prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion...]   (default: all)

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coind/text.hpp"
#include "support.hpp"

using namespace coind;
using namespace coind::testing;

namespace {

// Pinned limits.
constexpr double kIntroSeconds = 1.0;
constexpr double kTreeSeconds = 5.0;
constexpr double kCompressSeconds = 60.0;
constexpr std::size_t kRandomTrees = 500;
constexpr std::size_t kWitnessesPerInstance = 200;
constexpr std::size_t kCompressDepth = 10;
constexpr std::size_t kLamMaxSize = 12;
constexpr std::size_t kLamStepBound = 200;
constexpr std::size_t kFormulas = 1000;
constexpr std::size_t kMulticutInstances = 20000;
constexpr std::size_t kStepInstances = 100;
constexpr std::size_t kNuDepth = 3;
constexpr std::size_t kNuSteps = 10;
constexpr std::size_t kStdMaxStates = 40;
constexpr std::size_t kStdWitnesses = 300;

struct Result {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << "s";
  return os.str();
}

/// Fails the result with the first few messages.
struct Failures {
  std::size_t count = 0;
  std::vector<std::string> first;
  void add(const std::string& m) {
    if (count++ < 3) first.push_back(m);
  }
  std::string str() const {
    std::string out = std::to_string(count) + " failures";
    for (const auto& m : first) out += "; " + m;
    return out;
  }
};

// ---- 1 ----

Result intro_compression() {
  Timer tm;
  Failures f;
  auto sys = intro_system();
  Witness w = intro_witness(*sys);
  for (const auto& v : validate_witness(w, *sys, 8)) f.add("input witness invalid: " + v.tag);
  Engine e(sys);
  Witness c = e.compress(w);
  DTree src = witness_source(c);
  for (std::size_t d = 1; d <= 8; ++d) {
    Observation o = observe_omega(c, d, *sys);
    std::string expected = std::string(d * 2, ' ');
    expected.clear();
    for (std::size_t i = 0; i < d; ++i) expected += "f(";
    expected += "*";
    expected += std::string(d, ')');
    std::string got = print_tree(o.certificate);
    if (got != expected) f.add("d=" + std::to_string(d) + " certificate " + got);
    DTree replayed = replay(src, o.steps, *sys);
    if (!finite_equal(truncate(replayed, d), o.certificate)) f.add("d=" + std::to_string(d) + " prefix does not replay");
  }
  double s = tm.seconds();
  if (s >= kIntroSeconds) f.add("took " + fmt(s));
  return {f.count == 0, f.count ? f.str() : "d=1..8 certificates f^d(*), " + fmt(s)};
}

// ---- 2 ----

bool ultrametric_le(const Distance& a, const Distance& b, const Distance& c) {
  // a <= max(b, c), values 2^-exponent (undecided treated as 2^-budget)
  return a.exponent >= std::min(b.exponent, c.exponent);
}

Result trees() {
  Timer tm;
  Failures f;
  Rng rng(2);
  auto sig = mixed_signature();
  constexpr std::size_t kBudget = 10;
  for (std::size_t i = 0; i < kRandomTrees; ++i) {
    TreeSpec ss = random_tree_spec(rng, *sig, 1 + pick(rng, 8));
    TreeSpec us = mutate(rng, *sig, ss);
    TreeSpec vs = coin(rng) ? mutate(rng, *sig, us) : random_tree_spec(rng, *sig, 1 + pick(rng, 8));
    DTree s = build_tree(*sig, ss), u = build_tree(*sig, us), v = build_tree(*sig, vs);
    std::string tag = "tree " + std::to_string(i) + ": ";

    for (std::size_t d = 0; d <= 6; ++d) {
      std::string want = naive_truncation(s, d);
      std::string got = print_tree(truncate(s, d));
      if (got != want) f.add(tag + "truncate d=" + std::to_string(d) + " " + got + " vs " + want);
      for (std::size_t e = 0; e <= 6; e += 3)
        if (!finite_equal(truncate(truncate(s, d), e), truncate(s, std::min(d, e))))
          f.add(tag + "truncation not idempotent");
    }

    auto oracle = [&](const DTree& x, const DTree& y) {
      for (std::size_t d = 1; d <= kBudget; ++d)
        if (naive_truncation(x, d) != naive_truncation(y, d)) return Distance{true, d - 1};
      return Distance{false, kBudget};
    };
    Distance su = tree_distance(s, u, kBudget), us2 = tree_distance(u, s, kBudget);
    Distance uv = tree_distance(u, v, kBudget), sv = tree_distance(s, v, kBudget);
    Distance o = oracle(s, u);
    if (su.decided != o.decided || su.exponent != o.exponent) f.add(tag + "distance " + su.str() + " vs " + o.str());
    if (su.decided != us2.decided || su.exponent != us2.exponent) f.add(tag + "distance not symmetric");
    if (!ultrametric_le(sv, su, uv)) f.add(tag + "strong triangle inequality fails");
    if (!ultrametric_le(su, sv, uv)) f.add(tag + "strong triangle inequality fails");
    for (std::size_t d = 0; d <= 6; ++d)
      if (agree_to_depth(s, u, d) != (naive_truncation(s, d) == naive_truncation(u, d)))
        f.add(tag + "agree_to_depth d=" + std::to_string(d));

    std::size_t horizon = ss.nodes.size() + us.nodes.size() + 1;
    if (bisimilar(s, u) != (naive_truncation(s, horizon) == naive_truncation(u, horizon)))
      f.add(tag + "bisimilar disagrees with truncation at depth " + std::to_string(horizon));
  }
  double sec = tm.seconds();
  if (sec >= kTreeSeconds) f.add("took " + fmt(sec));
  return {f.count == 0, f.count ? f.str() : std::to_string(kRandomTrees) + " trees, " + fmt(sec)};
}

// ---- 3 ----

struct InstanceRun {
  std::string name;
  std::size_t generated = 0;
  std::size_t valid = 0;
};

void compress_sound(const std::string& name, const Witness& w, const std::shared_ptr<const QInstance>& q,
                    Failures& f) {
  Engine e(q);
  Witness c = e.compress(w);
  for (std::size_t d = 0; d <= kCompressDepth; ++d) {
    if (!finite_equal(target_truncation(w, d), target_truncation(c, d))) {
      f.add(name + ": targets differ at depth " + std::to_string(d) + ": " + print_witness(w));
      return;
    }
  }
}

template <class Sources>
InstanceRun run_instance(const std::string& name, Rng& rng, Sources sources,
                         const std::function<std::shared_ptr<const QInstance>(std::size_t)>& inst, Failures& f) {
  InstanceRun r{name};
  for (std::size_t attempt = 0; r.valid < kWitnessesPerInstance && attempt < 20 * kWitnessesPerInstance; ++attempt) {
    auto q = inst(attempt);
    const RewriteSystem& sys = q->system();
    DTree src = sources(q, attempt);
    WitnessGen gen(sys, rng);
    Witness w;
    try {
      w = gen.full(src, random_ordinal(rng));
    } catch (const Error& e) {
      f.add(name + ": generator failed: " + e.what());
      continue;
    }
    ++r.generated;
    auto vs = validate_witness(w, sys, kCompressDepth);
    if (!vs.empty()) {
      f.add(name + ": generated witness invalid (" + vs[0].tag + ": " + vs[0].message + ")");
      continue;
    }
    ++r.valid;
    try {
      compress_sound(name, w, q, f);
    } catch (const Error& e) {
      f.add(name + ": " + e.what() + " on " + print_witness(w));
    }
  }
  return r;
}

Result compression_soundness() {
  Timer tm;
  Failures f;
  Rng rng(3);
  std::vector<InstanceRun> runs;

  auto fo = fo_test_system();
  runs.push_back(run_instance(
      "fo", rng,
      [&](const std::shared_ptr<const QInstance>&, std::size_t) { return fo_sources(rng, *fo, 1)[0]; },
      [&](std::size_t) { return std::static_pointer_cast<const QInstance>(fo); }, f));

  std::vector<std::shared_ptr<lambda::Calculus>> calcs;
  for (int bits = 0; bits < 8; ++bits)
    calcs.push_back(std::make_shared<lambda::Calculus>(lambda::Flags{bool(bits & 4), bool(bits & 2), bool(bits & 1)}));
  runs.push_back(run_instance(
      "lambda", rng,
      [&](const std::shared_ptr<const QInstance>& q, std::size_t) {
        return lam_sources(rng, static_cast<const lambda::Calculus&>(q->system()), 1)[0];
      },
      [&](std::size_t i) { return std::static_pointer_cast<const QInstance>(calcs[i % calcs.size()]); }, f));

  auto mu = std::make_shared<mumall::System>();
  runs.push_back(run_instance(
      "mumall", rng, [&](const std::shared_ptr<const QInstance>&, std::size_t) { return mumall_sources(rng, 1)[0]; },
      [&](std::size_t) { return std::static_pointer_cast<const QInstance>(mu); }, f));

  std::string detail;
  for (const auto& r : runs) {
    if (r.valid < kWitnessesPerInstance) f.add(r.name + ": only " + std::to_string(r.valid) + " valid witnesses");
    detail += r.name + " " + std::to_string(r.valid) + "/" + std::to_string(r.generated) + " valid, ";
  }
  double s = tm.seconds();
  if (s >= kCompressSeconds) f.add("took " + fmt(s));
  return {f.count == 0, f.count ? detail + f.str() : detail + "depths 0.." + std::to_string(kCompressDepth) + ", " + fmt(s)};
}

// ---- 4 ----

Result validator() {
  Failures f;
  struct Case {
    std::string trs, witness, tag;
  };
  const std::string intro = "sig f/1 g/1 a/0 ;\nr1: a -> f(g(a)) ;\nr2: g(f(x)) -> f(x) ;\n";
  std::vector<Case> cases = {
      {intro, "split@1{ src: a ; seg [] lift@1 a ; steps [] ; final lift@1 a }", vtag::kOrdinal},
      {intro, "split@0{ src: a ; steps [] ; final lift@0 f(split@0{ src: g(a) ; steps [] ; final lift@0 g(id@0 a) }) }",
       vtag::kEndpoint},
      {"sig g/1 a/0 ;\ninductive g.1 ;\nr1: a -> g(a) ;\n", "rec V. split@0{ src: a ; steps [r1@[]] ; final lift@0 g(V) }",
       vtag::kUnguarded},
  };
  std::string detail;
  for (const auto& c : cases) {
    auto sys = fo::parse_trs(c.trs);
    Witness w = parse_witness(c.witness, sys->family());
    auto vs = validate_witness(w, *sys, 8);
    bool hit = false;
    for (const auto& v : vs) hit = hit || v.tag == c.tag;
    if (!hit) {
      std::string got;
      for (const auto& v : vs) got += v.tag + " ";
      f.add("expected " + c.tag + ", got [" + got + "]");
    }
    detail += c.tag + " ";
  }
  return {f.count == 0, f.count ? f.str() : "rejected with tags: " + detail};
}

// ---- 5 ----

std::size_t nsize(const NPtr& t) {
  switch (t->kind) {
    case NTerm::Var: return 1;
    case NTerm::Lam: return 1 + nsize(t->a);
    case NTerm::App: return 1 + nsize(t->a) + nsize(t->b);
  }
  return 0;
}

Result lambda_oracle() {
  Failures f;
  Timer tm;
  std::vector<std::shared_ptr<lambda::Calculus>> calcs;
  for (int bits = 0; bits < 8; ++bits)
    calcs.push_back(std::make_shared<lambda::Calculus>(lambda::Flags{bool(bits & 4), bool(bits & 2), bool(bits & 1)}));
  std::size_t total = 0, normalizing = 0, checked = 0;
  for (std::size_t size = 1; size <= kLamMaxSize; ++size) {
    for (const auto& t : closed_terms(size)) {
      ++total;
      auto nf = normalize(t, kLamStepBound);
      if (!nf) continue;
      ++normalizing;
      const auto& calc = *calcs[total % calcs.size()];
      try {
        DTree src = from_named(t, calc);
        Witness w = standard_witness(src, nf->steps, calc);
        std::size_t d = nsize(nf->term) + 1;
        Observation o = observe_omega(w, d, calc, 100000);
        DTree want = truncate(from_named(nf->term, calc), d);
        if (!finite_equal(o.certificate, want))
          f.add(lambda::print_lam(src) + ": observed " + print_tree(o.certificate) + ", oracle " + print_tree(want));
        ++checked;
      } catch (const Error& e) {
        f.add(std::string("error: ") + e.what());
      }
    }
  }
  return {f.count == 0 && checked == normalizing,
          std::to_string(total) + " closed terms, " + std::to_string(normalizing) + " normalizing, " +
              std::to_string(checked) + " matched, " + fmt(tm.seconds()) + (f.count ? "; " + f.str() : "")};
}

// ---- 6 ----

using mumall::Coord;
using mumall::Formula;
using mumall::Sequent;

Sequent conc(const DTree& t) { return mumall::sequent_of(t.statement()); }

std::size_t pattern_pairs(const Pattern& p) {
  if (p.is_hole()) return 0;
  std::size_t n = 0;
  if (!p.rule->is_trunc() && mumall::rule_kind(p.rule) == mumall::RKind::Mcut) n += mumall::mcut_params(p.rule).rel.size();
  for (const auto& k : p.kids) n += pattern_pairs(k);
  return n;
}

/// Expected pair count of the right-hand side from the left-hand side's, per clause.
std::size_t expected_pairs(mumall::StepKind k, std::size_t lhs) {
  using K = mumall::StepKind;
  switch (k) {
    case K::MergeCutMcut: return lhs + 1;
    case K::Ax:
    case K::BotOne: return lhs - 1;
    case K::TensorPar: return lhs + 1;
    case K::CommWith: return 2 * lhs;
    case K::CommTop: return 0;
    default: return lhs;
  }
}

void check_mcut_nodes(const DTree& t, std::size_t d, Failures& f, const std::string& tag) {
  std::vector<std::pair<DTree, std::size_t>> todo{{t, 0}};
  std::set<const void*> seen;
  while (!todo.empty()) {
    auto [x, depth] = todo.back();
    todo.pop_back();
    DTree r = x.resolved();
    if (!seen.insert(r.id()).second || r.rule()->is_trunc()) continue;
    auto k = mumall::rule_kind(r.rule());
    if (k == mumall::RKind::Mcut || k == mumall::RKind::Exch) {
      auto oc = oracle_conclusion(r);
      if (!oc) f.add(tag + ": oracle rejects " + r.rule()->key());
      else if (*oc != conc(r)) f.add(tag + ": " + r.rule()->key() + " concludes " + mumall::sequent_str(conc(r)));
    }
    if (depth + 1 >= d) continue;
    for (const auto& c : r.children()) todo.push_back({c, depth + 1});
  }
}

Result mumall_checks() {
  Failures f;
  Timer tm;
  Rng rng(6);

  for (std::size_t i = 0; i < kFormulas; ++i) {
    Formula a = random_formula(rng, 4);
    Formula nn = mumall::neg(mumall::neg(a));
    if (!(nn == a) || nn.str() != a.str()) f.add("neg not involutive on " + a.str());
  }

  // multicut instances
  std::vector<Formula> pool;
  for (const char* s : {"A", "B", "1", "A tens B", "mu X. X", "A plus bot"}) pool.push_back(mumall::parse_formula(s));
  std::size_t accepted = 0;
  for (std::size_t it = 0; it < kMulticutInstances; ++it) {
    std::size_t k = 1 + pick(rng, 5);
    std::vector<std::size_t> n(k);
    std::vector<Sequent> prem(k);
    for (std::size_t i = 0; i < k; ++i) {
      n[i] = pick(rng, 4);
      for (std::size_t j = 0; j < n[i]; ++j) {
        Formula g = pool[pick(rng, pool.size())];
        prem[i].push_back(coin(rng) ? g : mumall::neg(g));
      }
    }
    std::vector<std::pair<Coord, Coord>> rel;
    if (coin(rng, 0.6)) {
      // a tree over the premisses with dual formulas on each link
      std::vector<std::vector<bool>> used(k);
      for (std::size_t i = 0; i < k; ++i) used[i].assign(n[i], false);
      for (std::size_t i = 1; i < k; ++i) {
        std::size_t j = pick(rng, i);
        std::vector<std::size_t> fi, fj;
        for (std::size_t q = 0; q < n[i]; ++q)
          if (!used[i][q]) fi.push_back(q);
        for (std::size_t q = 0; q < n[j]; ++q)
          if (!used[j][q]) fj.push_back(q);
        if (fi.empty() || fj.empty()) continue;
        Coord a{i, fi[pick(rng, fi.size())]}, b{j, fj[pick(rng, fj.size())]};
        used[a.i][a.j] = used[b.i][b.j] = true;
        prem[b.i][b.j] = mumall::neg(prem[a.i][a.j]);
        rel.push_back({a, b});
      }
      if (coin(rng, 0.3)) {
        // perturb: an extra link, a flipped formula, or an out-of-range index
        std::size_t i = pick(rng, k), j = pick(rng, k);
        switch (pick(rng, 3)) {
          case 0: rel.push_back({Coord{i, pick(rng, 3)}, Coord{j, pick(rng, 3)}}); break;
          case 1:
            if (n[i] > 0) prem[i][pick(rng, n[i])] = pool[pick(rng, pool.size())];
            break;
          default: rel.push_back({Coord{i, n[i]}, Coord{j, 0}}); break;
        }
      }
    } else {
      for (std::size_t m = pick(rng, 5); m > 0; --m)
        rel.push_back({Coord{pick(rng, k), pick(rng, 3)}, Coord{pick(rng, k), pick(rng, 3)}});
    }
    auto lib = mumall::validate_multicut(k, n, mumall::CutRel(rel), prem);
    auto orc = brute_multicut(k, n, rel, prem);
    accepted += orc.ok;
    if (lib.ok() != orc.ok) f.add("multicut verdict differs (library " + std::string(lib.ok() ? "accepts" : "rejects") + ")");
    else if (orc.ok && lib.conclusion != orc.conclusion) f.add("multicut conclusion differs");
  }

  // root steps on instances met while eliminating cuts from random pre-proofs
  mumall::System sys;
  std::map<std::string, std::size_t> hits;
  auto base = [](const mumall::RootStep& st) {
    std::string n = st.name();
    return n.substr(0, n.find('['));
  };
  const std::vector<std::string> kinds = {"merge",    "perm",     "ax",        "tens-par",  "with-plus", "mu-nu",
                                          "bot-one",  "comm-par", "comm-tens", "comm-one",  "comm-bot",  "comm-plus",
                                          "comm-with", "comm-mu", "comm-nu",   "comm-top",  "comm-exch", "comm-ax"};
  auto done = [&] {
    for (const auto& k : kinds)
      if (hits[k] < kStepInstances) return false;
    return true;
  };
  std::vector<Formula> principal;
  for (const char* s : {"bot", "1", "mu X. X", "mu X. 1 plus X", "mu X. A tens X", "nu X. X par bot", "mu X. (A with B) plus X"})
    principal.push_back(mumall::parse_formula(s));
  for (std::size_t proof = 0; proof < 4000 && !done(); ++proof) {
    DTree t;
    if (proof % 2 == 0) {
      t = wrap_mcut(random_proof(rng, random_formula(rng, 3), 4, 0.4));
    } else {
      // a cut on a formula whose main connective is bot, one, mu or nu
      Formula h = principal[pick(rng, principal.size())];
      if (coin(rng)) h = mumall::neg(h);
      t = wrap_mcut(make_node(mumall::cut_rule(), {random_proof(rng, h, 3, 0.2), random_proof(rng, mumall::neg(h), 3, 0.2)}));
    }
    for (std::size_t round = 0; round < 30; ++round) {
      std::optional<std::vector<std::size_t>> at;
      for (const auto& p : mumall::cuts_within(t, 4)) {
        if (mumall::rule_kind(subtree_at(t, p).resolved().rule()) == mumall::RKind::Mcut) {
          at = p;
          break;
        }
      }
      if (!at) break;
      DTree u = subtree_at(t, *at).resolved();
      auto before = oracle_conclusion(u);
      if (!before) {
        f.add("generated multicut rejected by the oracle: " + u.rule()->key());
        break;
      }
      auto steps = mumall::applicable_root_steps(u);
      auto strat = mumall::strategy_step(u);
      if (strat && strat->kind == mumall::StepKind::PremissPerm) steps.push_back(*strat);
      for (const auto& st : steps) {
        std::string tag = st.name() + " on " + u.rule()->key();
        try {
          auto plan = mumall::plan_root_step(u, st);
          DTree r = mumall::apply_root_step(st, u);
          auto after = oracle_conclusion(r);
          if (!after || *after != *before) f.add(tag + ": root conclusion changed");
          if (conc(r) != conc(u)) f.add(tag + ": stored conclusion changed");
          check_mcut_nodes(r, 10, f, tag);
          for (const auto& m : check_conclusions(r, 10)) f.add(tag + ": " + m);
          std::size_t lp = pattern_pairs(plan.lhs), rp = pattern_pairs(plan.rhs);
          if (rp != expected_pairs(st.kind, lp))
            f.add(tag + ": " + std::to_string(lp) + " -> " + std::to_string(rp) + " cut pairs");
          ++hits[base(st)];
        } catch (const Error& e) {
          f.add(tag + ": " + e.what());
        }
      }
      if (!strat) break;
      std::optional<mumall::RootStep> next = strat;
      if (!steps.empty() && coin(rng, 0.3)) next = steps[pick(rng, steps.size())];
      t = apply_step(t, Step{*at, next->name(), 0}, sys);
    }
  }
  std::string counts;
  for (const auto& k : kinds) {
    counts += k + "=" + std::to_string(hits[k]) + " ";
    if (hits[k] < kStepInstances) f.add(k + ": only " + std::to_string(hits[k]) + " instances");
  }
  return {f.count == 0, std::to_string(kFormulas) + " formulas, " + std::to_string(kMulticutInstances) +
                            " multicuts (" + std::to_string(accepted) + " valid), steps: " + counts + fmt(tm.seconds()) +
                            (f.count ? "; " + f.str() : "")};
}

// ---- 7 ----

bool cut_free(const DTree& t) {
  DTree r = t.resolved();
  if (r.rule()->is_trunc()) return true;
  auto k = mumall::rule_kind(r.rule());
  if (k == mumall::RKind::Cut || k == mumall::RKind::Mcut) return false;
  for (const auto& c : r.children())
    if (!cut_free(c)) return false;
  return true;
}

Result nu_example() {
  DTree p = mumall::parse_proof("cut(rec L[|- nu X. X]. nu[nu X. X](L), ax[nu X. X])");
  auto r = mumall::cut_elim_observe(p, kNuDepth, kNuSteps);
  std::string tr = print_tree(r.truncation);
  bool ok = !r.stuck && r.steps.size() <= kNuSteps && cut_free(r.truncation) &&
            check_conclusions(r.truncation, kNuDepth + 1).empty() &&
            mumall::sequent_str(conc(r.truncation)) == "|- nu X. X";
  return {ok, std::to_string(r.steps.size()) + " steps " + steps_str(r.steps) + " -> " + tr +
                  (r.stuck ? " stuck: " + r.stuck->reason : "")};
}

// ---- 8 ----

Result standard_round_trip() {
  Failures f;
  Timer tm;
  Rng rng(8);
  std::size_t tested = 0, skipped = 0;
  std::vector<std::shared_ptr<lambda::Calculus>> calcs;
  for (int bits = 0; bits < 8; ++bits)
    calcs.push_back(std::make_shared<lambda::Calculus>(lambda::Flags{bool(bits & 4), bool(bits & 2), bool(bits & 1)}));
  auto check = [&](const Witness& w) {
    std::size_t n;
    try {
      n = witness_state_count(w, kStdMaxStates);
    } catch (const NotRegular&) {
      ++skipped;
      return;
    }
    if (n > kStdMaxStates) {
      ++skipped;
      return;
    }
    auto d = lambda::to_standard_form(w);
    Witness back = lambda::from_standard_form(d);
    if (!witness_bisimilar(w, back)) f.add("round trip differs on " + print_witness(w));
    ++tested;
  };
  for (std::size_t i = 0; tested < kStdWitnesses && i < 20 * kStdWitnesses; ++i) {
    auto calc = calcs[i % calcs.size()];
    DTree src = lam_sources(rng, *calc, 1)[0];
    try {
      if (i % 2 == 0) {
        WitnessGen gen(*calc, rng);
        check(gen.full(src, Ordinal()));
      } else {
        WitnessGen gen(*calc, rng);
        Witness w = gen.full(src, random_ordinal(rng));
        if (!validate_witness(w, *calc, 8).empty()) continue;
        check(Engine(calc).compress(w));
      }
    } catch (const Error& e) {
      f.add(e.what());
    }
  }
  if (tested < kStdWitnesses) f.add("only " + std::to_string(tested) + " witnesses within the state bound");
  return {f.count == 0, std::to_string(tested) + " omega-witnesses (" + std::to_string(skipped) + " over " +
                            std::to_string(kStdMaxStates) + " states skipped), " + fmt(tm.seconds()) +
                            (f.count ? "; " + f.str() : "")};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    Result (*run)();
  };
  const std::map<int, Criterion> all = {
      {1, {"intro compression", intro_compression}},
      {2, {"ultrametric and truncation", trees}},
      {3, {"compression soundness", compression_soundness}},
      {4, {"witness validator", validator}},
      {5, {"lambda oracle equivalence", lambda_oracle}},
      {6, {"mumall formulas, multicuts, root steps", mumall_checks}},
      {7, {"cut elimination productivity", nu_example}},
      {8, {"standard presentation round trip", standard_round_trip}},
  };
  std::vector<int> pick_ids;
  for (int i = 1; i < argc; ++i) pick_ids.push_back(std::atoi(argv[i]));
  if (pick_ids.empty())
    for (const auto& [id, c] : all) pick_ids.push_back(id);

  int failed = 0;
  for (int id : pick_ids) {
    auto it = all.find(id);
    if (it == all.end()) {
      std::cout << "criterion " << id << ": FAIL (unknown criterion)\n";
      ++failed;
      continue;
    }
    Result r;
    try {
      r = it->second.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << id << " " << it->second.name << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.detail
              << ")\n"
              << std::flush;
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
