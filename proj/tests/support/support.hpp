#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coind/compress.hpp"
#include "coind/dtree.hpp"
#include "coind/fo.hpp"
#include "coind/lambda.hpp"
#include "coind/mumall.hpp"
#include "coind/witness.hpp"

namespace coind::testing {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// ---- random regular trees ----

/// a/0 b/0 f/1 g/1 (inductive) h/2 (first premiss inductive) k/2.
std::shared_ptr<const fo::Signature> mixed_signature();

/// Node i has symbol `sym` and children `kids` (indices into the same spec).
struct TreeSpec {
  struct Node {
    std::string sym;
    std::vector<std::size_t> kids;
  };
  std::vector<Node> nodes;  // root is node 0
};

/// Inductive edges point to strictly later nodes, so every cycle is guarded.
TreeSpec random_tree_spec(Rng& rng, const fo::Signature& sig, std::size_t n);
/// Same shape with one node relabelled (arity kept) or one edge redirected.
TreeSpec mutate(Rng& rng, const fo::Signature& sig, TreeSpec s);
DTree build_tree(const fo::Signature& sig, const TreeSpec& s);

/// Depth-d truncation printed by direct recursion over the unfolding.
std::string naive_truncation(const DTree& t, std::size_t d);

// ---- witnesses ----

/// Random valid witnesses over a rewrite system: nested splits with random
/// zero steps, segment hats at smaller ordinals, lifts over the current tree,
/// and back edges to an enclosing split on the same source when a
/// coinductive lift lies in between.
class WitnessGen {
 public:
  struct Options {
    std::size_t budget = 4;        // nesting depth of lifts
    std::size_t step_depth = 3;    // positions considered for random steps
    std::size_t max_steps = 2;     // per run of steps
    std::size_t max_segments = 2;
    double refl = 0.15;            // chance of stopping with a reflexive hat
    double back_edge = 0.9;        // chance of taking an available back edge
  };

  WitnessGen(const RewriteSystem& sys, Rng& rng, Options o) : sys_(sys), rng_(rng), o_(o) {}
  WitnessGen(const RewriteSystem& sys, Rng& rng) : WitnessGen(sys, rng, Options{}) {}

  Witness full(const DTree& t, const Ordinal& g);

 private:
  struct Frame {
    const void* src;
    Ordinal ord;
    std::size_t guards;
    Witness binder;
    bool used = false;
  };

  Witness full_at(const DTree& t, const Ordinal& g, std::size_t budget);
  Witness hat_at(const DTree& t, const Ordinal& g, std::size_t budget);
  std::vector<Step> random_steps(DTree& cur);

  const RewriteSystem& sys_;
  Rng& rng_;
  Options o_;
  WitnessBuilder wb_;
  std::vector<Frame> frames_;
  std::size_t guards_ = 0;
};

/// A random ordinal from 0, 1, 2, 3, w, w+1, w*2, w^2.
Ordinal random_ordinal(Rng& rng);
/// Zero steps (name, path) at positions with coinductive depth < d.
std::vector<Step> steps_within(const DTree& t, const RewriteSystem& sys, std::size_t d, std::size_t max_positions = 256);

// ---- instances used by the property tests ----

/// a -> f(g(a)), g(f(x)) -> f(x) over f/1 g/1 a/0.
std::shared_ptr<fo::System> intro_system();
/// The omega*2 witness for intro_system from a.
Witness intro_witness(const fo::System& sys);

/// Source trees for the generated witnesses of each instance.
std::shared_ptr<fo::System> fo_test_system();
std::vector<DTree> fo_sources(Rng& rng, const fo::System& sys, std::size_t n);
std::vector<DTree> lam_sources(Rng& rng, const lambda::Calculus& calc, std::size_t n);
std::vector<DTree> mumall_sources(Rng& rng, std::size_t n);

// ---- lambda oracle ----

/// Named lambda term with capture-avoiding substitution.
struct NTerm {
  enum Kind { Var, Lam, App } kind = Var;
  std::string name;
  std::shared_ptr<const NTerm> a, b;
};
using NPtr = std::shared_ptr<const NTerm>;

/// All closed terms with exactly `size` nodes; variables are named by binder depth.
std::vector<NPtr> closed_terms(std::size_t size);
NPtr to_named(const DTree& t);
DTree from_named(const NPtr& t, const lambda::Calculus& calc);

struct NormalForm {
  NPtr term;
  /// Leftmost-outermost redex positions (0 = function / body, 1 = argument).
  std::vector<std::vector<std::size_t>> steps;
};
/// Normal-order normalisation; nullopt past `bound` steps.
std::optional<NormalForm> normalize(const NPtr& t, std::size_t bound);

/// Omega-witness of t ->> nf following a standard reduction sequence.
Witness standard_witness(const DTree& t, const std::vector<std::vector<std::size_t>>& steps,
                         const lambda::Calculus& calc);

// ---- muMALL ----

mumall::Formula random_formula(Rng& rng, std::size_t depth);
/// A pre-proof of |- G, F for some context G, with cuts.
DTree random_proof(Rng& rng, const mumall::Formula& f, std::size_t budget, double cut_rate = 0.2);
/// mcut_{1,(n),empty}(p).
DTree wrap_mcut(const DTree& p);

struct McutVerdict {
  bool ok = false;
  mumall::Sequent conclusion;
};
/// The multicut conditions checked literally: explicit relation as a set of
/// ordered pairs, paths and cycles enumerated edge by edge.
McutVerdict brute_multicut(std::size_t k, const std::vector<std::size_t>& n,
                           const std::vector<std::pair<mumall::Coord, mumall::Coord>>& rel,
                           const std::vector<mumall::Sequent>& premisses);
/// Conclusion of the node computed from the premiss conclusions (exchange and
/// multicut roots checked by the brute-force oracle), nullopt when rejected.
std::optional<mumall::Sequent> oracle_conclusion(const DTree& t);

}  // namespace coind::testing
