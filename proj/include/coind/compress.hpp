#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "coind/ordinal.hpp"
#include "coind/pattern.hpp"
#include "coind/step.hpp"
#include "coind/witness.hpp"

namespace coind {

class Engine;

/// s =>* s' together with a witness s' ->>_d t'.
struct QResult {
  std::vector<Step> prefix;
  Witness w;
};

/// s =>* s' together with a hat witness s' ^>_d t.
struct HatResult {
  std::vector<Step> prefix;
  Witness hat;
};

/// s =>* s'' followed by a chain of hats with ordinals below gamma.
struct PreponeResult {
  std::vector<Step> prefix;
  std::vector<Witness> chain;
  Ordinal eps;  // max of the chain ordinals (0 when empty)
};

/// An instance's root case of property Q: given w : s ->>_d t and a root zero
/// step t -> t', produce s =>* s' and s' ->>_d t'.
class QInstance {
 public:
  virtual ~QInstance() = default;
  virtual const RewriteSystem& system() const = 0;
  virtual QResult root_q(const Witness& w, const Step& st, Engine& e) const = 0;
};

struct EngineOptions {
  /// Q-step invocations allowed per forced output node.
  std::size_t fuel = 1u << 20;
};

/// Preponement, the P_gamma induction and compression, over one instance.
class Engine {
 public:
  explicit Engine(std::shared_ptr<const QInstance> inst, EngineOptions opt = {});

  const QInstance& instance() const { return *inst_; }
  const RewriteSystem& system() const { return inst_->system(); }

  /// s ->>_d t  gives  s =>* s' ^>_d t.
  HatResult prepone_zero_steps(const Witness& w);
  /// Segments and trailing steps of a split at gamma, peeled from the right.
  PreponeResult prepone_sequence(const Ordinal& gamma, const std::vector<Segment>& segs,
                                 const std::vector<Step>& trail);
  /// Property Q, driven by the instance's root case.
  QResult q_step(const Witness& w, const Step& st);
  /// Q with both witnesses hats.
  HatResult q_hat(const Witness& hat, const Step& st);

  struct Extracted {
    std::vector<Step> prefix;
    std::vector<Witness> holes;
  };
  /// w : s ->>_d p(t_1..t_k) gives s =>* p(s_1..s_k) and s_i ->>_d t_i.
  Extracted pattern_extract(const Witness& w, const Pattern& p);
  /// Witnesses s_i ->>_d t_i give q(s..) ->>_d q(t..); holes may repeat or be unused.
  Witness pattern_fill(const Pattern& q, const std::vector<Witness>& holes, const Ordinal& d);

  /// Lazily built omega-witness with the same source and target.
  Witness compress(const Witness& w) const;

  std::size_t used_fuel() const { return used_; }

 private:
  void burn();

  std::shared_ptr<const QInstance> inst_;
  EngineOptions opt_;
  std::size_t used_ = 0;
};

/// No segment anywhere along final and lift edges.
bool is_omega_shaped(const Witness& w, std::size_t budget = 1u << 16);

struct Observation {
  std::vector<Step> steps;
  DTree reached;
  DTree certificate;  // truncate(reached, d)
};

/// Finite prefix of the length-omega reduction of an omega-witness, reaching
/// agreement with the target up to depth d.
Observation observe_omega(const Witness& w, std::size_t d, const RewriteSystem& sys,
                          std::size_t fuel = kDefaultFuel);

}  // namespace coind
