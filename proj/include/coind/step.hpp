#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "coind/dtree.hpp"
#include "coind/statement.hpp"

namespace coind {

class Cursor;

/// A zero step `name` applied under `path` (0-based premiss indices).
struct Step {
  std::vector<std::size_t> path;
  std::string name;
  std::size_t depth = 0;

  /// `name@[1,2]` with 1-based indices.
  std::string str() const;
  friend bool operator==(const Step& a, const Step& b) { return a.path == b.path && a.name == b.name; }
};

/// The zero steps of an instance together with its rule family.
class RewriteSystem {
 public:
  virtual ~RewriteSystem() = default;
  virtual const RuleFamily& family() const = 0;
  /// Root zero steps applicable at t, as (name, result).
  virtual std::vector<std::pair<std::string, DTree>> enumerate(const DTree& t) const = 0;
  /// Result of the named root zero step; StepNotApplicable otherwise.
  virtual DTree apply(const std::string& name, const DTree& t) const;
};

/// Sum of the coinductive flags along the path.
std::size_t path_depth(const DTree& t, const std::vector<std::size_t>& path);

/// Rewrites the subtree under st.path; BadPath / StepNotApplicable.
DTree apply_step(const DTree& t, const Step& st, const RewriteSystem& sys);
DTree apply_step(const DTree& t, const Step& st, const RewriteSystem& sys, TreeBuilder& b);
DTree replay(const DTree& t, const std::vector<Step>& steps, const RewriteSystem& sys);
/// Replays and fills in each step's depth.
DTree replay_located(const DTree& t, std::vector<Step>& steps, const RewriteSystem& sys);

/// The step seen from one level up, under premiss i.
Step lift_step(const Step& st, std::size_t i, bool coind);
std::vector<Step> lift_steps(const std::vector<Step>& steps, std::size_t i, bool coind);

Step parse_step(Cursor& c);
/// `[s1, s2, ...]`
std::vector<Step> parse_steps(Cursor& c);
std::string steps_str(const std::vector<Step>& steps);

}  // namespace coind
