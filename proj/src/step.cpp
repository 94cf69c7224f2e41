#include "coind/step.hpp"

#include "coind/text.hpp"

namespace coind {

std::string Step::str() const {
  std::string out = name + "@[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(path[i] + 1);
  }
  return out + "]";
}

DTree RewriteSystem::apply(const std::string& name, const DTree& t) const {
  for (auto& [n, r] : enumerate(t))
    if (n == name) return r;
  throw StepNotApplicable(name);
}

std::size_t path_depth(const DTree& t, const std::vector<std::size_t>& path) {
  std::size_t d = 0;
  DTree cur = t;
  for (std::size_t i : path) {
    DTree r = cur.resolved();
    if (i >= r.arity()) throw BadPath("path leaves the tree at premiss " + std::to_string(i + 1));
    if (r.rule()->coind(i)) ++d;
    cur = r.child(i);
  }
  return d;
}

namespace {

DTree apply_at(const DTree& t, const Step& st, std::size_t k, const RewriteSystem& sys, TreeBuilder& b) {
  if (k == st.path.size()) {
    DTree r = t.resolved();
    if (r.rule()->is_trunc()) throw StepNotApplicable(st.name + " at a truncation axiom");
    return sys.apply(st.name, r);
  }
  DTree r = t.resolved();
  std::size_t i = st.path[k];
  if (i >= r.arity()) throw BadPath("step " + st.str() + " leaves the tree at premiss " + std::to_string(i + 1));
  auto kids = r.children();
  kids[i] = apply_at(kids[i], st, k + 1, sys, b);
  return b.node(r.rule(), kids);
}

}  // namespace

DTree apply_step(const DTree& t, const Step& st, const RewriteSystem& sys, TreeBuilder& b) {
  return apply_at(t, st, 0, sys, b);
}

DTree apply_step(const DTree& t, const Step& st, const RewriteSystem& sys) {
  TreeBuilder b;
  return apply_step(t, st, sys, b);
}

DTree replay(const DTree& t, const std::vector<Step>& steps, const RewriteSystem& sys) {
  if (steps.empty()) return t;
  TreeBuilder b;
  DTree cur = t;
  for (const auto& st : steps) cur = apply_step(cur, st, sys, b);
  return cur;
}

DTree replay_located(const DTree& t, std::vector<Step>& steps, const RewriteSystem& sys) {
  TreeBuilder b;
  DTree cur = t;
  for (auto& st : steps) {
    st.depth = path_depth(cur, st.path);
    cur = apply_step(cur, st, sys, b);
  }
  return cur;
}

Step lift_step(const Step& st, std::size_t i, bool coind) {
  Step out;
  out.path.reserve(st.path.size() + 1);
  out.path.push_back(i);
  out.path.insert(out.path.end(), st.path.begin(), st.path.end());
  out.name = st.name;
  out.depth = st.depth + (coind ? 1 : 0);
  return out;
}

std::vector<Step> lift_steps(const std::vector<Step>& steps, std::size_t i, bool coind) {
  std::vector<Step> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(lift_step(s, i, coind));
  return out;
}

Step parse_step(Cursor& c) {
  c.skip_ws();
  Step st;
  st.name = trim(c.until("@,]"));
  if (st.name.empty()) c.fail("expected a step name");
  c.expect("@");
  c.expect("[");
  if (!c.accept("]")) {
    do {
      std::size_t n = std::stoul(c.number());
      if (n == 0) c.fail("premiss indices are 1-based");
      st.path.push_back(n - 1);
    } while (c.accept(","));
    c.expect("]");
  }
  return st;
}

std::vector<Step> parse_steps(Cursor& c) {
  std::vector<Step> out;
  c.expect("[");
  if (c.accept("]")) return out;
  do out.push_back(parse_step(c));
  while (c.accept(","));
  c.expect("]");
  return out;
}

std::string steps_str(const std::vector<Step>& steps) {
  std::string out = "[";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ", ";
    out += steps[i].str();
  }
  return out + "]";
}

}  // namespace coind
