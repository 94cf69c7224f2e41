#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "coind/compress.hpp"
#include "coind/dtree.hpp"
#include "coind/fo.hpp"
#include "coind/lambda.hpp"
#include "coind/mumall.hpp"
#include "coind/text.hpp"
#include "coind/witness.hpp"

using json = nlohmann::json;
using namespace coind;

namespace {

enum Exit { kOk = 0, kFailure = 1, kParse = 2, kNonProductive = 3, kInvalid = 4, kStuck = 5 };

struct Opts {
  std::size_t depth = 8;
  std::size_t fuel = 10000;
  std::string format = "text";
  std::size_t jobs = 1;
  std::string instance;
  std::string system;
  std::string flags;
  std::string apply;
};

/// Node budget for truncations and position scans.
std::size_t budget(const Opts& o) { return std::max<std::size_t>(o.fuel, 10000) * 100; }

/// One command's result on one input.
struct Out {
  std::string text;
  json j = json::object();
  int code = kOk;
};

class FileError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

/// The rewriting instance selected by the flags.
struct Inst {
  std::string kind;
  std::shared_ptr<const RewriteSystem> sys;
  std::shared_ptr<const QInstance> q;
  std::function<DTree(const std::string&)> parse;

  const RuleFamily& fam() const { return sys->family(); }
};

std::string instance_kind(const Opts& o, const std::string& input) {
  if (!o.instance.empty()) return o.instance;
  if (!o.system.empty()) return "fo";
  if (ends_with(input, ".lam")) return "lam";
  if (ends_with(input, ".mumall")) return "mumall";
  if (ends_with(input, ".trs")) return "fo";
  throw FileError("cannot tell the instance of " + input + "; pass --instance fo|lam|mumall");
}

Inst load_instance(const Opts& o, const std::string& input) {
  Inst in;
  in.kind = instance_kind(o, input);
  if (in.kind == "fo") {
    if (o.system.empty()) throw FileError("the fo instance needs --system FILE.trs");
    auto sys = fo::parse_trs(read_file(o.system));
    in.sys = sys;
    in.q = sys;
    in.parse = [sys](const std::string& text) { return parse_tree(text, sys->family()); };
  } else if (in.kind == "lam") {
    std::optional<lambda::Flags> flags;
    if (!o.flags.empty()) flags = lambda::Flags::parse(o.flags);
    lambda::Flags f = flags.value_or(lambda::Flags{});
    if (!flags && ends_with(input, ".lam")) f = lambda::parse_lam(read_file(input)).flags;
    auto calc = std::make_shared<lambda::Calculus>(f);
    in.sys = calc;
    in.q = calc;
    in.parse = [calc](const std::string& text) { return lambda::parse_lam(text, calc->flags()).term; };
  } else if (in.kind == "mumall") {
    auto sys = std::make_shared<mumall::System>();
    in.sys = sys;
    in.q = sys;
    in.parse = [](const std::string& text) { return mumall::parse_proof(text); };
  } else {
    throw FileError("unknown instance " + in.kind);
  }
  return in;
}

json step_json(const Step& s) {
  json path = json::array();
  for (auto i : s.path) path.push_back(i + 1);
  return json{{"name", s.name}, {"path", path}, {"depth", s.depth}};
}

std::string step_line(const Step& s) { return s.str() + " (depth " + std::to_string(s.depth) + ")"; }

void add_steps(Out& out, const std::vector<Step>& steps) {
  json arr = json::array();
  for (const auto& s : steps) {
    arr.push_back(step_json(s));
    out.text += step_line(s) + "\n";
  }
  out.j["steps"] = arr;
}

void add_truncation(Out& out, const DTree& t, const std::string& label = "truncation") {
  std::string s = print_tree(t);
  out.j[label] = s;
  out.text += label + ": " + s + "\n";
}

void add_violations(Out& out, const std::vector<Violation>& vs) {
  json arr = json::array();
  for (const auto& v : vs) {
    arr.push_back(json{{"tag", v.tag}, {"message", v.message}});
    out.text += "violation " + v.tag + ": " + v.message + "\n";
  }
  out.j["violations"] = arr;
  if (!vs.empty()) out.code = kInvalid;
}

struct Pos {
  std::vector<std::size_t> path;
  std::size_t depth;
};

/// Positions at coinductive depth < d, outermost first, then left to right.
std::vector<Pos> positions(const DTree& t, std::size_t d, std::size_t budget) {
  std::vector<Pos> out;
  if (d == 0) return out;
  std::vector<std::pair<DTree, Pos>> level{{t, Pos{{}, 0}}};
  while (!level.empty()) {
    std::vector<std::pair<DTree, Pos>> next;
    for (auto& [x, p] : level) {
      out.push_back(p);
      if (out.size() > budget) throw NotRegular("position search exceeded its budget");
      DTree r = x.resolved();
      auto cs = r.children();
      for (std::size_t i = 0; i < cs.size(); ++i) {
        std::size_t nd = p.depth + (r.rule()->coind(i) ? 1 : 0);
        if (nd >= d) continue;
        auto q = p.path;
        q.push_back(i);
        next.push_back({cs[i], Pos{std::move(q), nd}});
      }
    }
    level = std::move(next);
  }
  return out;
}

Witness load_witness(const Inst& in, const std::string& file) { return parse_witness(read_file(file), in.fam()); }

// ---- commands ----

Out cmd_truncate(const Opts& o, const std::string& file) {
  Inst in = load_instance(o, file);
  Out out;
  add_truncation(out, truncate(in.parse(read_file(file)), o.depth, budget(o)));
  return out;
}

Out cmd_distance(const Opts& o, const std::string& a, const std::string& b) {
  Inst in = load_instance(o, a);
  DTree s = in.parse(read_file(a)), t = in.parse(read_file(b));
  Distance d = tree_distance(s, t, o.depth);
  Out out;
  out.j = json{{"distance", d.str()}, {"decided", d.decided}, {"exponent", d.exponent}, {"value", d.value()}};
  out.text = "distance: " + d.str() + "\n";
  return out;
}

Out cmd_step(const Opts& o, const std::string& file) {
  Inst in = load_instance(o, file);
  DTree t = in.parse(read_file(file));
  Out out;
  if (!o.apply.empty()) {
    Cursor c(o.apply);
    Step st = parse_step(c);
    st.depth = path_depth(t, st.path);
    DTree r = apply_step(t, st, *in.sys);
    add_steps(out, {st});
    add_truncation(out, truncate(r, o.depth, budget(o)));
    return out;
  }
  std::vector<Step> found;
  for (const auto& p : positions(t, o.depth, budget(o))) {
    for (const auto& [name, res] : in.sys->enumerate(subtree_at(t, p.path))) {
      (void)res;
      found.push_back(Step{p.path, name, p.depth});
    }
  }
  add_steps(out, found);
  return out;
}

Out cmd_reduce(const Opts& o, const std::string& file) {
  Inst in = load_instance(o, file);
  DTree cur = in.parse(read_file(file));
  std::vector<Step> trace;
  TreeBuilder b;
  while (trace.size() < o.fuel) {
    std::optional<Step> next;
    // steps at depth d leave the truncation alone but can enable shallower ones
    for (const auto& p : positions(cur, o.depth + 1, budget(o))) {
      auto steps = in.sys->enumerate(subtree_at(cur, p.path));
      if (!steps.empty()) {
        next = Step{p.path, steps.front().first, p.depth};
        break;
      }
    }
    if (!next) break;
    cur = apply_step(cur, *next, *in.sys, b);
    trace.push_back(*next);
  }
  Out out;
  add_steps(out, trace);
  add_truncation(out, truncate(cur, o.depth, budget(o)));
  return out;
}

Out cmd_validate(const Opts& o, const std::string& file) {
  Inst in = load_instance(o, file);
  Witness w = load_witness(in, file);
  Out out;
  add_violations(out, validate_witness(w, *in.sys, o.depth));
  if (out.code == kOk) out.text += "ok\n";
  return out;
}

Out observe(const Inst& in, const Witness& w, const Opts& o) {
  Observation ob = observe_omega(w, o.depth, *in.sys, o.fuel);
  Out out;
  add_steps(out, ob.steps);
  add_truncation(out, ob.certificate, "certificate");
  return out;
}

Out cmd_compress(const Opts& o, const std::string& file) {
  Inst in = load_instance(o, file);
  Witness w = load_witness(in, file);
  auto vs = validate_witness(w, *in.sys, o.depth);
  if (!vs.empty()) {
    Out out;
    add_violations(out, vs);
    return out;
  }
  Engine e(in.q);
  return observe(in, e.compress(w), o);
}

Out cmd_observe(const Opts& o, const std::string& file) {
  Inst in = load_instance(o, file);
  Witness w = load_witness(in, file);
  if (!is_omega_shaped(w)) throw DomainError("observe needs an omega-witness; use compress");
  return observe(in, w, o);
}

Out cmd_fo_check(const Opts&, const std::string& file) {
  auto sys = fo::parse_trs(read_file(file));
  Out out;
  json sig = json::object(), rules = json::array();
  for (const auto& [name, r] : sys->signature().symbols()) sig[name] = r->arity();
  for (const auto& r : sys->rules()) {
    std::string line = r.name + ": " + print_tree(r.lhs) + " -> " + print_tree(r.rhs);
    rules.push_back(line);
    out.text += line + "\n";
  }
  out.j = json{{"signature", sig}, {"rules", rules}};
  return out;
}

Out cmd_lam_parse(const Opts& o, const std::string& file) {
  std::optional<lambda::Flags> flags;
  if (!o.flags.empty()) flags = lambda::Flags::parse(o.flags);
  lambda::Parsed p = lambda::parse_lam(read_file(file), flags);
  Out out;
  std::string tree = print_tree(p.term);
  std::string named;
  try {
    named = lambda::print_lam(p.term);
  } catch (const DomainError&) {
    named = tree;
  }
  out.j = json{{"flags", p.flags.str()}, {"tree", tree}, {"term", named}};
  out.text = "flags " + p.flags.str() + "\ntree: " + tree + "\nterm: " + named + "\n";
  return out;
}

Out cmd_lam_standard(const Opts& o, const std::string& file) {
  Opts lo = o;
  lo.instance = "lam";
  Inst in = load_instance(lo, file);
  Witness w = load_witness(in, file);
  auto vs = validate_witness(w, *in.sys, o.depth);
  Out out;
  if (!vs.empty()) {
    add_violations(out, vs);
    return out;
  }
  Engine e(in.q);
  auto d = lambda::to_standard_form(e.compress(w));
  std::string s = lambda::print_standard(d);
  out.j = json{{"standard", s}, {"states", lambda::standard_state_count(d)}};
  out.text = s + "\n";
  return out;
}

Out cmd_mumall_check(const Opts& o, const std::string& file) {
  auto pc = mumall::check_proof(read_file(file));
  Out out;
  std::vector<Violation> vs;
  for (const auto& v : pc.violations) {
    auto colon = v.find(": ");
    std::string cond = v.substr(colon + 2);
    vs.push_back(Violation{cond.substr(0, cond.find(':')), v});
  }
  for (const auto& m : check_conclusions(pc.proof, o.depth)) vs.push_back(Violation{"conclusion", m});
  add_violations(out, vs);
  std::string concl = pc.proof.statement().str();
  out.j["conclusion"] = concl;
  json cuts = json::array();
  for (const auto& p : mumall::cuts_within(pc.proof, o.depth)) {
    json path = json::array();
    for (auto i : p) path.push_back(i + 1);
    cuts.push_back(path);
  }
  out.j["cuts"] = cuts;
  out.text += "conclusion: " + concl + "\n";
  out.text += "cuts within depth " + std::to_string(o.depth) + ": " + std::to_string(cuts.size()) + "\n";
  if (out.code == kOk) out.text += "ok\n";
  return out;
}

Out cmd_mumall_step(const Opts& o, const std::string& file) {
  DTree t = mumall::parse_proof(read_file(file));
  mumall::System sys;
  Out out;
  if (!o.apply.empty()) {
    Cursor c(o.apply);
    Step st = parse_step(c);
    st.depth = path_depth(t, st.path);
    add_steps(out, {st});
    add_truncation(out, truncate(apply_step(t, st, sys), o.depth, budget(o)));
    return out;
  }
  std::vector<Step> found;
  for (const auto& p : positions(t, o.depth, budget(o))) {
    DTree at = subtree_at(t, p.path);
    for (const auto& st : mumall::applicable_root_steps(at)) found.push_back(Step{p.path, st.name(), p.depth});
    if (!at.resolved().rule()->is_trunc() && dynamic_cast<const mumall::MRule*>(at.resolved().rule().get()) &&
        mumall::rule_kind(at.resolved().rule()) == mumall::RKind::Mcut) {
      auto st = mumall::strategy_step(at);
      if (st && st->kind == mumall::StepKind::PremissPerm) found.push_back(Step{p.path, st->name(), p.depth});
    }
  }
  add_steps(out, found);
  return out;
}

Out cmd_mumall_elim(const Opts& o, const std::string& file) {
  auto r = mumall::cut_elim_observe(mumall::parse_proof(read_file(file)), o.depth, o.fuel);
  Out out;
  add_steps(out, r.steps);
  add_truncation(out, r.truncation);
  out.j["wrapped"] = r.wrapped;
  if (r.stuck) {
    json path = json::array();
    for (auto i : r.stuck->path) path.push_back(i + 1);
    out.j["stuck"] = json{{"reason", r.stuck->reason}, {"path", path}};
    out.text += "stuck: " + r.stuck->reason + " at [";
    for (std::size_t i = 0; i < r.stuck->path.size(); ++i) out.text += (i ? "," : "") + std::to_string(r.stuck->path[i] + 1);
    out.text += "]\n";
    out.code = kStuck;
  }
  return out;
}

// ---- driver ----

Out guarded(const std::function<Out()>& f) {
  Out out;
  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    out = Out{};
    out.code = code;
    out.j = json{{"error", kind}, {"message", msg}};
    out.text = "error: " + msg + "\n";
  };
  try {
    out = f();
  } catch (const SyntaxError& e) {
    fail(kParse, "syntax", e.what());
  } catch (const FileError& e) {
    fail(kParse, "file", e.what());
  } catch (const DomainError& e) {
    fail(kParse, "domain", e.what());
  } catch (const NonProductive& e) {
    fail(kNonProductive, "non-productive", e.what());
  } catch (const NotRegular& e) {
    fail(kNonProductive, "not-regular", e.what());
  } catch (const std::exception& e) {
    fail(kFailure, "failure", e.what());
  }
  return out;
}

int run_batch(const Opts& o, const std::vector<std::string>& files,
              const std::function<Out(const Opts&, const std::string&)>& cmd) {
  std::vector<Out> outs(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) outs[i] = guarded([&] { return cmd(o, files[i]); });
  };
  std::size_t n = std::max<std::size_t>(1, std::min(o.jobs, files.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (const auto& out : outs) code = std::max(code, out.code);
  if (o.format == "json") {
    if (files.size() == 1) {
      std::cout << outs[0].j.dump(2) << "\n";
    } else {
      json arr = json::array();
      for (std::size_t i = 0; i < files.size(); ++i) {
        json e = outs[i].j;
        e["file"] = files[i];
        e["exit"] = outs[i].code;
        arr.push_back(e);
      }
      std::cout << arr.dump(2) << "\n";
    }
  } else {
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (files.size() > 1) std::cout << "== " << files[i] << "\n";
      (outs[i].code == kParse || outs[i].code == kFailure || outs[i].code == kNonProductive ? std::cerr : std::cout)
          << outs[i].text;
    }
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coind: coinductive infinitary rewriting"};
  app.require_subcommand(1);
  Opts o;
  auto common = [&](CLI::App* c) {
    c->add_option("--depth", o.depth, "observation depth")->capture_default_str();
    c->add_option("--fuel", o.fuel, "step budget")->capture_default_str();
    c->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    c->add_option("--jobs", o.jobs, "inputs processed concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto instance = [&](CLI::App* c) {
    c->add_option("--instance", o.instance, "fo, lam or mumall (default: from --system or the file extension)")
        ->check(CLI::IsMember({"fo", "lam", "mumall"}));
    c->add_option("--system", o.system, "first-order rules (.trs)");
    c->add_option("--flags", o.flags, "lambda coinductive flags abc, e.g. 001");
  };

  std::vector<std::string> files;
  std::string a, b;
  std::function<int()> action;

  auto batch = [&](CLI::App* c, std::function<Out(const Opts&, const std::string&)> cmd) {
    common(c);
    c->add_option("files", files, "input files")->required()->check(CLI::ExistingFile);
    c->callback([&, cmd] { action = [&, cmd] { return run_batch(o, files, cmd); }; });
  };

  auto* truncate_c = app.add_subcommand("truncate", "print the depth-d truncation of a tree");
  instance(truncate_c);
  batch(truncate_c, cmd_truncate);

  auto* distance_c = app.add_subcommand("distance", "truncation distance of two trees (up to --depth)");
  instance(distance_c);
  common(distance_c);
  distance_c->add_option("first", a)->required()->check(CLI::ExistingFile);
  distance_c->add_option("second", b)->required()->check(CLI::ExistingFile);
  distance_c->callback([&] {
    action = [&] {
      files = {a};
      return run_batch(o, files, [&](const Opts& oo, const std::string&) { return cmd_distance(oo, a, b); });
    };
  });

  auto* step_c = app.add_subcommand("step", "list zero steps within --depth, or apply one with --apply");
  instance(step_c);
  step_c->add_option("--apply", o.apply, "step `name@[1,2]` to apply");
  batch(step_c, cmd_step);

  auto* reduce_c = app.add_subcommand("reduce", "outermost-first reduction at depths up to --depth, at most --fuel steps");
  instance(reduce_c);
  batch(reduce_c, cmd_reduce);

  auto* validate_c = app.add_subcommand("witness-validate", "check a reduction witness");
  instance(validate_c);
  batch(validate_c, cmd_validate);

  auto* compress_c = app.add_subcommand("compress", "compress a witness and observe its length-omega reduction");
  instance(compress_c);
  batch(compress_c, cmd_compress);

  auto* observe_c = app.add_subcommand("observe", "observe an omega-witness");
  instance(observe_c);
  batch(observe_c, cmd_observe);

  auto* fo_c = app.add_subcommand("fo", "first-order systems");
  fo_c->require_subcommand(1);
  batch(fo_c->add_subcommand("check", "parse a .trs file and list its rules"), cmd_fo_check);

  auto* lam_c = app.add_subcommand("lam", "abc-lambda calculi");
  lam_c->require_subcommand(1);
  auto* lam_parse = lam_c->add_subcommand("parse", "parse a .lam file");
  lam_parse->add_option("--flags", o.flags, "coinductive flags abc");
  batch(lam_parse, cmd_lam_parse);
  auto* lam_std = lam_c->add_subcommand("standard", "standard presentation of a compressed witness");
  lam_std->add_option("--flags", o.flags, "coinductive flags abc");
  batch(lam_std, cmd_lam_standard);

  auto* mu_c = app.add_subcommand("mumall", "mumall pre-proofs and cut elimination");
  mu_c->require_subcommand(1);
  batch(mu_c->add_subcommand("check", "well-formedness and multicut side conditions"), cmd_mumall_check);
  auto* mu_step = mu_c->add_subcommand("step", "list root steps within --depth, or apply one with --apply");
  mu_step->add_option("--apply", o.apply, "step `name@[1,2]` to apply");
  batch(mu_step, cmd_mumall_step);
  batch(mu_c->add_subcommand("elim", "cut elimination until the depth-d truncation is cut-free"), cmd_mumall_elim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }
  return action ? action() : kFailure;
}
