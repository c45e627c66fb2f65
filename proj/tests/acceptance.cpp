// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <string>

#include "cvf/oracle.hpp"
#include "cvf/parser.hpp"
#include "cvf/printer.hpp"
#include "cvf/properties.hpp"
#include "cvf/semantics.hpp"
#include "cvf/transform.hpp"
#include "cvf/verifier.hpp"
#include "test_support.hpp"

namespace {

using namespace cvf;
using testing::corpus_files;
using testing::corpus_text;
using testing::load;

// Pinned limits.
constexpr double kGoldenSeconds = 1.0;
constexpr double kExploreSeconds = 1.0;
constexpr double kSweepSeconds = 30.0;
constexpr std::size_t kMinCorpus = 12;
constexpr std::size_t kAlgebraTrials = 1000;
constexpr std::size_t kClosureTrials = 1000;
constexpr std::size_t kEquivalenceTrials = 500;
constexpr std::size_t kSchedules = 2;
constexpr std::size_t kDepth = 64;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

Outcome golden_example() {
  Outcome o;
  Program p = load(testing::kExample);
  VerifyOptions opts;
  opts.record_snapshots = true;
  auto t0 = std::chrono::steady_clock::now();
  VerifyReport r = verify_program(p, opts);
  double t = seconds_since(t0);
  o.require(r.verified(), "verdict " + to_string(r.verdict));
  o.require(t < kGoldenSeconds, "took " + fmt_seconds(t));
  std::size_t matched = 0;
  for (const auto& point : testing::outer_outline()) {
    std::string diff = testing::compare_outline(r.snapshots, point);
    if (diff.empty())
      ++matched;
    else
      o.require(false, diff);
  }
  if (o.pass) o.detail = fmt_seconds(t) + ", " + std::to_string(matched) + "/8 outline points";
  return o;
}

Outcome erasure_fidelity() {
  Outcome o;
  CommandPtr erased = erase(load(testing::kExample).main);
  CommandPtr plain = parse_command(corpus_text(testing::kPlain));
  o.require(*erased == *plain, "erased:\n" + pretty(*erased));
  if (o.pass) o.detail = "structurally identical";
  return o;
}

Outcome concrete_end_state() {
  Outcome o;
  Configuration init{{}, erase(load(testing::kExample).main)};
  ExploreOptions opts;
  opts.max_steps = kDepth;
  auto t0 = std::chrono::steady_clock::now();
  ExploreReport r = explore(init, opts);
  double t = seconds_since(t0);
  o.require(r.verdict == ExploreVerdict::SafeUpToDepth, "verdict " + to_string(r.verdict));
  o.require(!r.terminals.empty(), "no terminal configuration");
  for (const auto& c : r.terminals) {
    o.require(c.heap == PhysHeap{{0, 2}}, "terminal heap " + format_heap(c.heap));
    o.require(c.cmd->is_value() && c.cmd->expr.value == 0, "terminal command " + pretty(*c.cmd));
  }
  o.require(t < kExploreSeconds, "took " + fmt_seconds(t));
  std::size_t schedules = count_schedules(init, kDepth);
  o.require(schedules == kSchedules, std::to_string(schedules) + " schedules");
  if (o.pass)
    o.detail = fmt_seconds(t) + ", " + std::to_string(r.terminals.size()) + " terminal(s), " +
               std::to_string(schedules) + " schedules";
  return o;
}

Outcome no_unsoundness() {
  Outcome o;
  auto files = corpus_files();
  o.require(files.size() >= kMinCorpus, std::to_string(files.size()) + " corpus programs");
  std::size_t fatal = 0;
  std::size_t rejected_both = 0;
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& f : files) {
    CrosscheckOptions opts;
    opts.depth = kDepth;
    CrosscheckReport r = soundness_crosscheck(load(f), opts);
    if (r.fatal()) {
      ++fatal;
      o.require(false, f + " " + r.quadrant());
    }
    if (r.verdict == Verdict::Failed && r.explore == ExploreVerdict::NotOkay) ++rejected_both;
  }
  double t = seconds_since(t0);
  o.require(t < kSweepSeconds, "took " + fmt_seconds(t));
  if (o.pass)
    o.detail = std::to_string(files.size()) + " programs, " + std::to_string(fatal) + " (Verified, NotOkay), " +
               std::to_string(rejected_both) + " (Failed, NotOkay), " + fmt_seconds(t);
  return o;
}

Outcome negative_determinism() {
  Outcome o;
  CrosscheckReport three = soundness_crosscheck(load("mutants/assert_three.cvf"));
  o.require(three.verdict == Verdict::Failed, "assert mutant verified");
  o.require(three.explore == ExploreVerdict::NotOkay, "assert mutant explored " + to_string(three.explore));
  o.require(three.failure && three.failure->kind == FailureKind::UnprovableEquality, "assert mutant kind");

  CrosscheckReport skip = soundness_crosscheck(load("mutants/skip_g1_update.cvf"));
  o.require(skip.verdict == Verdict::Failed, "ghost-update mutant verified");
  o.require(skip.failure && skip.failure->kind == FailureKind::ConsumeFailure, "ghost-update mutant kind");
  o.require(skip.explore == ExploreVerdict::SafeUpToDepth, "ghost-update mutant explored " + to_string(skip.explore));
  CommandPtr a = erase(load("mutants/skip_g1_update.cvf").main);
  CommandPtr b = erase(load(testing::kExample).main);
  o.require(*a == *b, "ghost-update mutant erasure differs");
  if (o.pass) o.detail = three.quadrant() + " and " + skip.quadrant() + " at line " +
                         std::to_string(skip.failure->loc.line);
  return o;
}

Outcome heap_algebra() {
  Outcome o;
  std::string summary;
  for (const auto& r : heap_algebra_suite(kAlgebraTrials, 20261014)) {
    o.require(r.ok() && r.trials == kAlgebraTrials, r.str());
    summary += (summary.empty() ? "" : ", ") + r.name;
  }
  if (o.pass) o.detail = std::to_string(kAlgebraTrials) + " trials each: " + summary;
  return o;
}

Outcome satisfaction_suite() {
  Outcome o;
  struct Group {
    std::string file;
    Program program;
    std::vector<AssertionInstance> instances;
  };
  std::vector<Group> groups;
  std::set<std::string> seen;
  std::size_t instance_count = 0;
  for (const auto& f : corpus_files()) {
    Group g{f, load(f), {}};
    for (auto& inst : assertion_instances(g.program)) {
      std::string key = pretty(*inst.assertion);
      for (std::size_t i = g.program.prelude_count; i < g.program.decls.size(); ++i)
        key += "\n" + pretty(g.program.decls[i]);
      if (seen.insert(key).second) g.instances.push_back(std::move(inst));
    }
    instance_count += g.instances.size();
    if (!g.instances.empty()) groups.push_back(std::move(g));
  }
  o.require(instance_count > 0, "no assertion instances");
  std::size_t agreement_trials = 0;
  std::size_t closure_trials = 0;
  std::uint64_t seed = 1;
  for (const auto& g : groups) {
    PropertyResult agree = satisfaction_agreement(g.program, g.instances, 3);
    o.require(agree.ok(), g.file + ": " + agree.str());
    agreement_trials += agree.trials;
    // Extensions are shared out in proportion to each file's instances.
    std::size_t n = (kClosureTrials * g.instances.size() + instance_count - 1) / instance_count;
    PropertyResult up = upward_closure(g.program, g.instances, n, seed++);
    o.require(up.ok(), g.file + ": " + up.str());
    closure_trials += up.trials;
  }
  o.require(closure_trials >= kClosureTrials, std::to_string(closure_trials) + " extensions");
  if (o.pass)
    o.detail = std::to_string(instance_count) + " assertion instances, " + std::to_string(agreement_trials) +
               " heap comparisons, " + std::to_string(closure_trials) + " extensions, 0 disagreements";
  return o;
}

Outcome equivalence_note() {
  Outcome o;
  std::size_t yes = 0;
  PropertyResult r = consistency_equivalence(load(testing::kExample), kEquivalenceTrials, 8, &yes);
  o.require(r.ok() && r.trials == kEquivalenceTrials, r.str());
  if (o.pass)
    o.detail = std::to_string(r.trials) + " pairs (" + std::to_string(yes) + " consistent), 0 counterexamples";
  return o;
}

Outcome lemma_typing() {
  Outcome o;
  Program good = load(testing::kExample);
  auto lemmas = ground_lemmas(good);
  o.require(lemmas.size() == 2, std::to_string(lemmas.size()) + " lemma values in the example");
  for (const auto& l : lemmas) {
    Diagnostic d;
    o.require(check_lemma_value(good, l.value, l.type, l.type_args, &d), "example lemma rejected: " + d.message);
  }
  std::size_t rejected = 0;
  for (const char* f : {"mutants/skip_g1_update.cvf", "mutants/double_op_call.cvf", "mutants/skip_close1.cvf"}) {
    Program p = load(f);
    auto ls = ground_lemmas(p);
    if (ls.empty()) {
      o.require(false, std::string(f) + ": no lemma value");
      continue;
    }
    Diagnostic d;
    bool ok = check_lemma_value(p, ls[0].value, ls[0].type, ls[0].type_args, &d);
    o.require(!ok, std::string(f) + ": accepted");
    o.require(ok || d.loc.line > 0, std::string(f) + ": diagnostic without location");
    if (!ok && d.loc.line > 0) ++rejected;
  }
  if (o.pass) o.detail = "2 accepted, " + std::to_string(rejected) + " body mutants rejected with locations";
  return o;
}

Outcome double_open() {
  Outcome o;
  VerifyReport r = verify_program(load("mutants/double_open.cvf"));
  o.require(!r.verified(), "verified");
  o.require(r.failure && r.failure->kind == FailureKind::SideCondition, "wrong failure kind");
  o.require(r.failure && r.failure->message.find("(V, V') ∉ S") != std::string::npos,
            r.failure ? r.failure->message : "no diagnostic");
  if (o.pass) o.detail = "line " + std::to_string(r.failure->loc.line) + ": " + r.failure->message;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {1, "golden example verifies", golden_example},
      {2, "erasure fidelity", erasure_fidelity},
      {3, "concrete end state", concrete_end_state},
      {4, "no unsoundness over the corpus", no_unsoundness},
      {5, "negative determinism", negative_determinism},
      {6, "heap algebra suite", heap_algebra},
      {7, "satisfaction suite", satisfaction_suite},
      {8, "consistency equivalence", equivalence_note},
      {9, "lemma typing", lemma_typing},
      {10, "double open rejected", double_open},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
