// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "cvf/parser.hpp"
#include "cvf/properties.hpp"
#include "cvf/sym_heap.hpp"
#include "cvf/verifier.hpp"
#include "test_support.hpp"

namespace cvf {
namespace {

using testing::corpus_text;
using testing::load;

std::vector<std::string> heap_lines(const SymbolicState& st) { return readable_symbols(st.heap.dump_lines()); }

std::string joined(const SymbolicState& st) {
  std::string out;
  for (const auto& l : st.dump()) out += l + "\n";
  return out;
}

bool has_line(const std::vector<std::string>& lines, const std::string& want) {
  return std::find(lines.begin(), lines.end(), want) != lines.end();
}

class VerifierTest : public ::testing::Test {
 protected:
  void SetUp() override {
    program_ = load(testing::kExample);
    verifier_ = std::make_unique<Verifier>(program_);
    base_.env.prog["x"] = verifier_->fresh("x");
    base_.env.ghost["g1"] = verifier_->fresh("g1");
    base_.env.ghost["g2"] = verifier_->fresh("g2");
  }

  AssertionPtr parse(const std::string& text) {
    AssertionScope scope;
    scope.prog = {"x"};
    scope.ghost = {"g1", "g2", "w"};
    return parse_assertion(text, program_, scope);
  }

  SymbolicState produce1(const SymbolicState& st, const std::string& text) {
    auto out = verifier_->produce(st, *parse(text));
    EXPECT_EQ(out.size(), 1U) << text;
    return out.empty() ? st : out.front();
  }

  Program program_;
  std::unique_ptr<Verifier> verifier_;
  SymbolicState base_;
};

TEST_F(VerifierTest, ProducePointsTo) {
  SymbolicState st = produce1(base_, "x |-> 0");
  EXPECT_EQ(heap_lines(st), (std::vector<std::string>{"1 x |-> 0"}));
}

TEST_F(VerifierTest, ProduceInvariantIntroducesTwoSymbols) {
  SymbolicState st = produce1(base_, "Inv(x, g1, g2)()");
  std::vector<std::string> lines = heap_lines(st);
  ASSERT_EQ(lines.size(), 3U);
  EXPECT_TRUE(has_line(lines, "1/2 g1 |->g v1")) << joined(st);
  EXPECT_TRUE(has_line(lines, "1/2 g2 |->g v2")) << joined(st);
  EXPECT_TRUE(has_line(lines, "1 x |-> v1 + v2")) << joined(st);
}

TEST_F(VerifierTest, ProduceEmpIsIdentity) {
  SymbolicState st = produce1(base_, "x |-> 0");
  SymbolicState again = produce1(st, "emp");
  EXPECT_EQ(joined(again), joined(st));
}

TEST_F(VerifierTest, ProducePrunesContradictions) {
  SymbolicState st = produce1(base_, "x |-> 0");
  EXPECT_TRUE(verifier_->produce(st, *parse("x |-> 1")).empty());
  EXPECT_TRUE(verifier_->produce(base_, *parse("1 == 2")).empty());
}

TEST_F(VerifierTest, ConsumeBindsWitnesses) {
  SymbolicState st = produce1(base_, "x |-> 0");
  Verifier::Consumed c = verifier_->consume(st, *parse("exists w. [1/2]x |-> w"));
  EXPECT_EQ(heap_lines(c.state), (std::vector<std::string>{"1/2 x |-> 0"}));
  ASSERT_EQ(c.witnesses.count("w"), 1U);
  EXPECT_EQ(c.witnesses.at("w"), Term::integer(0));
}

TEST_F(VerifierTest, ConsumePreconditionBeforeFaa) {
  SymbolicState st = produce1(base_, "[1/2]atomic_space((), Inv(x, g1, g2)) * [1/2]g1 |->g 0 * [1/2]g2 |->g 0");
  Verifier::Consumed c = verifier_->consume(st, *parse("pre1(x, g1, g2)()"));
  EXPECT_EQ(heap_lines(c.state), (std::vector<std::string>{"1/2 g2 |->g 0"}));
}

TEST_F(VerifierTest, ConsumeFromEmptyFails) {
  try {
    verifier_->consume(base_, *parse("x |-> 0"));
    FAIL() << "expected VerifyFailure";
  } catch (const VerifyFailure& e) {
    EXPECT_EQ(e.diag.kind, FailureKind::ConsumeFailure);
  }
}

TEST_F(VerifierTest, ProduceConsumeRoundTrip) {
  for (const char* text : {"x |-> 0", "[1/2]g1 |->g 0 * [1/2]g1 |->g 0", "pre1(x, g1, g2)()",
                           "atomic_spaces({}) * [1/2]atomic_space((), Inv(x, g1, g2))", "x == x"}) {
    SymbolicState st = produce1(base_, text);
    Verifier::Consumed c = verifier_->consume(st, *parse(text));
    EXPECT_TRUE(c.state.heap.empty()) << text << "\n" << joined(c.state);
  }
}

TEST_F(VerifierTest, OpenProducesTheInvariant) {
  Program p = parse_program(
      "pred_ctor I(x)() = exists v. x |-> v;\n"
      "let x = 0 in open_atomic_space((), I(x)); 0",
      {});
  // Top-level code holds no atomic_spaces chunk, so the open cannot run there.
  VerifyReport r = verify_program(p);
  ASSERT_FALSE(r.verified());
  EXPECT_EQ(r.failure->kind, FailureKind::ConsumeFailure);

  SymbolicState st = produce1(base_, "atomic_spaces({}) * atomic_space((), Inv(x, g1, g2))");
  GhostCommandPtr open = GhostCommand::make(
      GhostCommandKind::OpenAtomicSpace,
      {GhostExpr::make_unit(),
       GhostExpr::make_pred("Inv", {GhostExpr::make_prog_var("x"), GhostExpr::make_ghost_var("g1"),
                                    GhostExpr::make_ghost_var("g2")})});
  auto out = verifier_->verify_ghost(st, *open, false);
  ASSERT_EQ(out.size(), 1U);
  std::vector<std::string> lines = heap_lines(out[0].state);
  EXPECT_TRUE(has_line(lines, "1 atomic_spaces({((), Inv(x, g1, g2))})")) << joined(out[0].state);
  EXPECT_TRUE(has_line(lines, "1 atomic_space((), Inv(x, g1, g2))")) << joined(out[0].state);
  EXPECT_EQ(lines.size(), 5U) << joined(out[0].state);

  try {
    verifier_->verify_ghost(out[0].state, *open, false);
    FAIL() << "second open must fail";
  } catch (const VerifyFailure& e) {
    EXPECT_EQ(e.diag.kind, FailureKind::SideCondition);
    EXPECT_NE(e.diag.message.find("(V, V') ∉ S"), std::string::npos) << e.diag.message;
  }
}

TEST_F(VerifierTest, GconsAllocatesAGhostCell) {
  GhostCommandPtr g = GhostCommand::make(GhostCommandKind::GCons, {GhostExpr::make_int(0)});
  auto out = verifier_->verify_ghost(base_, *g, true);
  ASSERT_EQ(out.size(), 1U);
  std::vector<std::string> lines = out[0].state.heap.dump_lines();
  ASSERT_EQ(lines.size(), 1U);
  EXPECT_EQ(lines[0].rfind("1 ", 0), 0U);
  EXPECT_NE(lines[0].find(" |->g 0"), std::string::npos);
  EXPECT_NE(lines[0].find(out[0].result.str()), std::string::npos);
}

TEST(Verify, ExampleIsVerified) {
  VerifyOptions o;
  o.record_snapshots = true;
  VerifyReport r = verify_program(load(testing::kExample), o);
  ASSERT_TRUE(r.verified()) << r.text();
  EXPECT_EQ(r.stats.lemma_bodies, 2U);
  EXPECT_EQ(r.stats.lemma_chunk_increases, 0U);
  EXPECT_EQ(r.notes.size(), 5U);
  EXPECT_EQ(r.text().rfind("Verified\n", 0), 0U);
}

TEST(Verify, SnapshotsFollowTheOutline) {
  VerifyOptions o;
  o.record_snapshots = true;
  VerifyReport r = verify_program(load(testing::kExample), o);
  ASSERT_TRUE(r.verified()) << r.text();
  for (const auto& p : testing::outer_outline()) EXPECT_EQ(testing::compare_outline(r.snapshots, p), "");
}

TEST(Verify, PointsToFractionsAreConserved) {
  VerifyOptions o;
  o.record_snapshots = true;
  VerifyReport r = verify_program(load(testing::kExample), o);
  ASSERT_TRUE(r.verified());
  // Outer thread: ghost cells are split and rejoined but never lost.
  for (const auto& s : r.snapshots) {
    if (s.thread != "root" || s.point == "entry" || s.point == "let x" || s.point == "cons" || s.point == "glet g1" ||
        s.point == "glet g2")
      continue;
    Fraction total;
    for (const auto& h : s.heap)
      if (h.find("g1 |->g") != std::string::npos) total += *Fraction::parse(h.substr(0, h.find(' ')));
    bool inside = has_line(s.heap, "1 atomic_space((), Inv(x, g1, g2))");
    // While the space exists it holds the second half.
    EXPECT_EQ(total + (inside ? Fraction(1, 2) : Fraction()), Fraction(1)) << s.point;
  }
}

TEST(Verify, StrictLeaksTurnNotesIntoFailures) {
  VerifyOptions o;
  o.strict_leaks = true;
  VerifyReport r = verify_program(load(testing::kExample), o);
  ASSERT_FALSE(r.verified());
  EXPECT_EQ(r.failure->kind, FailureKind::Leak);
}

TEST(Verify, PlainProgramFailsAtFaa) {
  VerifyReport r = verify_program(load(testing::kPlain));
  ASSERT_FALSE(r.verified());
  EXPECT_EQ(r.failure->kind, FailureKind::ConsumeFailure);
  EXPECT_EQ(r.failure->loc.line, 6);
  EXPECT_NE(r.failure->message.find("FAA_ghop"), std::string::npos) << r.failure->message;
}

TEST(Verify, ConsThenDeref) {
  EXPECT_TRUE(verify_program(parse_program("let y = cons(0) in let v = *y in assert v == 0")).verified());
}

TEST(Verify, PostconditionWithResult) {
  Program p = parse_program("let x = cons(0) in *x");
  // The postcondition mentions `x`, so it is checked in the innermost scope.
  AssertionScope scope;
  scope.prog = {"x"};
  scope.allow_res = true;
  AssertionPtr post = parse_assertion("res == 0 * x |-> 0", p, scope);
  Verifier v(p);
  VerifyReport r = v.run(*p.main, post.get());
  EXPECT_TRUE(r.verified()) << r.text();

  AssertionPtr wrong = parse_assertion("res == 1 * x |-> 0", p, scope);
  Verifier w(p);
  EXPECT_FALSE(w.run(*p.main, wrong.get()).verified());
}

struct MutantCase {
  const char* file;
  Verdict verdict;
  FailureKind kind;
  int line;
  const char* message;
};

void PrintTo(const MutantCase& m, std::ostream* os) { *os << m.file; }

class Mutants : public ::testing::TestWithParam<MutantCase> {};

TEST_P(Mutants, Diagnose) {
  const MutantCase& m = GetParam();
  VerifyOptions o;
  o.file = m.file;
  VerifyReport r = verify_program(load(m.file), o);
  ASSERT_EQ(r.verdict, m.verdict) << r.text();
  if (m.verdict == Verdict::Verified) return;
  EXPECT_EQ(r.failure->kind, m.kind) << r.text();
  EXPECT_EQ(r.failure->loc.line, m.line) << r.text();
  EXPECT_NE(r.failure->message.find(m.message), std::string::npos) << r.text();
}

constexpr FailureKind kConsume = FailureKind::ConsumeFailure;

INSTANTIATE_TEST_SUITE_P(
    Corpus, Mutants,
    ::testing::Values(
        MutantCase{"mutants/assert_three.cvf", Verdict::Failed, FailureKind::UnprovableEquality, 43,
                   "path condition entails v = 2"},
        MutantCase{"mutants/assert_plain_fail.cvf", Verdict::Failed, FailureKind::UnprovableEquality, 6, "x == 1"},
        MutantCase{"mutants/cons_deref.cvf", Verdict::Verified, kConsume, 0, ""},
        MutantCase{"mutants/deref_unalloc.cvf", Verdict::Failed, kConsume, 5, "deref"},
        MutantCase{"mutants/double_op_call.cvf", Verdict::Failed, kConsume, 28, "P()"},
        MutantCase{"mutants/double_open.cvf", Verdict::Failed, FailureKind::SideCondition, 27, "(V, V') ∉ S"},
        MutantCase{"mutants/faa_twice_one_chunk.cvf", Verdict::Failed, kConsume, 32, "g1 |->g 0"},
        MutantCase{"mutants/lemma_chunk_in_body.cvf", Verdict::Failed, kConsume, 32, "no lemma type chunk"},
        MutantCase{"mutants/no_create.cvf", Verdict::Failed, kConsume, 23, "atomic_space"},
        MutantCase{"mutants/no_destroy.cvf", Verdict::Failed, kConsume, 41, "x |->"},
        MutantCase{"mutants/skip_close1.cvf", Verdict::Failed, kConsume, 25, "atomic_spaces({})"},
        MutantCase{"mutants/skip_close2.cvf", Verdict::Failed, kConsume, 33, "atomic_spaces({})"},
        MutantCase{"mutants/skip_g1_update.cvf", Verdict::Failed, kConsume, 28, "close_atomic_space"},
        MutantCase{"mutants/skip_g2_update.cvf", Verdict::Failed, kConsume, 36, "close_atomic_space"},
        MutantCase{"mutants/wrong_pre.cvf", Verdict::Failed, kConsume, 24, "par"}),
    [](const ::testing::TestParamInfo<MutantCase>& info) {
      std::string s = info.param.file;
      s = s.substr(s.find('/') + 1);
      s = s.substr(0, s.find('.'));
      return s;
    });

TEST(LemmaTyping, ExampleLemmasAreAccepted) {
  Program p = load(testing::kExample);
  auto lemmas = ground_lemmas(p);
  ASSERT_EQ(lemmas.size(), 2U);
  for (const auto& l : lemmas) {
    Diagnostic d;
    EXPECT_TRUE(check_lemma_value(p, l.value, l.type, l.type_args, &d)) << d.message;
  }
}

TEST(LemmaTyping, BodyMutantsAreRejectedWithLocations) {
  for (const char* f : {"mutants/skip_g1_update.cvf", "mutants/double_op_call.cvf", "mutants/skip_close1.cvf"}) {
    SCOPED_TRACE(f);
    Program p = load(f);
    auto lemmas = ground_lemmas(p);
    ASSERT_EQ(lemmas.size(), 2U);
    Diagnostic d;
    EXPECT_FALSE(check_lemma_value(p, lemmas[0].value, lemmas[0].type, lemmas[0].type_args, &d));
    EXPECT_GT(d.loc.line, 0);
    EXPECT_FALSE(d.message.empty());
    EXPECT_TRUE(check_lemma_value(p, lemmas[1].value, lemmas[1].type, lemmas[1].type_args));
  }
}

TEST(LemmaTyping, RejectsNonLemmaValues) {
  Program p = load(testing::kExample);
  auto lemmas = ground_lemmas(p);
  ASSERT_FALSE(lemmas.empty());
  EXPECT_FALSE(check_lemma_value(p, Term::integer(3), lemmas[0].type, lemmas[0].type_args));
}

TEST(Report, JsonIsOneDocument) {
  VerifyOptions o;
  o.file = "mutants/assert_three.cvf";
  VerifyReport r = verify_program(load(o.file), o);
  std::string j = r.json();
  EXPECT_EQ(j.front(), '{');
  EXPECT_NE(j.find("\"verdict\""), std::string::npos);
  EXPECT_NE(j.find("unprovable equality"), std::string::npos);
  EXPECT_EQ(j, verify_program(load(o.file), o).json());
}

}  // namespace
}  // namespace cvf
