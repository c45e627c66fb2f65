// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "cvf/oracle.hpp"
#include "cvf/parser.hpp"
#include "cvf/properties.hpp"
#include "cvf/satisfaction.hpp"
#include "test_support.hpp"

namespace cvf {
namespace {

const Fraction kHalf(1, 2);
const Fraction kOne(1);

Term I(std::int64_t z) { return Term::integer(z); }

class Satisfaction : public ::testing::Test {
 protected:
  void SetUp() override {
    program_ = testing::load(testing::kExample);
    env_.prog["x"] = I(0);
    env_.prog["y"] = I(3);
    env_.ghost["g1"] = I(1);
    env_.ghost["g2"] = I(2);
  }

  AssertionPtr parse(const std::string& text) {
    AssertionScope scope;
    scope.prog = {"x", "y"};
    scope.ghost = {"g1", "g2"};
    return parse_assertion(text, program_, scope);
  }

  SatResult sat(const LogicalHeap& h, const std::string& text) {
    return satisfies(h, *parse(text), env_, program_);
  }

  Program program_;
  Env env_;
};

TEST_F(Satisfaction, FractionOfAWholeCell) {
  EXPECT_EQ(sat({{Chunk::points_to(I(0), I(0)), kOne}}, "[1/2]x |-> 0"), SatResult::Sat);
  EXPECT_EQ(sat({{Chunk::points_to(I(0), I(0)), kHalf}}, "x |-> 0"), SatResult::Unsat);
}

TEST_F(Satisfaction, InvariantFromItsChunks) {
  LogicalHeap h{{Chunk::ghost_points_to(I(1), I(0)), kHalf},
                {Chunk::ghost_points_to(I(2), I(0)), kHalf},
                {Chunk::points_to(I(0), I(0)), kOne}};
  EXPECT_EQ(sat(h, "Inv(x, g1, g2)()"), SatResult::Sat);
  LogicalHeap off{{Chunk::ghost_points_to(I(1), I(0)), kHalf},
                  {Chunk::ghost_points_to(I(2), I(0)), kHalf},
                  {Chunk::points_to(I(0), I(1)), kOne}};
  // No witness in the universe works, which is reported as exhaustion.
  EXPECT_EQ(sat(off, "Inv(x, g1, g2)()"), SatResult::WitnessUniverseExhausted);
}

TEST_F(Satisfaction, EmptyHeapHasNoCells) {
  EXPECT_EQ(sat({}, "x |-> 0"), SatResult::Unsat);
  EXPECT_EQ(sat({}, "emp"), SatResult::Sat);
  EXPECT_EQ(sat({}, "1 + 1 == 2"), SatResult::Sat);
  EXPECT_EQ(sat({}, "x == 1"), SatResult::Unsat);
}

TEST_F(Satisfaction, ExtraChunksAreAbsorbed) {
  LogicalHeap h{{Chunk::points_to(I(0), I(0)), kOne}, {Chunk::points_to(I(3), I(1)), kOne}};
  EXPECT_EQ(sat(h, "x |-> 0"), SatResult::Sat);
}

TEST_F(Satisfaction, SeparatingConjunctionSplits) {
  LogicalHeap h{{Chunk::points_to(I(0), I(0)), kOne}};
  EXPECT_EQ(sat(h, "[1/2]x |-> 0 * [1/2]x |-> 0"), SatResult::Sat);
  EXPECT_EQ(sat(h, "x |-> 0 * [1/2]x |-> 0"), SatResult::Unsat);
  EXPECT_EQ(sat(h, "x |-> 0 * y |-> 0"), SatResult::Unsat);
}

TEST_F(Satisfaction, ExistentialWitnessesAndUniverse) {
  LogicalHeap h{{Chunk::points_to(I(0), I(4)), kOne}};
  EXPECT_EQ(sat(h, "exists v. x |-> v"), SatResult::Sat);
  SatConfig narrow;
  narrow.existential_witness_universe = {I(0), I(1)};
  EXPECT_EQ(satisfies(h, *parse("exists v. x |-> v"), env_, program_, narrow),
            SatResult::WitnessUniverseExhausted);
}

TEST_F(Satisfaction, RecursionHitsTheDepthBudget) {
  Program p = parse_program("pred_ctor Loop(a)() = Loop(a)();\n0");
  AssertionScope scope;
  scope.prog = {"x"};
  AssertionPtr a = parse_assertion("Loop(x)()", p, scope);
  SatConfig cfg;
  cfg.unfold_depth_limit = 8;
  EXPECT_EQ(satisfies({}, *a, env_, p, cfg), SatResult::DepthExceeded);
}

TEST_F(Satisfaction, Deterministic) {
  LogicalHeap h{{Chunk::ghost_points_to(I(1), I(0)), kHalf}, {Chunk::points_to(I(0), I(2)), kOne}};
  AssertionPtr a = parse("exists v. [1/2]g1 |->g 0 * x |-> v");
  SatResult first = satisfies(h, *a, env_, program_);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(satisfies(h, *a, env_, program_), first);
}

TEST_F(Satisfaction, AgreesWithSplitEnumeration) {
  const char* cases[] = {
      "[1/2]x |-> 0 * [1/2]x |-> 0",
      "exists v. [1/2]g1 |->g v * [1/2]g1 |->g v",
      "Inv(x, g1, g2)() * [1/2]g1 |->g 0",
      "pre1(x, g1, g2)()",
      "exists v. x |-> v * v == 1",
  };
  std::vector<Chunk> pool{Chunk::points_to(I(0), I(0)), Chunk::points_to(I(0), I(1)),
                          Chunk::ghost_points_to(I(1), I(0)), Chunk::ghost_points_to(I(2), I(0)),
                          Chunk::atomic_space(Term::unit(), Term::pred("Inv", {I(0), I(1), I(2)}))};
  WitnessUniverse u;
  SatConfig cfg;
  cfg.existential_witness_universe = u.values();
  std::mt19937_64 rng(5);
  const Fraction coeffs[] = {kHalf, kOne};
  for (const char* text : cases) {
    AssertionPtr a = parse(text);
    for (int trial = 0; trial < 200; ++trial) {
      LogicalHeap h;
      std::size_t n = rng() % 4;
      for (std::size_t i = 0; i < n; ++i) h.add(pool[rng() % pool.size()], coeffs[rng() % 2]);
      SatResult fast = satisfies(h, *a, env_, program_, cfg);
      SatResult slow = split_satisfies(h, *a, env_, program_, u.values());
      ASSERT_EQ(fast, slow) << text << " on\n" << h.dump();
    }
  }
}

TEST_F(Satisfaction, FrameRule) {
  LogicalHeap h1{{Chunk::points_to(I(0), I(0)), kOne}};
  LogicalHeap h2{{Chunk::ghost_points_to(I(1), I(0)), kHalf}};
  ASSERT_EQ(sat(h1, "x |-> 0"), SatResult::Sat);
  ASSERT_EQ(sat(h2, "[1/2]g1 |->g 0"), SatResult::Sat);
  EXPECT_EQ(sat(heap_add(h1, h2), "x |-> 0 * [1/2]g1 |->g 0"), SatResult::Sat);
}

TEST(SatisfactionSuites, CorpusAgreementAndUpwardClosure) {
  Program p = testing::load(testing::kExample);
  auto instances = assertion_instances(p);
  ASSERT_FALSE(instances.empty());
  PropertyResult agree = satisfaction_agreement(p, instances, 2);
  EXPECT_TRUE(agree.ok()) << agree.str();
  EXPECT_GT(agree.trials, 0U);
  PropertyResult up = upward_closure(p, instances, 200, 9);
  EXPECT_TRUE(up.ok()) << up.str();
}

}  // namespace
}  // namespace cvf
