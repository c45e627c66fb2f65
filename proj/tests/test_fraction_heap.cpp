// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cvf/fraction.hpp"
#include "cvf/heap.hpp"
#include "cvf/properties.hpp"

namespace cvf {
namespace {

const Fraction kHalf(1, 2);
const Fraction kOne(1);

Term I(std::int64_t z) { return Term::integer(z); }
Chunk pt(std::int64_t a, std::int64_t v) { return Chunk::points_to(I(a), I(v)); }
Chunk gpt(std::int64_t a, std::int64_t v) { return Chunk::ghost_points_to(I(a), I(v)); }

TEST(Fraction, NormalizesAndOrders) {
  EXPECT_EQ(Fraction(2, 4), kHalf);
  EXPECT_EQ(kHalf + kHalf, kOne);
  EXPECT_EQ((kOne - kHalf).str(), "1/2");
  EXPECT_LT(kHalf, kOne);
  EXPECT_THROW(kHalf - kOne, std::domain_error);
  EXPECT_THROW(Fraction(1, 0), std::invalid_argument);
  EXPECT_EQ(Fraction::parse("3/6"), kHalf);
  EXPECT_FALSE(Fraction::parse("1/x").has_value());
}

TEST(HeapAdd, HalvesMakeAWhole) {
  LogicalHeap a{{pt(0, 0), kHalf}};
  EXPECT_EQ(heap_add(a, a), (LogicalHeap{{pt(0, 0), kOne}}));
}

TEST(HeapAdd, EmptyIsIdentity) {
  LogicalHeap h{{pt(0, 0), kHalf}, {gpt(1, 3), kOne}};
  EXPECT_EQ(heap_add(h, {}), h);
  EXPECT_EQ(heap_add({}, h), h);
}

TEST(HeapAdd, BranchJoin) {
  Chunk as = Chunk::atomic_space(Term::unit(), Term::pred("Inv", {I(0), I(1), I(2)}));
  LogicalHeap left{{as, kHalf}, {gpt(1, 1), kHalf}};
  LogicalHeap right{{as, kHalf}, {gpt(2, 1), kHalf}};
  LogicalHeap joined{{as, kOne}, {gpt(1, 1), kHalf}, {gpt(2, 1), kHalf}};
  EXPECT_EQ(heap_add(left, right), joined);
}

TEST(HeapGeq, Examples) {
  LogicalHeap whole{{pt(0, 0), kOne}};
  LogicalHeap half{{pt(0, 0), kHalf}};
  EXPECT_TRUE(heap_geq(whole, half));
  EXPECT_FALSE(heap_geq(half, whole));
  EXPECT_TRUE(heap_geq(half, {}));
  EXPECT_TRUE(heap_geq({}, {}));
}

TEST(HeapSub, Examples) {
  LogicalHeap whole{{pt(0, 0), kOne}};
  LogicalHeap half{{pt(0, 0), kHalf}};
  EXPECT_EQ(heap_sub(whole, half), half);
  EXPECT_THROW(heap_sub({}, half), InsufficientError);
  LogicalHeap g{{gpt(1, 0), kOne}};
  EXPECT_TRUE(heap_sub(g, g).empty());
}

TEST(HeapSub, ErrorNamesTheChunk) {
  try {
    heap_sub(LogicalHeap{{pt(0, 0), kHalf}}, LogicalHeap{{pt(0, 0), kOne}});
    FAIL() << "expected InsufficientError";
  } catch (const InsufficientError& e) {
    EXPECT_EQ(e.chunk, pt(0, 0));
    EXPECT_EQ(e.have, kHalf);
    EXPECT_EQ(e.need, kOne);
  }
}

TEST(Wok, Examples) {
  LogicalHeap merged;
  merged.add(pt(0, 0), kHalf);
  merged.add(pt(0, 0), kHalf);
  EXPECT_TRUE(wok(merged));
  EXPECT_FALSE(wok(LogicalHeap{{pt(0, 0), Fraction(3, 2)}}));
  EXPECT_FALSE(wok(LogicalHeap{{pt(0, 0), kHalf}, {pt(0, 1), kHalf}}));
  EXPECT_FALSE(wok(LogicalHeap{{gpt(0, 0), kHalf}, {gpt(0, 1), kHalf}}));
  // A physical and a ghost cell at the same address do not clash.
  EXPECT_TRUE(wok(LogicalHeap{{pt(0, 0), kOne}, {gpt(0, 1), kOne}}));
  // Atomic-space coefficients are not bounded.
  Chunk as = Chunk::atomic_space(Term::unit(), Term::pred("Inv", {}));
  EXPECT_TRUE(wok(LogicalHeap{{as, Fraction(2)}}));
}

TEST(Wok, DownwardClosed) {
  LogicalHeap h{{pt(0, 0), kOne}, {gpt(1, 2), kHalf}};
  ASSERT_TRUE(wok(h));
  EXPECT_TRUE(wok(heap_sub(h, LogicalHeap{{pt(0, 0), kHalf}})));
  EXPECT_TRUE(wok(heap_sub(h, h)));
}

TEST(LogicalHeap, NoZeroEntries) {
  LogicalHeap h{{pt(0, 0), kOne}};
  h.set(pt(0, 0), Fraction::zero());
  EXPECT_TRUE(h.empty());
  h.add(pt(1, 1), Fraction::zero());
  EXPECT_TRUE(h.empty());
  LogicalHeap a{{pt(0, 0), kOne}, {pt(1, 0), kHalf}};
  LogicalHeap d = heap_sub(a, LogicalHeap{{pt(0, 0), kOne}});
  EXPECT_EQ(d.size(), 1U);
  for (const auto& [c, f] : d) EXPECT_FALSE(f.is_zero());
}

TEST(LogicalHeap, DumpIsCanonical) {
  LogicalHeap a;
  a.add(gpt(1, 0), kHalf);
  a.add(pt(0, 2), kOne);
  LogicalHeap b;
  b.add(pt(0, 2), kOne);
  b.add(gpt(1, 0), kHalf);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a.dump_lines().size(), 2U);
}

TEST(EvalGhostExpr, Examples) {
  auto u = GhostExpr::make_union(GhostExpr::make_singleton(GhostExpr::make_unit()), GhostExpr::make_empty_set());
  EXPECT_EQ(eval_ghost_expr(*u, {}), Term::set({Term::unit()}));

  Env env;
  env.ghost["v1"] = I(0);
  env.ghost["v2"] = I(0);
  auto sum = GhostExpr::make_add(GhostExpr::make_ghost_var("v1"), GhostExpr::make_ghost_var("v2"));
  EXPECT_EQ(eval_ghost_expr(*sum, env), I(0));

  env.prog["x"] = I(0);
  auto pair = GhostExpr::make_pair(GhostExpr::make_unit(),
                                   GhostExpr::make_pred("Inv", {GhostExpr::make_prog_var("x")}));
  auto single = GhostExpr::make_singleton(pair);
  auto diff = GhostExpr::make_diff(single, single);
  EXPECT_EQ(eval_ghost_expr(*diff, env), Term::set({}));
}

TEST(EvalGhostExpr, Errors) {
  EXPECT_THROW(eval_ghost_expr(*GhostExpr::make_ghost_var("nope"), {}), EvalError);
  auto bad = GhostExpr::make_add(GhostExpr::make_unit(), GhostExpr::make_int(1));
  EXPECT_THROW(eval_ghost_expr(*bad, {}), EvalError);
}

TEST(HeapAlgebra, RandomizedLaws) {
  for (const auto& r : heap_algebra_suite(300, 7)) {
    EXPECT_TRUE(r.ok()) << r.str();
    EXPECT_EQ(r.trials, 300U) << r.name;
  }
}

}  // namespace
}  // namespace cvf
