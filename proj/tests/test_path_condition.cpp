// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cvf/path_condition.hpp"

namespace cvf {
namespace {

Term I(std::int64_t z) { return Term::integer(z); }
Term S(std::uint64_t id, const char* hint) { return Term::symbol(id, hint); }

TEST(PathCondition, LinearNormalization) {
  PathCondition pc;
  Term v1 = S(1, "v1");
  Term v2 = S(2, "v2");
  ASSERT_TRUE(pc.assume_eq(v1, I(0)));
  ASSERT_TRUE(pc.assume_eq(v2, I(0)));
  EXPECT_EQ(pc.entails_eq(Term::add(v1, v2), I(0)), Entailment::Yes);
  EXPECT_EQ(pc.entails_eq(Term::add(v1, v2), I(1)), Entailment::No);
}

TEST(PathCondition, EmptyKnowsNothing) {
  PathCondition pc;
  EXPECT_EQ(pc.entails_eq(S(1, "v"), I(2)), Entailment::Unknown);
  EXPECT_EQ(pc.entails_eq(S(1, "v"), S(1, "v")), Entailment::Yes);
  EXPECT_EQ(pc.entails_eq(I(1), I(2)), Entailment::No);
}

TEST(PathCondition, NotMemberOfEmptySet) {
  PathCondition pc;
  Term set = S(1, "S");
  ASSERT_TRUE(pc.assume_eq(set, Term::set({})));
  Term elem = Term::pair(Term::unit(), Term::pred("Inv", {S(2, "x")}));
  EXPECT_EQ(pc.entails_not_member(elem, set), Entailment::Yes);
  PathCondition open;
  ASSERT_TRUE(open.assume_eq(set, Term::set({elem})));
  EXPECT_EQ(open.entails_not_member(elem, set), Entailment::No);
}

TEST(PathCondition, SolvesLinearEquations) {
  PathCondition pc;
  Term v = S(1, "v");
  Term w = S(2, "w");
  // v + 1 = w + 3 gives v = w + 2.
  ASSERT_TRUE(pc.assume_eq(Term::add(v, I(1)), Term::add(w, I(3))));
  EXPECT_EQ(pc.entails_eq(v, Term::add(w, I(2))), Entailment::Yes);
  ASSERT_TRUE(pc.assume_eq(w, I(0)));
  EXPECT_EQ(pc.normalize(v), I(2));
}

TEST(PathCondition, ConstructorsDecompose) {
  PathCondition pc;
  Term a = S(1, "a");
  Term b = S(2, "b");
  ASSERT_TRUE(pc.assume_eq(Term::pair(a, I(1)), Term::pair(I(4), b)));
  EXPECT_EQ(pc.normalize(a), I(4));
  EXPECT_EQ(pc.normalize(b), I(1));
  EXPECT_FALSE(pc.assume_eq(Term::pair(a, b), Term::unit()));
  EXPECT_FALSE(pc.consistent());
}

TEST(PathCondition, DisequalitiesAreRechecked) {
  PathCondition pc;
  Term v = S(1, "v");
  ASSERT_TRUE(pc.assume_neq(v, I(3)));
  EXPECT_EQ(pc.entails_neq(v, I(3)), Entailment::Yes);
  EXPECT_EQ(pc.entails_eq(v, I(3)), Entailment::No);
  EXPECT_FALSE(pc.assume_eq(v, I(3)));
  EXPECT_FALSE(pc.consistent());
}

TEST(PathCondition, LogRecordsEveryFact) {
  PathCondition pc;
  pc.assume_eq(S(1, "v"), I(0));
  pc.assume_neq(S(2, "w"), I(0));
  ASSERT_EQ(pc.log().size(), 2U);
  EXPECT_EQ(pc.log()[1].kind, Fact::Kind::Neq);
  EXPECT_FALSE(pc.dump().empty());
}

TEST(PathCondition, ReplayingTheLogGivesTheSameAnswers) {
  PathCondition pc;
  Term v = S(1, "v");
  Term w = S(2, "w");
  pc.assume_eq(Term::add(v, w), I(2));
  pc.assume_eq(w, I(1));
  PathCondition copy;
  for (const auto& f : pc.log()) copy.assume(f);
  EXPECT_EQ(copy.entails_eq(v, I(1)), pc.entails_eq(v, I(1)));
  EXPECT_EQ(copy.entails_eq(v, I(1)), Entailment::Yes);
}

}  // namespace
}  // namespace cvf
