// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "cvf/parser.hpp"
#include "cvf/printer.hpp"
#include "cvf/semantics.hpp"
#include "cvf/transform.hpp"
#include "test_support.hpp"

namespace cvf {
namespace {

using testing::corpus_files;
using testing::corpus_text;

TEST(Erase, AnnotatedExampleGivesPlainExample) {
  Program p = parse_program(corpus_text(testing::kExample));
  CommandPtr erased = erase(p.main);
  CommandPtr plain = parse_command(corpus_text(testing::kPlain));
  EXPECT_EQ(*erased, *plain);
  EXPECT_EQ(pretty(*erased), pretty(*plain));
}

TEST(Erase, PlainCommandIsUnchanged) {
  CommandPtr plain = parse_command(corpus_text(testing::kPlain));
  EXPECT_EQ(*erase(AnnotatedCommand::embed(plain)), *plain);
}

TEST(Erase, DropsGhostLet) {
  Program p = parse_program("glet g = gcons(0) in let x = cons(1) in *x");
  ASSERT_EQ(p.main->kind, AnnotatedKind::GLet);
  EXPECT_EQ(*erase(p.main), *parse_command("let x = cons(1) in *x"));
  EXPECT_EQ(*erase(p.main), *erase(p.main->first));
}

TEST(Erase, LeavesNoGhostNodes) {
  for (const auto& f : corpus_files()) {
    SCOPED_TRACE(f);
    Program p = parse_program(corpus_text(f));
    AnnotatedCommandPtr back = AnnotatedCommand::embed(erase(p.main));
    EXPECT_EQ(count_ghost_nodes(*back), 0U);
    EXPECT_TRUE(is_ghost_free(*back));
    EXPECT_EQ(*erase(back), *erase(p.main));
  }
}

TEST(Erase, CountsGhostNodesOfTheExample) {
  Program p = parse_program(corpus_text(testing::kExample));
  EXPECT_FALSE(is_ghost_free(*p.main));
  // glet g1, glet g2, create, produce (x2), destroy, and two preconditions.
  EXPECT_EQ(count_ghost_nodes(*p.main), 8U);
}

TEST(Subst, MatchesLetReduction) {
  CommandPtr c = parse_command("let x = 3 in faa(x, x)");
  std::vector<Step> next = step({{{3, 0}}, c});
  ASSERT_EQ(next.size(), 1U);
  EXPECT_EQ(*next[0].next.cmd, *subst(c->second, "x", 3));
  EXPECT_EQ(pretty(*next[0].next.cmd), "faa(3, 3)");
}

TEST(Subst, EmptyBindingsAreIdentity) {
  Program p = parse_program(corpus_text(testing::kExample));
  EXPECT_EQ(*subst(p.main, Bindings{}), *p.main);
  CommandPtr c = parse_command(corpus_text(testing::kPlain));
  EXPECT_EQ(*subst(c, std::map<std::string, std::int64_t>{}), *c);
}

TEST(Subst, RespectsBinders) {
  Program p = parse_program("0");
  AssertionScope scope;
  scope.ghost = {"w"};
  AssertionPtr a = parse_assertion("exists g. g |->g w", p, scope);
  Bindings b;
  b.ghost["g"] = Term::integer(3);
  EXPECT_EQ(*subst(a, b), *a);
  b.ghost["w"] = Term::integer(5);
  AssertionPtr s = subst(a, b);
  EXPECT_EQ(pretty(*s), "exists g. g |->g 5");

  CommandPtr c = parse_command("let x = 1 in let x = 2 in x");
  CommandPtr once = subst(c->second, "x", 7);
  EXPECT_EQ(*once, *c->second);
}

TEST(Subst, CommutesWithErase) {
  // Free program variable `y` in both the ghost and the plain parts.
  Program p = parse_program(
      "pred_ctor P(a)() = a |-> 0;\n"
      "let y = cons(0) in\n"
      "glet g = gcons(y) in\n"
      "par pre { P(y)() } { faa(y, 1) } pre { emp } { let z = *y in z }");
  ASSERT_EQ(p.main->kind, AnnotatedKind::Let);
  const AnnotatedCommandPtr& body = p.main->second;
  Bindings b;
  b.prog["y"] = Term::integer(4);
  b.ghost["g"] = Term::integer(9);
  CommandPtr lhs = erase(subst(body, b));
  CommandPtr rhs = subst(erase(body), std::map<std::string, std::int64_t>{{"y", 4}});
  EXPECT_EQ(*lhs, *rhs);
}

TEST(Subst, RejectsNonIntegerProgramValues) {
  AnnotatedCommandPtr c = AnnotatedCommand::embed(parse_command("let x = cons(0) in faa(x, 1)"));
  Bindings b;
  b.prog["x"] = Term::unit();
  EXPECT_THROW(subst(c->second, b), std::invalid_argument);
}

}  // namespace
}  // namespace cvf
