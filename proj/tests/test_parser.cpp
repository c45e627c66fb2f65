// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>

#include "cvf/parser.hpp"
#include "cvf/printer.hpp"
#include "test_support.hpp"

namespace cvf {
namespace {

using testing::corpus_files;
using testing::corpus_text;

TEST(Parser, PlainExampleShape) {
  CommandPtr c = parse_command(corpus_text(testing::kPlain));
  ASSERT_EQ(c->kind, CommandKind::Let);
  EXPECT_EQ(c->var, "x");
  ASSERT_EQ(c->first->kind, CommandKind::Instr);
  EXPECT_EQ(c->first->instr.kind, InstrKind::Cons);

  const CommandPtr& rest = c->second;
  ASSERT_EQ(rest->kind, CommandKind::Let);
  EXPECT_EQ(rest->var, kSeqVar);
  const CommandPtr& par = rest->first;
  ASSERT_EQ(par->kind, CommandKind::Par);
  for (const auto* branch : {&par->first, &par->second}) {
    ASSERT_EQ((*branch)->kind, CommandKind::Instr);
    EXPECT_EQ((*branch)->instr.kind, InstrKind::Faa);
    EXPECT_EQ((*branch)->instr.a, Expr::var("x"));
    EXPECT_EQ((*branch)->instr.b, Expr::lit(1));
  }
  const CommandPtr& tail = rest->second;
  ASSERT_EQ(tail->kind, CommandKind::Let);
  EXPECT_EQ(tail->first->instr.kind, InstrKind::Deref);
  EXPECT_EQ(tail->second->instr.kind, InstrKind::AssertEq);
  EXPECT_EQ(tail->second->instr.b, Expr::lit(2));
}

TEST(Parser, EmptyInputIsAnError) {
  EXPECT_THROW(parse_command(""), ParseError);
  EXPECT_THROW(parse_program(""), ParseError);
  EXPECT_THROW(parse_program("  // only a comment\n"), ParseError);
}

TEST(Parser, AnnotatedExampleDeclarations) {
  Program p = parse_program(corpus_text(testing::kExample));
  ASSERT_EQ(p.decls.size(), p.prelude_count + 5);
  std::vector<std::string> names;
  for (std::size_t i = p.prelude_count; i < p.decls.size(); ++i) {
    EXPECT_EQ(p.decls[i].kind, GhostDecl::Kind::PredCtor);
    names.push_back(p.decls[i].name);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"Inv", "pre1", "post1", "pre2", "post2"}));
  ASSERT_NE(p.find("FAA_ghop"), nullptr);
  ASSERT_NE(p.find("FAA_op"), nullptr);
  EXPECT_EQ(p.find("FAA_ghop")->kind, GhostDecl::Kind::LemType);
  EXPECT_EQ(p.find("Inv")->params, (std::vector<std::string>{"x", "g1", "g2"}));
}

TEST(Parser, PreludeParsesOnItsOwn) {
  const auto& decls = prelude_decls();
  Program p = parse_program("0");
  ASSERT_EQ(decls.size(), p.prelude_count);
  for (const char* name : {"FAA_op", "FAA_ghop"}) {
    const GhostDecl* d = p.find(name);
    ASSERT_NE(d, nullptr) << name;
    EXPECT_EQ(d->kind, GhostDecl::Kind::LemType);
  }
  EXPECT_FALSE(prelude_source().empty());
}

TEST(Parser, ErrorsCarryPositions) {
  try {
    parse_command("let x = cons(0) in\n  faa(x, )");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 2);
    EXPECT_GT(e.col, 1);
  }
  EXPECT_THROW(parse_command("let x = 1 in"), ParseError);
  EXPECT_THROW(parse_command("par { 1 } { 2 } 3"), ParseError);
  EXPECT_THROW(parse_command("assert 1"), ParseError);
}

TEST(Parser, RejectsGhostCodeInPlainPrograms) {
  EXPECT_THROW(parse_command("glet g = gcons(0) in 0"), ParseError);
}

TEST(Parser, RejectsInternalFormsByDefault) {
  const char* text = "pred_ctor P(h)() = heap(h);\n0";
  EXPECT_THROW(parse_program(text), ParseError);
  EXPECT_NO_THROW(parse_program(text, ParseOptions{true}));
}

TEST(Parser, UnboundNamesAreErrors) {
  EXPECT_THROW(parse_command("faa(y, 1)"), ParseError);
  EXPECT_THROW(parse_program("pred_ctor P(x)() = y |-> 0;\n0"), ParseError);
}

TEST(Printer, IntLiteral) {
  EXPECT_EQ(pretty(Expr::lit(0)), "0");
  EXPECT_EQ(pretty(*Command::make_expr(Expr::lit(0))), "0");
}

TEST(Printer, PlainRoundTrip) {
  CommandPtr c = parse_command(corpus_text(testing::kPlain));
  CommandPtr again = parse_command(pretty(*c));
  EXPECT_EQ(*c, *again);
}

TEST(Printer, CorpusRoundTripIsAFixpoint) {
  for (const auto& f : corpus_files()) {
    SCOPED_TRACE(f);
    Program p = parse_program(corpus_text(f));
    std::string once = pretty(p);
    Program q = parse_program(once);
    EXPECT_EQ(p, q);
    EXPECT_EQ(once, pretty(q));
  }
}

CommandPtr random_command(std::mt19937_64& rng, int depth, std::vector<std::string>& scope) {
  auto operand = [&]() {
    if (!scope.empty() && rng() % 2) return Expr::var(scope[rng() % scope.size()]);
    return Expr::lit(static_cast<std::int64_t>(rng() % 5));
  };
  switch (depth <= 0 ? rng() % 2 : rng() % 5) {
    case 0:
      return Command::make_expr(operand());
    case 1: {
      Instr i;
      i.kind = static_cast<InstrKind>(rng() % 4);
      i.a = operand();
      if (i.kind == InstrKind::Faa || i.kind == InstrKind::AssertEq) i.b = operand();
      return Command::make_instr(i);
    }
    case 2:
    case 3: {
      std::string x = "x" + std::to_string(scope.size());
      CommandPtr bound = random_command(rng, depth - 1, scope);
      scope.push_back(x);
      CommandPtr body = random_command(rng, depth - 1, scope);
      scope.pop_back();
      return Command::make_let(x, bound, body);
    }
    default: {
      CommandPtr l = random_command(rng, depth - 1, scope);
      CommandPtr r = random_command(rng, depth - 1, scope);
      return Command::make_par(l, r);
    }
  }
}

TEST(Printer, RandomCommandsRoundTrip) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> scope;
    CommandPtr c = random_command(rng, 4, scope);
    std::string text = pretty(*c);
    SCOPED_TRACE(text);
    CommandPtr back = parse_command(text);
    EXPECT_EQ(*c, *back);
  }
}

TEST(Parser, StandaloneAssertion) {
  Program p = parse_program(corpus_text(testing::kExample));
  AssertionScope scope;
  scope.prog = {"x"};
  scope.ghost = {"g1", "g2"};
  AssertionPtr a = parse_assertion("[1/2]g1 |->g 0 * Inv(x, g1, g2)()", p, scope);
  ASSERT_EQ(a->kind, AssertionKind::SepConj);
  EXPECT_EQ(a->left->coeff, Fraction(1, 2));
  EXPECT_THROW(parse_assertion("res == 0", p, scope), ParseError);
  scope.allow_res = true;
  EXPECT_NO_THROW(parse_assertion("res == 0", p, scope));
}

}  // namespace
}  // namespace cvf
