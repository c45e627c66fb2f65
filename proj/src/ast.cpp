// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/ast.hpp"

#include <algorithm>

namespace cvf {

namespace {

template <typename T>
bool same_ptr(const std::shared_ptr<const T>& a, const std::shared_ptr<const T>& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

template <typename T>
bool same_list(const std::vector<std::shared_ptr<const T>>& a, const std::vector<std::shared_ptr<const T>>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const auto& x, const auto& y) { return same_ptr(x, y); });
}

}  // namespace

// --- Command ---------------------------------------------------------------

CommandPtr Command::make_expr(cvf::Expr e, SourceLoc loc) {
  auto c = std::make_shared<Command>();
  c->kind = CommandKind::Expr;
  c->expr = std::move(e);
  c->loc = loc;
  return c;
}

CommandPtr Command::make_instr(cvf::Instr i, SourceLoc loc) {
  auto c = std::make_shared<Command>();
  c->kind = CommandKind::Instr;
  c->instr = std::move(i);
  c->loc = loc;
  return c;
}

CommandPtr Command::make_let(std::string x, CommandPtr bound, CommandPtr body, SourceLoc loc) {
  auto c = std::make_shared<Command>();
  c->kind = CommandKind::Let;
  c->var = std::move(x);
  c->first = std::move(bound);
  c->second = std::move(body);
  c->loc = loc;
  return c;
}

CommandPtr Command::make_seq(CommandPtr a, CommandPtr b, SourceLoc loc) {
  return make_let(kSeqVar, std::move(a), std::move(b), loc);
}

CommandPtr Command::make_par(CommandPtr left, CommandPtr right, SourceLoc loc) {
  auto c = std::make_shared<Command>();
  c->kind = CommandKind::Par;
  c->first = std::move(left);
  c->second = std::move(right);
  c->loc = loc;
  return c;
}

bool operator==(const Command& a, const Command& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case CommandKind::Expr:
      return a.expr == b.expr;
    case CommandKind::Instr:
      return a.instr == b.instr;
    case CommandKind::Let:
      return a.var == b.var && same_ptr(a.first, b.first) && same_ptr(a.second, b.second);
    case CommandKind::Par:
      return same_ptr(a.first, b.first) && same_ptr(a.second, b.second);
  }
  return false;
}

bool same(const CommandPtr& a, const CommandPtr& b) { return same_ptr(a, b); }

// --- GhostExpr -------------------------------------------------------------

namespace {

GhostExprPtr ghost_expr(GhostExprKind kind, std::vector<GhostExprPtr> args, SourceLoc loc) {
  auto e = std::make_shared<GhostExpr>();
  e->kind = kind;
  e->args = std::move(args);
  e->loc = loc;
  return e;
}

GhostExprPtr named_expr(GhostExprKind kind, std::string name, SourceLoc loc) {
  auto e = std::make_shared<GhostExpr>();
  e->kind = kind;
  e->name = std::move(name);
  e->loc = loc;
  return e;
}

}  // namespace

GhostExprPtr GhostExpr::make_value(Term v, SourceLoc loc) {
  auto e = std::make_shared<GhostExpr>();
  e->kind = GhostExprKind::Value;
  e->value = std::move(v);
  e->loc = loc;
  return e;
}

GhostExprPtr GhostExpr::make_int(std::int64_t z, SourceLoc loc) { return make_value(Term::integer(z), loc); }

GhostExprPtr GhostExpr::make_prog_var(std::string x, SourceLoc loc) {
  return named_expr(GhostExprKind::ProgVar, std::move(x), loc);
}

GhostExprPtr GhostExpr::make_ghost_var(std::string g, SourceLoc loc) {
  return named_expr(GhostExprKind::GhostVar, std::move(g), loc);
}

GhostExprPtr GhostExpr::make_add(GhostExprPtr a, GhostExprPtr b, SourceLoc loc) {
  return ghost_expr(GhostExprKind::Add, {std::move(a), std::move(b)}, loc);
}

GhostExprPtr GhostExpr::make_pred(std::string p, std::vector<GhostExprPtr> args, SourceLoc loc) {
  auto e = ghost_expr(GhostExprKind::PredCtorApp, std::move(args), loc);
  std::const_pointer_cast<GhostExpr>(e)->name = std::move(p);
  return e;
}

GhostExprPtr GhostExpr::make_pair(GhostExprPtr a, GhostExprPtr b, SourceLoc loc) {
  return ghost_expr(GhostExprKind::Pair, {std::move(a), std::move(b)}, loc);
}

GhostExprPtr GhostExpr::make_unit(SourceLoc loc) { return ghost_expr(GhostExprKind::Unit, {}, loc); }

GhostExprPtr GhostExpr::make_empty_set(SourceLoc loc) { return ghost_expr(GhostExprKind::EmptySet, {}, loc); }

GhostExprPtr GhostExpr::make_singleton(GhostExprPtr e, SourceLoc loc) {
  return ghost_expr(GhostExprKind::Singleton, {std::move(e)}, loc);
}

GhostExprPtr GhostExpr::make_union(GhostExprPtr a, GhostExprPtr b, SourceLoc loc) {
  return ghost_expr(GhostExprKind::Union, {std::move(a), std::move(b)}, loc);
}

GhostExprPtr GhostExpr::make_diff(GhostExprPtr a, GhostExprPtr b, SourceLoc loc) {
  return ghost_expr(GhostExprKind::Diff, {std::move(a), std::move(b)}, loc);
}

bool operator==(const GhostExpr& a, const GhostExpr& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == GhostExprKind::Value && !(a.value == b.value)) return false;
  return a.name == b.name && same_list(a.args, b.args);
}

bool same(const GhostExprPtr& a, const GhostExprPtr& b) { return same_ptr(a, b); }

// --- Assertion -------------------------------------------------------------

namespace {

AssertionPtr assertion(AssertionKind kind, Fraction c, std::vector<GhostExprPtr> exprs, SourceLoc loc) {
  auto a = std::make_shared<Assertion>();
  a->kind = kind;
  a->coeff = c;
  a->exprs = std::move(exprs);
  a->loc = loc;
  return a;
}

}  // namespace

AssertionPtr Assertion::make_points_to(Fraction c, GhostExprPtr addr, GhostExprPtr val, SourceLoc loc) {
  return assertion(AssertionKind::PointsTo, c, {std::move(addr), std::move(val)}, loc);
}

AssertionPtr Assertion::make_ghost_points_to(Fraction c, GhostExprPtr addr, GhostExprPtr val, SourceLoc loc) {
  return assertion(AssertionKind::GhostPointsTo, c, {std::move(addr), std::move(val)}, loc);
}

AssertionPtr Assertion::make_pred_app(GhostExprPtr pred, SourceLoc loc) {
  return assertion(AssertionKind::PredApp, Fraction::one(), {std::move(pred)}, loc);
}

AssertionPtr Assertion::make_atomic_space(Fraction c, GhostExprPtr name, GhostExprPtr inv, SourceLoc loc) {
  return assertion(AssertionKind::AtomicSpace, c, {std::move(name), std::move(inv)}, loc);
}

AssertionPtr Assertion::make_lem_type(GhostExprPtr value, std::string type, std::vector<GhostExprPtr> args,
                                      SourceLoc loc) {
  args.insert(args.begin(), std::move(value));
  auto a = assertion(AssertionKind::LemType, Fraction::one(), std::move(args), loc);
  std::const_pointer_cast<Assertion>(a)->name = std::move(type);
  return a;
}

AssertionPtr Assertion::make_exists(std::string g, AssertionPtr body, SourceLoc loc) {
  auto a = std::make_shared<Assertion>();
  a->kind = AssertionKind::Exists;
  a->name = std::move(g);
  a->left = std::move(body);
  a->loc = loc;
  return a;
}

AssertionPtr Assertion::make_atomic_spaces(GhostExprPtr set, SourceLoc loc) {
  return assertion(AssertionKind::AtomicSpaces, Fraction::one(), {std::move(set)}, loc);
}

AssertionPtr Assertion::make_heap_chunk(GhostExprPtr heap, SourceLoc loc) {
  return assertion(AssertionKind::HeapChunk, Fraction::one(), {std::move(heap)}, loc);
}

AssertionPtr Assertion::make_sep(AssertionPtr l, AssertionPtr r, SourceLoc loc) {
  auto a = std::make_shared<Assertion>();
  a->kind = AssertionKind::SepConj;
  a->left = std::move(l);
  a->right = std::move(r);
  a->loc = loc;
  return a;
}

AssertionPtr Assertion::make_emp(SourceLoc loc) { return assertion(AssertionKind::Emp, Fraction::one(), {}, loc); }

AssertionPtr Assertion::make_pure_eq(GhostExprPtr l, GhostExprPtr r, SourceLoc loc) {
  return assertion(AssertionKind::PureEq, Fraction::one(), {std::move(l), std::move(r)}, loc);
}

bool operator==(const Assertion& a, const Assertion& b) {
  return a.kind == b.kind && a.coeff == b.coeff && a.name == b.name && same_list(a.exprs, b.exprs) &&
         same_ptr(a.left, b.left) && same_ptr(a.right, b.right);
}

bool same(const AssertionPtr& a, const AssertionPtr& b) { return same_ptr(a, b); }

// --- Ghost declarations and commands --------------------------------------

bool operator==(const GhostDecl& a, const GhostDecl& b) {
  return a.kind == b.kind && a.name == b.name && a.params == b.params && a.lem_params == b.lem_params &&
         a.forall_params == b.forall_params && same_ptr(a.req, b.req) && same_ptr(a.ens, b.ens) &&
         same_ptr(a.body, b.body);
}

GhostCommandPtr GhostCommand::make(GhostCommandKind kind, std::vector<GhostExprPtr> exprs, SourceLoc loc) {
  auto g = std::make_shared<GhostCommand>();
  g->kind = kind;
  g->exprs = std::move(exprs);
  g->loc = loc;
  return g;
}

GhostCommandPtr GhostCommand::make_glet(std::string name, GhostCommandPtr bound, GhostCommandPtr body,
                                        SourceLoc loc) {
  auto g = std::make_shared<GhostCommand>();
  g->kind = GhostCommandKind::GLet;
  g->name = std::move(name);
  g->first = std::move(bound);
  g->second = std::move(body);
  g->loc = loc;
  return g;
}

GhostCommandPtr GhostCommand::make_produce(std::string type, std::vector<GhostExprPtr> type_args,
                                           std::vector<std::string> lemma_params, GhostCommandPtr body,
                                           SourceLoc loc) {
  auto g = std::make_shared<GhostCommand>();
  g->kind = GhostCommandKind::ProduceLemPtrChunk;
  g->name = std::move(type);
  g->exprs = std::move(type_args);
  g->params = std::move(lemma_params);
  g->first = std::move(body);
  g->loc = loc;
  return g;
}

bool GhostCommand::is_inner() const {
  if (is_outer_only()) return false;
  if (kind == GhostCommandKind::GLet) return first->is_inner() && second->is_inner();
  return true;
}

bool operator==(const GhostCommand& a, const GhostCommand& b) {
  return a.kind == b.kind && a.name == b.name && a.params == b.params && same_list(a.exprs, b.exprs) &&
         same_ptr(a.first, b.first) && same_ptr(a.second, b.second);
}

bool same(const GhostCommandPtr& a, const GhostCommandPtr& b) { return same_ptr(a, b); }

// --- Annotated commands ----------------------------------------------------

AnnotatedCommandPtr AnnotatedCommand::make_expr(cvf::Expr e, SourceLoc loc) {
  auto c = std::make_shared<AnnotatedCommand>();
  c->kind = AnnotatedKind::Expr;
  c->expr = std::move(e);
  c->loc = loc;
  return c;
}

AnnotatedCommandPtr AnnotatedCommand::make_instr(cvf::Instr i, SourceLoc loc) {
  auto c = std::make_shared<AnnotatedCommand>();
  c->kind = AnnotatedKind::Instr;
  c->instr = std::move(i);
  c->loc = loc;
  return c;
}

AnnotatedCommandPtr AnnotatedCommand::make_let(std::string x, AnnotatedCommandPtr bound,
                                               AnnotatedCommandPtr body, SourceLoc loc) {
  auto c = std::make_shared<AnnotatedCommand>();
  c->kind = AnnotatedKind::Let;
  c->var = std::move(x);
  c->first = std::move(bound);
  c->second = std::move(body);
  c->loc = loc;
  return c;
}

AnnotatedCommandPtr AnnotatedCommand::make_par(AssertionPtr pre1, AnnotatedCommandPtr c1, AssertionPtr pre2,
                                               AnnotatedCommandPtr c2, SourceLoc loc) {
  auto c = std::make_shared<AnnotatedCommand>();
  c->kind = AnnotatedKind::Par;
  c->pre_first = std::move(pre1);
  c->first = std::move(c1);
  c->pre_second = std::move(pre2);
  c->second = std::move(c2);
  c->loc = loc;
  return c;
}

AnnotatedCommandPtr AnnotatedCommand::make_glet(std::string g, GhostCommandPtr ghost, AnnotatedCommandPtr body,
                                                SourceLoc loc) {
  auto c = std::make_shared<AnnotatedCommand>();
  c->kind = AnnotatedKind::GLet;
  c->var = std::move(g);
  c->ghost = std::move(ghost);
  c->first = std::move(body);
  c->loc = loc;
  return c;
}

AnnotatedCommandPtr AnnotatedCommand::embed(const CommandPtr& c) {
  switch (c->kind) {
    case CommandKind::Expr:
      return make_expr(c->expr, c->loc);
    case CommandKind::Instr:
      return make_instr(c->instr, c->loc);
    case CommandKind::Let:
      return make_let(c->var, embed(c->first), embed(c->second), c->loc);
    case CommandKind::Par:
      return make_par(nullptr, embed(c->first), nullptr, embed(c->second), c->loc);
  }
  return nullptr;
}

bool operator==(const AnnotatedCommand& a, const AnnotatedCommand& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case AnnotatedKind::Expr:
      return a.expr == b.expr;
    case AnnotatedKind::Instr:
      return a.instr == b.instr;
    case AnnotatedKind::Let:
      return a.var == b.var && same_ptr(a.first, b.first) && same_ptr(a.second, b.second);
    case AnnotatedKind::Par:
      return same_ptr(a.pre_first, b.pre_first) && same_ptr(a.first, b.first) &&
             same_ptr(a.pre_second, b.pre_second) && same_ptr(a.second, b.second);
    case AnnotatedKind::GLet:
      return a.var == b.var && same_ptr(a.ghost, b.ghost) && same_ptr(a.first, b.first);
  }
  return false;
}

bool same(const AnnotatedCommandPtr& a, const AnnotatedCommandPtr& b) { return same_ptr(a, b); }

const GhostDecl* Program::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

bool operator==(const Program& a, const Program& b) {
  return a.prelude_count == b.prelude_count && a.decls == b.decls && same_ptr(a.main, b.main);
}

}  // namespace cvf
