// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cvf/fraction.hpp"
#include "cvf/value.hpp"

namespace cvf {

struct SourceLoc {
  int line = 0;
  int col = 0;
};

// ---------------------------------------------------------------------------
// Concrete language

struct Expr {
  enum class Kind : std::uint8_t { Int, Var };
  Kind kind = Kind::Int;
  std::int64_t value = 0;
  std::string name;

  static Expr lit(std::int64_t z) { return {Kind::Int, z, {}}; }
  static Expr var(std::string x) { return {Kind::Var, 0, std::move(x)}; }
  bool is_value() const { return kind == Kind::Int; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class InstrKind : std::uint8_t { Cons, Faa, Deref, AssertEq };

struct Instr {
  InstrKind kind = InstrKind::Cons;
  Expr a;
  Expr b;  // Faa increment, AssertEq right-hand side

  friend bool operator==(const Instr&, const Instr&) = default;
};

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

enum class CommandKind : std::uint8_t { Expr, Instr, Let, Par };

/// Name bound by the `c; c'` shorthand.
inline constexpr const char* kSeqVar = "_";

struct Command {
  CommandKind kind = CommandKind::Expr;
  cvf::Expr expr;
  cvf::Instr instr;
  std::string var;  // Let
  CommandPtr first;
  CommandPtr second;
  SourceLoc loc;

  static CommandPtr make_expr(cvf::Expr e, SourceLoc loc = {});
  static CommandPtr make_instr(cvf::Instr i, SourceLoc loc = {});
  static CommandPtr make_let(std::string x, CommandPtr bound, CommandPtr body, SourceLoc loc = {});
  static CommandPtr make_seq(CommandPtr a, CommandPtr b, SourceLoc loc = {});
  static CommandPtr make_par(CommandPtr left, CommandPtr right, SourceLoc loc = {});

  bool is_value() const { return kind == CommandKind::Expr && expr.is_value(); }
};

/// Deep structural equality, ignoring source locations.
bool operator==(const Command& a, const Command& b);
bool same(const CommandPtr& a, const CommandPtr& b);

// ---------------------------------------------------------------------------
// Ghost expressions and assertions

struct GhostExpr;
using GhostExprPtr = std::shared_ptr<const GhostExpr>;

enum class GhostExprKind : std::uint8_t {
  Value,
  ProgVar,
  GhostVar,
  Add,
  PredCtorApp,
  Pair,
  Unit,
  EmptySet,
  Singleton,
  Union,
  Diff,
};

struct GhostExpr {
  GhostExprKind kind = GhostExprKind::Unit;
  Term value;        // Value
  std::string name;  // ProgVar, GhostVar, PredCtorApp
  std::vector<GhostExprPtr> args;
  SourceLoc loc;

  static GhostExprPtr make_value(Term v, SourceLoc loc = {});
  static GhostExprPtr make_int(std::int64_t z, SourceLoc loc = {});
  static GhostExprPtr make_prog_var(std::string x, SourceLoc loc = {});
  static GhostExprPtr make_ghost_var(std::string g, SourceLoc loc = {});
  static GhostExprPtr make_add(GhostExprPtr a, GhostExprPtr b, SourceLoc loc = {});
  static GhostExprPtr make_pred(std::string p, std::vector<GhostExprPtr> args, SourceLoc loc = {});
  static GhostExprPtr make_pair(GhostExprPtr a, GhostExprPtr b, SourceLoc loc = {});
  static GhostExprPtr make_unit(SourceLoc loc = {});
  static GhostExprPtr make_empty_set(SourceLoc loc = {});
  static GhostExprPtr make_singleton(GhostExprPtr e, SourceLoc loc = {});
  static GhostExprPtr make_union(GhostExprPtr a, GhostExprPtr b, SourceLoc loc = {});
  static GhostExprPtr make_diff(GhostExprPtr a, GhostExprPtr b, SourceLoc loc = {});
};

bool operator==(const GhostExpr& a, const GhostExpr& b);
bool same(const GhostExprPtr& a, const GhostExprPtr& b);

struct Assertion;
using AssertionPtr = std::shared_ptr<const Assertion>;

enum class AssertionKind : std::uint8_t {
  PointsTo,
  GhostPointsTo,
  PredApp,
  AtomicSpace,
  LemType,
  Exists,
  AtomicSpaces,
  HeapChunk,  // internal
  SepConj,
  Emp,
  PureEq,
};

/// Layout of `exprs` per kind:
///   PointsTo/GhostPointsTo: address, value
///   PredApp: predicate value
///   AtomicSpace: name, invariant
///   LemType: lemma value, then the lemma type arguments (`name` is the type)
///   AtomicSpaces/HeapChunk: the single operand
///   PureEq: lhs, rhs
/// Exists binds `name` in `left`; SepConj uses `left` and `right`.
struct Assertion {
  AssertionKind kind = AssertionKind::Emp;
  Fraction coeff = Fraction::one();
  std::vector<GhostExprPtr> exprs;
  std::string name;
  AssertionPtr left;
  AssertionPtr right;
  SourceLoc loc;

  static AssertionPtr make_points_to(Fraction c, GhostExprPtr addr, GhostExprPtr val, SourceLoc loc = {});
  static AssertionPtr make_ghost_points_to(Fraction c, GhostExprPtr addr, GhostExprPtr val, SourceLoc loc = {});
  static AssertionPtr make_pred_app(GhostExprPtr pred, SourceLoc loc = {});
  static AssertionPtr make_atomic_space(Fraction c, GhostExprPtr name, GhostExprPtr inv, SourceLoc loc = {});
  static AssertionPtr make_lem_type(GhostExprPtr value, std::string type, std::vector<GhostExprPtr> args,
                                    SourceLoc loc = {});
  static AssertionPtr make_exists(std::string g, AssertionPtr body, SourceLoc loc = {});
  static AssertionPtr make_atomic_spaces(GhostExprPtr set, SourceLoc loc = {});
  static AssertionPtr make_heap_chunk(GhostExprPtr heap, SourceLoc loc = {});
  static AssertionPtr make_sep(AssertionPtr a, AssertionPtr b, SourceLoc loc = {});
  static AssertionPtr make_emp(SourceLoc loc = {});
  static AssertionPtr make_pure_eq(GhostExprPtr a, GhostExprPtr b, SourceLoc loc = {});
};

bool operator==(const Assertion& a, const Assertion& b);
bool same(const AssertionPtr& a, const AssertionPtr& b);

// ---------------------------------------------------------------------------
// Ghost declarations and ghost commands

struct GhostDecl {
  enum class Kind : std::uint8_t { LemType, PredCtor };
  Kind kind = Kind::PredCtor;
  std::string name;
  std::vector<std::string> params;
  std::vector<std::string> lem_params;     // LemType
  std::vector<std::string> forall_params;  // LemType
  AssertionPtr req;                        // LemType
  AssertionPtr ens;                        // LemType
  AssertionPtr body;                       // PredCtor
  SourceLoc loc;
};

bool operator==(const GhostDecl& a, const GhostDecl& b);

enum class GhostCommandKind : std::uint8_t {
  LemCall,
  GCons,
  GAssign,
  OpenAtomicSpace,
  CloseAtomicSpace,
  HeapUpdate,  // internal
  GLet,
  ProduceLemPtrChunk,  // outer level only
  CreateAtomicSpace,   // outer level only
  DestroyAtomicSpace,  // outer level only
};

/// Layout of `exprs` per kind:
///   LemCall: callee, then arguments
///   GCons: initial value
///   GAssign/HeapUpdate: address, new value
///   Open/Close/Create/Destroy: name, invariant
///   ProduceLemPtrChunk: lemma type arguments (`name` is the type, `params`
///     the lemma parameters, `first` the body)
/// GLet binds `name` to the result of `first` in `second`.
struct GhostCommand {
  GhostCommandKind kind = GhostCommandKind::GCons;
  std::vector<GhostExprPtr> exprs;
  std::string name;
  std::vector<std::string> params;
  GhostCommandPtr first;
  GhostCommandPtr second;
  SourceLoc loc;

  static GhostCommandPtr make(GhostCommandKind kind, std::vector<GhostExprPtr> exprs, SourceLoc loc = {});
  static GhostCommandPtr make_glet(std::string g, GhostCommandPtr bound, GhostCommandPtr body,
                                   SourceLoc loc = {});
  static GhostCommandPtr make_produce(std::string type, std::vector<GhostExprPtr> type_args,
                                      std::vector<std::string> lemma_params, GhostCommandPtr body,
                                      SourceLoc loc = {});

  /// True for inner ghost commands: no produce/create/destroy anywhere.
  bool is_inner() const;
  bool is_outer_only() const {
    return kind == GhostCommandKind::ProduceLemPtrChunk || kind == GhostCommandKind::CreateAtomicSpace ||
           kind == GhostCommandKind::DestroyAtomicSpace;
  }
};

bool operator==(const GhostCommand& a, const GhostCommand& b);
bool same(const GhostCommandPtr& a, const GhostCommandPtr& b);

// ---------------------------------------------------------------------------
// Annotated commands and programs

struct AnnotatedCommand;
using AnnotatedCommandPtr = std::shared_ptr<const AnnotatedCommand>;

enum class AnnotatedKind : std::uint8_t { Expr, Instr, Let, Par, GLet };

/// Par carries optional branch preconditions (`pre_first`, `pre_second`);
/// GLet binds `var` to the result of `ghost` in `first`.
struct AnnotatedCommand {
  AnnotatedKind kind = AnnotatedKind::Expr;
  cvf::Expr expr;
  cvf::Instr instr;
  std::string var;
  AnnotatedCommandPtr first;
  AnnotatedCommandPtr second;
  AssertionPtr pre_first;
  AssertionPtr pre_second;
  GhostCommandPtr ghost;
  SourceLoc loc;

  static AnnotatedCommandPtr make_expr(cvf::Expr e, SourceLoc loc = {});
  static AnnotatedCommandPtr make_instr(cvf::Instr i, SourceLoc loc = {});
  static AnnotatedCommandPtr make_let(std::string x, AnnotatedCommandPtr bound, AnnotatedCommandPtr body,
                                      SourceLoc loc = {});
  static AnnotatedCommandPtr make_par(AssertionPtr pre1, AnnotatedCommandPtr c1, AssertionPtr pre2,
                                      AnnotatedCommandPtr c2, SourceLoc loc = {});
  static AnnotatedCommandPtr make_glet(std::string g, GhostCommandPtr ghost, AnnotatedCommandPtr body,
                                       SourceLoc loc = {});
  /// Embeds a plain command.
  static AnnotatedCommandPtr embed(const CommandPtr& c);
};

bool operator==(const AnnotatedCommand& a, const AnnotatedCommand& b);
bool same(const AnnotatedCommandPtr& a, const AnnotatedCommandPtr& b);

struct Program {
  std::vector<GhostDecl> decls;  // prelude first
  std::size_t prelude_count = 0;
  AnnotatedCommandPtr main;

  const GhostDecl* find(const std::string& name) const;
};

bool operator==(const Program& a, const Program& b);

}  // namespace cvf
