// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvf/ast.hpp"
#include "cvf/path_condition.hpp"
#include "cvf/sym_heap.hpp"
#include "cvf/transform.hpp"

namespace cvf {

struct SymbolicState {
  PathCondition pc;
  SymHeap heap;
  Bindings env;

  /// Heap lines followed by path-condition lines, with readable symbols.
  std::vector<std::string> dump() const;
};

enum class FailureKind : std::uint8_t {
  ConsumeFailure,      // a required chunk is missing or insufficient
  UnprovableEquality,  // assert or pure equality not entailed
  SideCondition,       // open's "(V, V') not in S"
  AmbiguousMatch,
  DepthExceeded,
  Leak,                // only with strict leak checking
  IllFormed,           // arity, unbound names, bad operands
};

std::string to_string(FailureKind k);

struct Diagnostic {
  FailureKind kind = FailureKind::IllFormed;
  SourceLoc loc;
  std::string message;
  std::vector<std::string> state;
};

struct VerifyFailure : std::runtime_error {
  explicit VerifyFailure(Diagnostic d);
  Diagnostic diag;
};

/// State of the outermost thread (and of par branches) before each
/// command, at branch entry and exit, and after joins.
struct Snapshot {
  std::string thread;  // "root", "root.L", ...
  std::string point;   // "entry", "exit", "join", or the command about to run
  SourceLoc loc;
  std::vector<std::string> heap;  // readable `coeff chunk` lines
  std::vector<std::string> pc;
};

struct VerifyStats {
  std::size_t branches = 1;
  std::size_t pruned = 0;
  std::size_t produced = 0;
  std::size_t consumed = 0;
  std::size_t lemma_bodies = 0;
  /// Times the lemma-type chunk stock grew during a lemma body (always 0).
  std::size_t lemma_chunk_increases = 0;
};

enum class Verdict : std::uint8_t { Verified, Failed };
std::string to_string(Verdict v);

struct VerifyReport {
  Verdict verdict = Verdict::Verified;
  std::string file;
  std::optional<Diagnostic> failure;
  std::vector<Diagnostic> notes;  // leaks
  VerifyStats stats;
  std::vector<Snapshot> snapshots;

  bool verified() const { return verdict == Verdict::Verified; }
  std::string text() const;
  /// Single JSON document; snapshots are left out.
  std::string json() const;
};

struct VerifyOptions {
  bool strict_leaks = false;
  int unfold_depth = 64;
  bool record_snapshots = false;
  std::string file;
};

/// Symbolic execution for one program. Not thread-safe; use one instance
/// per run.
class Verifier {
 public:
  struct Outcome {
    SymbolicState state;
    Term result;
  };
  struct Consumed {
    SymbolicState state;
    /// Values chosen for the existentials of the consumed assertion.
    std::map<std::string, Term> witnesses;
  };

  explicit Verifier(const Program& program, VerifyOptions options = {});

  Term fresh(const std::string& hint);

  /// All states (after pruning inconsistent ones) satisfying `a` on top of
  /// `st`. Names in `a` are resolved in `st.env`.
  std::vector<SymbolicState> produce(const SymbolicState& st, const Assertion& a);
  /// Removes the footprint of `a`. Throws VerifyFailure.
  Consumed consume(const SymbolicState& st, const Assertion& a);

  std::vector<Outcome> verify_cmd(const SymbolicState& st, const AnnotatedCommand& c);
  /// Runs a ghost command; `outer` permits create/destroy/produce.
  std::vector<Outcome> verify_ghost(const SymbolicState& st, const GhostCommand& g, bool outer);

  /// Checks a lemma value `lem(params) { body }` against `type(type_args)`
  /// from a context whose path condition is `ctx`. Throws VerifyFailure.
  void check_lemma_value(const PathCondition& ctx, const std::string& type, const std::vector<Term>& type_args,
                         const std::vector<std::string>& params, const GhostCommandPtr& body, SourceLoc loc);

  /// Verifies the main command from the empty state with postcondition
  /// True.
  VerifyReport run();
  /// Verifies `c` from the empty state, then consumes `post` with `res`
  /// bound to the result, in the innermost scope of `c`.
  VerifyReport run(const AnnotatedCommand& c, const Assertion* post);

  const VerifyStats& stats() const { return stats_; }

 private:
  struct Impl;
  friend struct Impl;

  const Program& program_;
  VerifyOptions options_;
  std::uint64_t next_symbol_ = 1;
  VerifyStats stats_;
  std::vector<Diagnostic> notes_;
  std::vector<Snapshot> snapshots_;
  std::vector<std::string> thread_;
  int lemma_depth_ = 0;
};

VerifyReport verify_program(const Program& program, const VerifyOptions& options = {});

/// Stand-alone lemma typing for a ground lemma value: true iff
/// `value : type(type_args)` holds. `diag` receives the failure.
bool check_lemma_value(const Program& program, const Term& value, const std::string& type,
                       const std::vector<Term>& type_args, Diagnostic* diag = nullptr);

}  // namespace cvf
