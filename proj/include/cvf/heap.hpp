// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvf/ast.hpp"
#include "cvf/fraction.hpp"
#include "cvf/transform.hpp"
#include "cvf/value.hpp"

namespace cvf {

enum class ChunkKind : std::uint8_t { PointsTo, GhostPointsTo, AtomicSpace, LemType, AtomicSpaces, Heap };

/// One of the six chunk forms. `args` holds, per kind:
///   PointsTo/GhostPointsTo: address, value
///   AtomicSpace: name, invariant
///   LemType: lemma value, then the type arguments (`lem_type` names the type)
///   AtomicSpaces/Heap: the single operand
struct Chunk {
  ChunkKind kind = ChunkKind::PointsTo;
  std::vector<Term> args;
  std::string lem_type;

  static Chunk points_to(Term addr, Term value) { return {ChunkKind::PointsTo, {std::move(addr), std::move(value)}, {}}; }
  static Chunk ghost_points_to(Term addr, Term value) {
    return {ChunkKind::GhostPointsTo, {std::move(addr), std::move(value)}, {}};
  }
  static Chunk atomic_space(Term name, Term inv) { return {ChunkKind::AtomicSpace, {std::move(name), std::move(inv)}, {}}; }
  static Chunk lem_type_chunk(Term value, std::string type, std::vector<Term> type_args) {
    type_args.insert(type_args.begin(), std::move(value));
    return {ChunkKind::LemType, std::move(type_args), std::move(type)};
  }
  static Chunk atomic_spaces(Term set) { return {ChunkKind::AtomicSpaces, {std::move(set)}, {}}; }
  static Chunk heap(Term h) { return {ChunkKind::Heap, {std::move(h)}, {}}; }

  bool is_points_to_kind() const { return kind == ChunkKind::PointsTo || kind == ChunkKind::GhostPointsTo; }
  bool is_ground() const;
  std::string str() const;

  friend bool operator==(const Chunk&, const Chunk&) = default;
  friend std::strong_ordering operator<=>(const Chunk& a, const Chunk& b);
};

/// Finitely supported map from chunks to positive coefficients; zero
/// entries are never stored.
class LogicalHeap {
 public:
  using Map = std::map<Chunk, Fraction>;

  LogicalHeap() = default;
  LogicalHeap(std::initializer_list<std::pair<const Chunk, Fraction>> cells);

  Fraction coefficient(const Chunk& c) const;
  void add(const Chunk& c, Fraction f);
  /// Sets the coefficient (zero removes the chunk).
  void set(const Chunk& c, Fraction f);

  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  Map::const_iterator begin() const { return cells_.begin(); }
  Map::const_iterator end() const { return cells_.end(); }

  /// One `coeff chunk` line per entry, in canonical chunk order.
  std::string dump() const;
  std::vector<std::string> dump_lines() const;

  friend bool operator==(const LogicalHeap&, const LogicalHeap&) = default;

 private:
  Map cells_;
};

struct InsufficientError : std::runtime_error {
  InsufficientError(Chunk c, Fraction have_, Fraction need_);
  Chunk chunk;
  Fraction have;
  Fraction need;
};

LogicalHeap heap_add(const LogicalHeap& a, const LogicalHeap& b);
/// Pointwise a >= b.
bool heap_geq(const LogicalHeap& a, const LogicalHeap& b);
/// Pointwise a - b; throws InsufficientError naming the first deficient chunk.
LogicalHeap heap_sub(const LogicalHeap& a, const LogicalHeap& b);
/// Weak consistency: no (ghost) points-to coefficient above 1 and no two
/// (ghost) points-to chunks for one address with different values.
bool wok(const LogicalHeap& h);

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Env = Bindings;

/// Evaluates a ghost expression to a ghost value.
GhostValue eval_ghost_expr(const GhostExpr& e, const Env& env);

}  // namespace cvf
