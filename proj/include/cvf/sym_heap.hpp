// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvf/fraction.hpp"
#include "cvf/heap.hpp"
#include "cvf/path_condition.hpp"

namespace cvf {

/// A chunk over symbolic terms. Besides the six ground chunk forms it has
/// an opaque predicate instance `P()` for a predicate value that is only
/// known as a symbol (the `forall P, Q` of a lemma type).
struct SymChunk {
  enum class Kind : std::uint8_t { PointsTo, GhostPointsTo, AtomicSpace, LemType, AtomicSpaces, Heap, PredInstance };
  Kind kind = Kind::PointsTo;
  std::vector<Term> args;
  std::string lem_type;

  static SymChunk from(const Chunk& c);
  static SymChunk pred_instance(Term pred) { return {Kind::PredInstance, {std::move(pred)}, {}}; }

  bool is_points_to_kind() const { return kind == Kind::PointsTo || kind == Kind::GhostPointsTo; }
  /// The ground chunk, when every argument is ground and the form is not
  /// an opaque instance.
  std::optional<Chunk> to_chunk() const;
  std::string str() const;

  friend bool operator==(const SymChunk&, const SymChunk&) = default;
  friend std::strong_ordering operator<=>(const SymChunk& a, const SymChunk& b);
};

/// Symbolic logical heap: symbolic chunks with positive coefficients.
class SymHeap {
 public:
  using Map = std::map<SymChunk, Fraction>;

  void add(const SymChunk& c, Fraction f);
  /// Removes `f` of `c`; the caller has checked availability.
  void remove(const SymChunk& c, Fraction f);
  Fraction coefficient(const SymChunk& c) const;

  bool empty() const { return cells_.empty(); }
  std::size_t size() const { return cells_.size(); }
  Map::const_iterator begin() const { return cells_.begin(); }
  Map::const_iterator end() const { return cells_.end(); }

  /// Rewrites every term through `pc` and merges chunks that became equal.
  void normalize(const PathCondition& pc);

  /// Sum of the coefficients of all lemma-type chunks.
  Fraction lemma_chunk_total() const;

  /// `coeff chunk` lines in canonical order.
  std::vector<std::string> dump_lines() const;

 private:
  Map cells_;
};

SymHeap sym_heap_add(const SymHeap& a, const SymHeap& b);

/// Replaces `hint#id` symbol spellings by the bare hint wherever a hint
/// names a single symbol across `lines`.
std::vector<std::string> readable_symbols(std::vector<std::string> lines);

}  // namespace cvf
