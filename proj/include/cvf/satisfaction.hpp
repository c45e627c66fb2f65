// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "cvf/ast.hpp"
#include "cvf/heap.hpp"

namespace cvf {

enum class SatResult : std::uint8_t { Sat, Unsat, DepthExceeded, WitnessUniverseExhausted };

std::string to_string(SatResult r);

struct SatConfig {
  int unfold_depth_limit = 64;
  /// Candidates for existential witnesses; empty means "derive from the
  /// heap and the assertion" (see witness_universe).
  std::vector<GhostValue> existential_witness_universe;
};

/// Every value occurring in `h` (with subterms), every literal of `a`, of the
/// declaration bodies and of `env`, plus -1..3, unit and the empty set.
std::vector<GhostValue> witness_universe(const LogicalHeap& h, const Assertion& a, const Program& program,
                                         const Env& env);

/// Evaluates the chunk denoted by a leaf assertion (PointsTo, GhostPointsTo,
/// AtomicSpace, LemType, AtomicSpaces, HeapChunk) under `env`.
Chunk eval_leaf_chunk(const Assertion& leaf, const Env& env);

/// H |= a. Existentials range over the configured universe; splits of `*`
/// range over sums of leaf coefficients required by either conjunct.
SatResult satisfies(const LogicalHeap& h, const Assertion& a, const Env& env, const Program& program,
                    const SatConfig& cfg = {});

/// Result combination shared with the brute-force checker: disjunction
/// (Sat dominates, then DepthExceeded, WitnessUniverseExhausted, Unsat) and
/// conjunction (Unsat dominates, then DepthExceeded, then exhausted).
SatResult sat_or(SatResult a, SatResult b);
SatResult sat_and(SatResult a, SatResult b);

}  // namespace cvf
