// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cvf/ast.hpp"
#include "cvf/heap.hpp"
#include "cvf/satisfaction.hpp"
#include "cvf/semantics.hpp"
#include "cvf/verifier.hpp"

namespace cvf {

/// Bounds of the existential searches below.
struct WitnessUniverse {
  std::int64_t addr_min = 0;
  std::int64_t addr_max = 4;
  std::int64_t value_min = -1;
  std::int64_t value_max = 4;
  std::vector<std::int64_t> denominators{1, 2};
  std::size_t max_bag = 2;
  std::size_t max_stock = 2;
  int unfold_depth = 16;

  /// Integers value_min..value_max plus unit.
  std::vector<GhostValue> values() const;
  /// Coefficients p/q <= 1 with q drawn from `denominators`.
  std::vector<Fraction> coefficients() const;
};

/// H |= a by enumerating every split of H at each `*` (coefficients on the
/// grid of all denominators occurring in H and the assertion). Existentials
/// range over `witnesses`, or over witness_universe() when it is empty.
SatResult split_satisfies(const LogicalHeap& h, const Assertion& a, const Env& env, const Program& program,
                          const std::vector<GhostValue>& witnesses = {}, int unfold_depth = 64);

/// Minimal logical heaps satisfying `a` with existentials drawn from
/// `u.values()`; every model of `a` within the universe is above one.
std::vector<LogicalHeap> minimal_models(const Assertion& a, const Env& env, const Program& program,
                                        const WitnessUniverse& u);

/// Every lemma-type chunk of `h` holds a lemma value of its type.
bool sok(const Program& program, const LogicalHeap& h);

enum class SearchResult : std::uint8_t { Yes, NoWithinUniverse };
std::string to_string(SearchResult r);

struct BagElement {
  GhostValue name;
  GhostValue inv;
  LogicalHeap owned;
};

struct ConsistencyWitness {
  PhysHeap heap;                     // `h` (given for consistent, found for ok_k)
  std::map<Term, GhostValue> ghost;  // `ĥ`
  std::vector<BagElement> bag;       // `A`
  std::vector<GhostValue> opened;    // `S` (ok_k only)
  LogicalHeap stock;                 // `Σ`, integer multiplicities
};

struct SearchOutcome {
  SearchResult result = SearchResult::NoWithinUniverse;
  std::optional<ConsistencyWitness> witness;
  bool yes() const { return result == SearchResult::Yes; }
};

/// h ~ H: some ghost heap, atomic spaces bag and consistent lemma stock
/// make h + ĥ + chunks(A) + Σ >= heap(A) + H.
SearchOutcome consistent(const Program& program, const PhysHeap& h, const LogicalHeap& H,
                         const WitnessUniverse& u = {});

/// H ok_k: some h, ĥ, A, S and consistent Σ with |Σ| <= k make
/// heap(h) + h + ĥ + chunks(A) + chunks(S) + atomic_spaces(S) + Σ >= heap(A) + H.
SearchOutcome ok_k(const Program& program, const LogicalHeap& H, std::size_t k, const WitnessUniverse& u = {});

/// The chunks `heap(h)` and `atomic_spaces({})` for a physical heap.
LogicalHeap boot_chunks(const PhysHeap& h);
/// `h` as a ground set of (address, value) pairs.
GhostValue phys_heap_value(const PhysHeap& h);

struct CrosscheckReport {
  std::string file;
  Verdict verdict = Verdict::Verified;
  std::optional<Diagnostic> failure;
  ExploreVerdict explore = ExploreVerdict::SafeUpToDepth;
  std::size_t states_visited = 0;

  /// Verified but some reachable configuration is not okay.
  bool fatal() const { return verdict == Verdict::Verified && explore == ExploreVerdict::NotOkay; }
  /// "(Verified, SafeUpToDepth)" etc.
  std::string quadrant() const;
  std::string text() const;
  std::string json() const;
};

struct CrosscheckOptions {
  std::size_t depth = 64;
  VerifyOptions verify;
  unsigned jobs = 1;
};

/// Verifies `p` and explores its erasure from the empty heap.
CrosscheckReport soundness_crosscheck(const Program& p, const CrosscheckOptions& options = {});

}  // namespace cvf
