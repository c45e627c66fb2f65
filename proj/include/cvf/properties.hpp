// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

// Randomized and exhaustive property suites, shared by `cvf selftest`, the
// unit tests and the acceptance runner.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvf/ast.hpp"
#include "cvf/heap.hpp"
#include "cvf/oracle.hpp"

namespace cvf {

struct PropertyResult {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  std::string str() const;
};

/// heap_add commutativity, associativity and identity, heap_sub after
/// heap_add, and the partial-order laws of heap_geq.
std::vector<PropertyResult> heap_algebra_suite(std::size_t trials, std::uint64_t seed);

/// An assertion together with an environment closing it.
struct AssertionInstance {
  std::string label;
  AssertionPtr assertion;
  Env env;
};

/// Predicate bodies, lemma-type contracts and par preconditions of
/// `program`, closed with small ground values.
std::vector<AssertionInstance> assertion_instances(const Program& program);

/// Ground lemma values built by the produce_lem_ptr_chunk commands of
/// `program`, with `x`, `g1`, `g2`, ... bound to 0, 1, 2, ...
struct GroundLemma {
  Term value;
  std::string type;
  std::vector<Term> type_args;
  SourceLoc loc;
};
std::vector<GroundLemma> ground_lemmas(const Program& program);

/// `satisfies` versus `split_satisfies` on every heap of at most
/// `max_chunks` chunks drawn from the chunks each instance can mention.
PropertyResult satisfaction_agreement(const Program& program, const std::vector<AssertionInstance>& instances,
                                      std::size_t max_chunks = 3);

/// H |= a implies H + E |= a for random models H and extensions E.
PropertyResult upward_closure(const Program& program, const std::vector<AssertionInstance>& instances,
                              std::size_t trials, std::uint64_t seed);

/// consistent(h, H) iff ok_k(H + boot_chunks(h)) for some k <= 2, on random
/// pairs. `yes_count` receives the number of consistent pairs.
PropertyResult consistency_equivalence(const Program& program, std::size_t trials, std::uint64_t seed,
                                       std::size_t* yes_count = nullptr);

/// sok(H) implies sok(H - part of a lemma-type chunk).
PropertyResult sok_monotone(const Program& program, std::size_t trials, std::uint64_t seed);

}  // namespace cvf
