// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cvf/ast.hpp"

namespace cvf {

using PhysHeap = std::map<std::int64_t, std::int64_t>;

struct Configuration {
  PhysHeap heap;
  CommandPtr cmd;
};

/// One successor together with the thread that moved and the rule used.
struct Step {
  Configuration next;
  std::string thread;  // "root", "root.L", "root.R.L", ...
  std::string rule;    // cons, faa, deref, assert, let, par
};

/// All successors of `cfg`. Allocation picks the least free address, so
/// only parallel composition introduces more than one successor; a stuck
/// command has none.
std::vector<Step> step(const Configuration& cfg);

std::vector<CommandPtr> thrds(const CommandPtr& c);
bool finished(const Command& c);
bool reducible(const PhysHeap& h, const CommandPtr& c);
/// Every thread is finished or reducible.
bool okay(const Configuration& cfg);

/// `{0 -> 2, 1 -> 0}`.
std::string format_heap(const PhysHeap& h);
/// `<thread-path> : <rule-name> : <heap-after>`.
std::string format_step(const Step& s);

enum class ExploreVerdict : std::uint8_t { SafeUpToDepth, NotOkay, ExhaustedBudget };
std::string to_string(ExploreVerdict v);

struct ExploreOptions {
  std::size_t max_steps = 64;
  std::size_t state_budget = 1'000'000;
  unsigned jobs = 1;
};

struct ExploreReport {
  ExploreVerdict verdict = ExploreVerdict::SafeUpToDepth;
  std::size_t states_visited = 0;
  std::size_t max_depth_reached = 0;
  /// Steps from the initial configuration to the first configuration found
  /// not okay (shortest, since the search is breadth-first).
  std::vector<Step> witness;
  Configuration stuck;
  /// Finished configurations reached, in discovery order.
  std::vector<Configuration> terminals;
};

ExploreReport explore(const Configuration& init, const ExploreOptions& options = {});

/// Number of distinct maximal step sequences from `init` (within
/// `max_steps`).
std::size_t count_schedules(const Configuration& init, std::size_t max_steps = 64);

enum class RunStatus : std::uint8_t { Finished, Stuck, StepLimit };
std::string to_string(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::Finished;
  Configuration final;
  std::vector<Step> trace;
};

/// Follows the leftmost schedule: always the first successor.
RunResult run(const Configuration& init, std::size_t max_steps = 1'000'000);

}  // namespace cvf
