// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/semantics.hpp"

#include <algorithm>
#include <functional>
#include <thread>
#include <unordered_map>

#include "cvf/printer.hpp"
#include "cvf/transform.hpp"

namespace cvf {

namespace {

std::int64_t free_address(const PhysHeap& h) {
  std::int64_t a = 0;
  for (const auto& [addr, v] : h) {
    if (addr != a) break;
    ++a;
  }
  return a;
}

void steps_of(const PhysHeap& h, const CommandPtr& c, const std::string& path, std::vector<Step>& out) {
  auto emit = [&](PhysHeap next, CommandPtr cmd, const char* rule) {
    out.push_back({{std::move(next), std::move(cmd)}, path, rule});
  };
  auto value = [](std::int64_t z) { return Command::make_expr(Expr::lit(z)); };
  switch (c->kind) {
    case CommandKind::Expr:
      return;
    case CommandKind::Instr: {
      const Instr& i = c->instr;
      switch (i.kind) {
        case InstrKind::Cons: {
          if (!i.a.is_value()) return;
          std::int64_t l = free_address(h);
          PhysHeap next = h;
          next[l] = i.a.value;
          emit(std::move(next), value(l), "cons");
          return;
        }
        case InstrKind::Faa: {
          if (!i.a.is_value() || !i.b.is_value()) return;
          auto it = h.find(i.a.value);
          if (it == h.end()) return;
          PhysHeap next = h;
          next[i.a.value] = it->second + i.b.value;
          emit(std::move(next), value(it->second), "faa");
          return;
        }
        case InstrKind::Deref: {
          if (!i.a.is_value()) return;
          auto it = h.find(i.a.value);
          if (it == h.end()) return;
          emit(h, value(it->second), "deref");
          return;
        }
        case InstrKind::AssertEq:
          if (i.a.is_value() && i.b.is_value() && i.a.value == i.b.value) emit(h, value(0), "assert");
          return;
      }
      return;
    }
    case CommandKind::Let: {
      if (c->first->is_value()) {
        emit(h, subst(c->second, c->var, c->first->expr.value), "let");
        return;
      }
      std::vector<Step> inner;
      steps_of(h, c->first, path, inner);
      for (auto& s : inner)
        out.push_back({{std::move(s.next.heap), Command::make_let(c->var, s.next.cmd, c->second, c->loc)},
                       std::move(s.thread),
                       std::move(s.rule)});
      return;
    }
    case CommandKind::Par: {
      if (c->first->is_value() && c->second->is_value()) {
        emit(h, value(0), "par");
        return;
      }
      std::vector<Step> left, right;
      steps_of(h, c->first, path + ".L", left);
      steps_of(h, c->second, path + ".R", right);
      for (auto& s : left)
        out.push_back({{std::move(s.next.heap), Command::make_par(s.next.cmd, c->second, c->loc)},
                       std::move(s.thread),
                       std::move(s.rule)});
      for (auto& s : right)
        out.push_back({{std::move(s.next.heap), Command::make_par(c->first, s.next.cmd, c->loc)},
                       std::move(s.thread),
                       std::move(s.rule)});
      return;
    }
  }
}

std::string state_key(const Configuration& cfg) { return format_heap(cfg.heap) + "|" + pretty(*cfg.cmd); }

}  // namespace

std::vector<Step> step(const Configuration& cfg) {
  std::vector<Step> out;
  steps_of(cfg.heap, cfg.cmd, "root", out);
  return out;
}

std::vector<CommandPtr> thrds(const CommandPtr& c) {
  if (c->kind == CommandKind::Let) return thrds(c->first);
  if (c->kind == CommandKind::Par) {
    auto out = thrds(c->first);
    auto right = thrds(c->second);
    out.insert(out.end(), right.begin(), right.end());
    return out;
  }
  return {c};
}

bool finished(const Command& c) { return c.is_value(); }

bool reducible(const PhysHeap& h, const CommandPtr& c) { return !step({h, c}).empty(); }

bool okay(const Configuration& cfg) {
  for (const auto& t : thrds(cfg.cmd))
    if (!finished(*t) && !reducible(cfg.heap, t)) return false;
  return true;
}

std::string format_heap(const PhysHeap& h) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, v] : h) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(a) + " -> " + std::to_string(v);
  }
  return out + "}";
}

std::string format_step(const Step& s) { return s.thread + " : " + s.rule + " : " + format_heap(s.next.heap); }

std::string to_string(ExploreVerdict v) {
  switch (v) {
    case ExploreVerdict::SafeUpToDepth: return "SafeUpToDepth";
    case ExploreVerdict::NotOkay: return "NotOkay";
    case ExploreVerdict::ExhaustedBudget: return "ExhaustedBudget";
  }
  return "?";
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Finished: return "finished";
    case RunStatus::Stuck: return "stuck";
    case RunStatus::StepLimit: return "step-limit";
  }
  return "?";
}

ExploreReport explore(const Configuration& init, const ExploreOptions& options) {
  struct Node {
    Configuration cfg;
    std::size_t parent;
    std::string thread;
    std::string rule;
  };
  constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> visited;
  ExploreReport report;

  auto witness_to = [&](std::size_t idx) {
    std::vector<Step> trace;
    for (std::size_t i = idx; nodes[i].parent != kNoParent; i = nodes[i].parent)
      trace.push_back({nodes[i].cfg, nodes[i].thread, nodes[i].rule});
    std::reverse(trace.begin(), trace.end());
    return trace;
  };

  nodes.push_back({init, kNoParent, {}, {}});
  visited.emplace(state_key(init), 0);
  std::vector<std::size_t> frontier{0};
  unsigned jobs = std::max(1u, options.jobs);

  for (std::size_t depth = 0;; ++depth) {
    // Check the frontier, in discovery order.
    for (std::size_t idx : frontier) {
      const Configuration& cfg = nodes[idx].cfg;
      if (!okay(cfg)) {
        report.verdict = ExploreVerdict::NotOkay;
        report.witness = witness_to(idx);
        report.stuck = cfg;
        report.states_visited = nodes.size();
        report.max_depth_reached = depth;
        return report;
      }
      if (finished(*cfg.cmd)) report.terminals.push_back(cfg);
    }
    report.max_depth_reached = depth;
    if (depth == options.max_steps || frontier.empty()) break;

    // Expand; successor lists are computed independently and merged in
    // frontier order so the result does not depend on the job count.
    std::vector<std::vector<Step>> succ(frontier.size());
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) succ[i] = step(nodes[frontier[i]].cfg);
    };
    if (jobs == 1 || frontier.size() < 2) {
      work(0, frontier.size());
    } else {
      std::vector<std::thread> pool;
      std::size_t n = std::min<std::size_t>(jobs, frontier.size());
      std::size_t chunk = (frontier.size() + n - 1) / n;
      for (std::size_t t = 0; t < n; ++t) {
        std::size_t b = t * chunk, e = std::min(frontier.size(), b + chunk);
        if (b < e) pool.emplace_back(work, b, e);
      }
      for (auto& th : pool) th.join();
    }

    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (auto& s : succ[i]) {
        std::string key = state_key(s.next);
        if (visited.count(key)) continue;
        if (nodes.size() >= options.state_budget) {
          report.verdict = ExploreVerdict::ExhaustedBudget;
          report.states_visited = nodes.size();
          return report;
        }
        visited.emplace(std::move(key), nodes.size());
        next.push_back(nodes.size());
        nodes.push_back({std::move(s.next), frontier[i], std::move(s.thread), std::move(s.rule)});
      }
    }
    frontier = std::move(next);
  }
  report.states_visited = nodes.size();
  return report;
}

std::size_t count_schedules(const Configuration& init, std::size_t max_steps) {
  std::unordered_map<std::string, std::size_t> memo;
  std::function<std::size_t(const Configuration&, std::size_t)> count = [&](const Configuration& cfg,
                                                                            std::size_t budget) -> std::size_t {
    std::string key = std::to_string(budget) + "#" + state_key(cfg);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto succ = step(cfg);
    std::size_t n = 0;
    if (succ.empty() || budget == 0) {
      n = 1;
    } else {
      for (const auto& s : succ) n += count(s.next, budget - 1);
    }
    memo.emplace(std::move(key), n);
    return n;
  };
  return count(init, max_steps);
}

RunResult run(const Configuration& init, std::size_t max_steps) {
  RunResult r;
  r.final = init;
  for (std::size_t i = 0;; ++i) {
    if (finished(*r.final.cmd)) {
      r.status = RunStatus::Finished;
      return r;
    }
    if (i == max_steps) {
      r.status = RunStatus::StepLimit;
      return r;
    }
    auto succ = step(r.final);
    if (succ.empty()) {
      r.status = RunStatus::Stuck;
      return r;
    }
    r.final = succ.front().next;
    r.trace.push_back(std::move(succ.front()));
  }
}

}  // namespace cvf
