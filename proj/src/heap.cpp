// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/heap.hpp"

#include <algorithm>
#include <sstream>

namespace cvf {

bool Chunk::is_ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
}

std::string Chunk::str() const {
  switch (kind) {
    case ChunkKind::PointsTo:
      return args[0].str() + " |-> " + args[1].str();
    case ChunkKind::GhostPointsTo:
      return args[0].str() + " |->g " + args[1].str();
    case ChunkKind::AtomicSpace:
      return "atomic_space(" + args[0].str() + ", " + args[1].str() + ")";
    case ChunkKind::LemType: {
      std::string out = args[0].str() + " : " + lem_type + "(";
      for (std::size_t i = 1; i < args.size(); ++i) out += (i > 1 ? ", " : "") + args[i].str();
      return out + ")";
    }
    case ChunkKind::AtomicSpaces:
      return "atomic_spaces(" + args[0].str() + ")";
    case ChunkKind::Heap:
      return "heap(" + args[0].str() + ")";
  }
  return {};
}

std::strong_ordering operator<=>(const Chunk& a, const Chunk& b) {
  if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) return c;
  if (auto c = a.lem_type.compare(b.lem_type); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::lexicographical_compare_three_way(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

LogicalHeap::LogicalHeap(std::initializer_list<std::pair<const Chunk, Fraction>> cells) {
  for (const auto& [c, f] : cells) add(c, f);
}

Fraction LogicalHeap::coefficient(const Chunk& c) const {
  auto it = cells_.find(c);
  return it == cells_.end() ? Fraction::zero() : it->second;
}

void LogicalHeap::add(const Chunk& c, Fraction f) {
  if (f.is_zero()) return;
  cells_[c] += f;
}

void LogicalHeap::set(const Chunk& c, Fraction f) {
  if (f.is_zero())
    cells_.erase(c);
  else
    cells_[c] = f;
}

std::vector<std::string> LogicalHeap::dump_lines() const {
  std::vector<std::string> lines;
  for (const auto& [c, f] : cells_) lines.push_back(f.str() + " " + c.str());
  return lines;
}

std::string LogicalHeap::dump() const {
  std::string out;
  for (const auto& line : dump_lines()) out += line + "\n";
  return out;
}

InsufficientError::InsufficientError(Chunk c, Fraction have_, Fraction need_)
    : std::runtime_error("insufficient coefficient for " + c.str() + ": have " + have_.str() + ", need " +
                         need_.str()),
      chunk(std::move(c)),
      have(have_),
      need(need_) {}

LogicalHeap heap_add(const LogicalHeap& a, const LogicalHeap& b) {
  LogicalHeap out = a;
  for (const auto& [c, f] : b) out.add(c, f);
  return out;
}

bool heap_geq(const LogicalHeap& a, const LogicalHeap& b) {
  return std::all_of(b.begin(), b.end(), [&a](const auto& cell) { return a.coefficient(cell.first) >= cell.second; });
}

LogicalHeap heap_sub(const LogicalHeap& a, const LogicalHeap& b) {
  LogicalHeap out = a;
  for (const auto& [c, f] : b) {
    Fraction have = a.coefficient(c);
    if (have < f) throw InsufficientError(c, have, f);
    out.set(c, have - f);
  }
  return out;
}

bool wok(const LogicalHeap& h) {
  // Chunks are ordered by kind, then address, so equal addresses are adjacent.
  const Chunk* prev = nullptr;
  for (const auto& [c, f] : h) {
    if (!c.is_points_to_kind()) {
      prev = nullptr;
      continue;
    }
    if (f > Fraction::one()) return false;
    if (prev && prev->kind == c.kind && prev->args[0] == c.args[0]) return false;
    prev = &c;
  }
  return true;
}

GhostValue eval_ghost_expr(const GhostExpr& e, const Env& env) {
  auto sub = [&env](const GhostExprPtr& x) { return eval_ghost_expr(*x, env); };
  switch (e.kind) {
    case GhostExprKind::Value:
      return e.value;
    case GhostExprKind::ProgVar: {
      auto it = env.prog.find(e.name);
      if (it == env.prog.end()) throw EvalError("unbound program variable " + e.name);
      return it->second;
    }
    case GhostExprKind::GhostVar: {
      auto it = env.ghost.find(e.name);
      if (it == env.ghost.end()) throw EvalError("unbound ghost variable " + e.name);
      return it->second;
    }
    case GhostExprKind::Add: {
      auto a = sub(e.args[0]), b = sub(e.args[1]);
      if (!a.is_int() || !b.is_int()) throw EvalError("'+' applied to non-integers " + a.str() + ", " + b.str());
      return Term::add(a, b);
    }
    case GhostExprKind::PredCtorApp: {
      std::vector<Term> args;
      for (const auto& a : e.args) args.push_back(sub(a));
      return Term::pred(e.name, std::move(args));
    }
    case GhostExprKind::Pair:
      return Term::pair(sub(e.args[0]), sub(e.args[1]));
    case GhostExprKind::Unit:
      return Term::unit();
    case GhostExprKind::EmptySet:
      return Term::set({});
    case GhostExprKind::Singleton:
      return Term::set({sub(e.args[0])});
    case GhostExprKind::Union:
    case GhostExprKind::Diff: {
      auto a = sub(e.args[0]), b = sub(e.args[1]);
      if (!a.is_set() || !b.is_set()) throw EvalError("set operation applied to non-sets " + a.str() + ", " + b.str());
      return e.kind == GhostExprKind::Union ? Term::set_union(a, b) : Term::set_diff(a, b);
    }
  }
  throw EvalError("unknown ghost expression");
}

}  // namespace cvf
