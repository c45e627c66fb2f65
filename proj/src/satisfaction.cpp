// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/satisfaction.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace cvf {

std::string to_string(SatResult r) {
  switch (r) {
    case SatResult::Sat: return "sat";
    case SatResult::Unsat: return "unsat";
    case SatResult::DepthExceeded: return "depth-exceeded";
    case SatResult::WitnessUniverseExhausted: return "witness-universe-exhausted";
  }
  return "?";
}

namespace {

int or_rank(SatResult r) {
  switch (r) {
    case SatResult::Sat: return 3;
    case SatResult::DepthExceeded: return 2;
    case SatResult::WitnessUniverseExhausted: return 1;
    case SatResult::Unsat: return 0;
  }
  return 0;
}

int and_rank(SatResult r) {
  switch (r) {
    case SatResult::Unsat: return 3;
    case SatResult::DepthExceeded: return 2;
    case SatResult::WitnessUniverseExhausted: return 1;
    case SatResult::Sat: return 0;
  }
  return 0;
}

void collect_subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  switch (t.kind()) {
    case TermKind::Pair:
    case TermKind::Set:
    case TermKind::PredVal:
      for (const auto& a : t.args()) collect_subterms(a, out);
      break;
    default:
      break;
  }
}

void collect_expr_values(const GhostExpr& e, const Env& env, std::set<Term>& out) {
  if (e.kind == GhostExprKind::Value) collect_subterms(e.value, out);
  for (const auto& a : e.args) collect_expr_values(*a, env, out);
  try {
    collect_subterms(eval_ghost_expr(e, env), out);
  } catch (const EvalError&) {
    // Mentions a bound variable or is ill-typed.
  }
}

void collect_assertion_values(const Assertion& a, const Env& env, std::set<Term>& out) {
  for (const auto& e : a.exprs) collect_expr_values(*e, env, out);
  if (a.left) collect_assertion_values(*a.left, env, out);
  if (a.right) collect_assertion_values(*a.right, env, out);
}

// Leaf coefficients syntactically reachable from `a`, unfolding statically
// known predicate constructors once per path.
void leaf_coefficients(const Assertion& a, const Program& program, std::set<std::string>& path,
                       std::vector<Fraction>& out) {
  switch (a.kind) {
    case AssertionKind::PointsTo:
    case AssertionKind::GhostPointsTo:
    case AssertionKind::AtomicSpace:
      out.push_back(a.coeff);
      return;
    case AssertionKind::LemType:
    case AssertionKind::AtomicSpaces:
    case AssertionKind::HeapChunk:
      out.push_back(Fraction::one());
      return;
    case AssertionKind::PredApp: {
      const GhostExpr& e = *a.exprs[0];
      std::vector<const GhostDecl*> bodies;
      if (e.kind == GhostExprKind::PredCtorApp) {
        if (const auto* d = program.find(e.name)) bodies.push_back(d);
      } else {
        for (const auto& d : program.decls)
          if (d.kind == GhostDecl::Kind::PredCtor) bodies.push_back(&d);
      }
      for (const auto* d : bodies) {
        if (!path.insert(d->name).second) continue;
        leaf_coefficients(*d->body, program, path, out);
        path.erase(d->name);
      }
      return;
    }
    case AssertionKind::Exists:
      leaf_coefficients(*a.left, program, path, out);
      return;
    case AssertionKind::SepConj:
      leaf_coefficients(*a.left, program, path, out);
      leaf_coefficients(*a.right, program, path, out);
      return;
    case AssertionKind::Emp:
    case AssertionKind::PureEq:
      return;
  }
}

ChunkKind leaf_kind(AssertionKind k) {
  switch (k) {
    case AssertionKind::PointsTo: return ChunkKind::PointsTo;
    case AssertionKind::GhostPointsTo: return ChunkKind::GhostPointsTo;
    case AssertionKind::AtomicSpace: return ChunkKind::AtomicSpace;
    case AssertionKind::LemType: return ChunkKind::LemType;
    case AssertionKind::AtomicSpaces: return ChunkKind::AtomicSpaces;
    case AssertionKind::HeapChunk: return ChunkKind::Heap;
    default: throw std::logic_error("not a leaf assertion");
  }
}

bool is_leaf(AssertionKind k) {
  switch (k) {
    case AssertionKind::PointsTo:
    case AssertionKind::GhostPointsTo:
    case AssertionKind::AtomicSpace:
    case AssertionKind::LemType:
    case AssertionKind::AtomicSpaces:
    case AssertionKind::HeapChunk:
      return true;
    default:
      return false;
  }
}

class Checker {
 public:
  Checker(const Program& program, std::vector<GhostValue> universe)
      : program_(program), universe_(std::move(universe)) {}

  SatResult check(const LogicalHeap& h, const Assertion& a, const Env& env, int depth) const {
    switch (a.kind) {
      case AssertionKind::Emp:
        return SatResult::Sat;
      case AssertionKind::PureEq: {
        try {
          return eval_ghost_expr(*a.exprs[0], env) == eval_ghost_expr(*a.exprs[1], env) ? SatResult::Sat
                                                                                       : SatResult::Unsat;
        } catch (const EvalError&) {
          return SatResult::Unsat;
        }
      }
      case AssertionKind::PredApp:
        return check_pred(h, a, env, depth);
      case AssertionKind::Exists: {
        bool any_depth = false;
        for (const auto& w : universe_) {
          Env inner = env;
          inner.ghost[a.name] = w;
          SatResult r = check(h, *a.left, inner, depth);
          if (r == SatResult::Sat) return r;
          if (r == SatResult::DepthExceeded) any_depth = true;
        }
        return any_depth ? SatResult::DepthExceeded : SatResult::WitnessUniverseExhausted;
      }
      case AssertionKind::SepConj:
        return check_sep(h, a, env, depth);
      default:
        break;
    }
    Chunk c;
    try {
      c = eval_leaf_chunk(a, env);
    } catch (const EvalError&) {
      return SatResult::Unsat;
    }
    return h.coefficient(c) >= a.coeff ? SatResult::Sat : SatResult::Unsat;
  }

 private:
  SatResult check_pred(const LogicalHeap& h, const Assertion& a, const Env& env, int depth) const {
    Term p;
    try {
      p = eval_ghost_expr(*a.exprs[0], env);
    } catch (const EvalError&) {
      return SatResult::Unsat;
    }
    if (!p.is(TermKind::PredVal)) return SatResult::Unsat;
    const GhostDecl* d = program_.find(p.name());
    if (!d || d->kind != GhostDecl::Kind::PredCtor || d->params.size() != p.args().size())
      return SatResult::Unsat;
    if (depth <= 0) return SatResult::DepthExceeded;
    Env body_env;
    for (std::size_t i = 0; i < d->params.size(); ++i) body_env.ghost[d->params[i]] = p.args()[i];
    return check(h, *d->body, body_env, depth - 1);
  }

  // Whether a chunk could be needed by `a`: a positional match of the leaf
  // patterns, with unevaluable argument positions matching anything.
  bool may_use(const Chunk& c, const Assertion& a, const Env& env, int budget) const {
    switch (a.kind) {
      case AssertionKind::Emp:
      case AssertionKind::PureEq:
        return false;
      case AssertionKind::SepConj:
        return may_use(c, *a.left, env, budget) || may_use(c, *a.right, env, budget);
      case AssertionKind::Exists: {
        // An unbound name fails to evaluate, which reads as a wildcard.
        Env inner = env;
        inner.ghost.erase(a.name);
        return may_use(c, *a.left, inner, budget);
      }
      case AssertionKind::PredApp: {
        if (budget <= 0) return true;
        Term p;
        try {
          p = eval_ghost_expr(*a.exprs[0], env);
        } catch (const EvalError&) {
          return true;
        }
        if (!p.is(TermKind::PredVal)) return false;
        const GhostDecl* d = program_.find(p.name());
        if (!d || d->kind != GhostDecl::Kind::PredCtor || d->params.size() != p.args().size()) return false;
        Env body_env;
        for (std::size_t i = 0; i < d->params.size(); ++i) body_env.ghost[d->params[i]] = p.args()[i];
        return may_use(c, *d->body, body_env, budget - 1);
      }
      default:
        break;
    }
    if (c.kind != leaf_kind(a.kind)) return false;
    if (a.kind == AssertionKind::LemType) {
      if (c.lem_type != a.name || c.args.size() != a.exprs.size()) return false;
    }
    for (std::size_t i = 0; i < a.exprs.size() && i < c.args.size(); ++i) {
      try {
        if (!(eval_ghost_expr(*a.exprs[i], env) == c.args[i])) return false;
      } catch (const EvalError&) {
        // Unknown position.
      }
    }
    return true;
  }

  SatResult check_conjuncts(const LogicalHeap& h1, const LogicalHeap& h2, const Assertion& a, const Env& env,
                            int depth) const {
    SatResult l = check(h1, *a.left, env, depth);
    if (l == SatResult::Unsat) return l;
    return sat_and(l, check(h2, *a.right, env, depth));
  }

  SatResult check_sep(const LogicalHeap& h, const Assertion& a, const Env& env, int depth) const {
    // Chunks the left conjunct can use; all others go to the right.
    std::vector<std::pair<Chunk, Fraction>> relevant;
    for (const auto& [c, f] : h)
      if (may_use(c, *a.left, env, 16)) relevant.emplace_back(c, f);
    if (relevant.empty()) return check_conjuncts(LogicalHeap{}, h, a, env, depth);

    Fraction cap = Fraction::zero();
    for (const auto& r : relevant) cap = std::max(cap, r.second);
    auto sums = [&](const Assertion& side) {
      std::vector<Fraction> coeffs;
      std::set<std::string> path;
      leaf_coefficients(side, program_, path, coeffs);
      std::set<Fraction> out{Fraction::zero()};
      for (const auto& k : coeffs) {
        std::vector<Fraction> next;
        for (const auto& s : out)
          if (s + k <= cap) next.push_back(s + k);
        out.insert(next.begin(), next.end());
      }
      return out;
    };
    std::set<Fraction> left_sums = sums(*a.left);
    std::set<Fraction> right_sums = sums(*a.right);

    std::vector<std::vector<Fraction>> choices;
    for (const auto& [c, f] : relevant) {
      std::set<Fraction> cand{Fraction::zero(), f};
      for (const auto& s : left_sums)
        if (s <= f) cand.insert(s);
      for (const auto& s : right_sums)
        if (s <= f) cand.insert(f - s);
      choices.emplace_back(cand.begin(), cand.end());
    }

    SatResult acc = SatResult::Unsat;
    std::vector<std::size_t> idx(relevant.size(), 0);
    while (true) {
      LogicalHeap h1, h2 = h;
      for (std::size_t i = 0; i < relevant.size(); ++i) {
        const Fraction& give = choices[i][idx[i]];
        h1.add(relevant[i].first, give);
        h2.set(relevant[i].first, relevant[i].second - give);
      }
      SatResult r = check_conjuncts(h1, h2, a, env, depth);
      if (r == SatResult::Sat) return r;
      acc = sat_or(acc, r);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    return acc;
  }

  const Program& program_;
  std::vector<GhostValue> universe_;
};

}  // namespace

SatResult sat_or(SatResult a, SatResult b) { return or_rank(a) >= or_rank(b) ? a : b; }
SatResult sat_and(SatResult a, SatResult b) { return and_rank(a) >= and_rank(b) ? a : b; }

Chunk eval_leaf_chunk(const Assertion& leaf, const Env& env) {
  if (!is_leaf(leaf.kind)) throw std::logic_error("not a leaf assertion");
  std::vector<Term> args;
  for (const auto& e : leaf.exprs) args.push_back(eval_ghost_expr(*e, env));
  Chunk c;
  c.kind = leaf_kind(leaf.kind);
  c.args = std::move(args);
  if (leaf.kind == AssertionKind::LemType) c.lem_type = leaf.name;
  return c;
}

std::vector<GhostValue> witness_universe(const LogicalHeap& h, const Assertion& a, const Program& program,
                                         const Env& env) {
  std::set<Term> out;
  for (const auto& [c, f] : h)
    for (const auto& v : c.args) collect_subterms(v, out);
  collect_assertion_values(a, env, out);
  for (const auto& d : program.decls) {
    Env empty;
    if (d.body) collect_assertion_values(*d.body, empty, out);
  }
  for (const auto& [k, v] : env.prog) collect_subterms(v, out);
  for (const auto& [k, v] : env.ghost) collect_subterms(v, out);
  for (int z = -1; z <= 3; ++z) out.insert(Term::integer(z));
  out.insert(Term::unit());
  out.insert(Term::set({}));
  return {out.begin(), out.end()};
}

SatResult satisfies(const LogicalHeap& h, const Assertion& a, const Env& env, const Program& program,
                    const SatConfig& cfg) {
  if (cfg.unfold_depth_limit < 1) throw std::invalid_argument("unfold depth limit must be at least 1");
  auto universe = cfg.existential_witness_universe.empty() ? witness_universe(h, a, program, env)
                                                           : cfg.existential_witness_universe;
  return Checker(program, std::move(universe)).check(h, a, env, cfg.unfold_depth_limit);
}

}  // namespace cvf
