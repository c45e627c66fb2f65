// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/oracle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include <json.hpp>

#include "cvf/transform.hpp"

namespace cvf {

namespace {

using AK = AssertionKind;

bool is_leaf(AK k) {
  return k == AK::PointsTo || k == AK::GhostPointsTo || k == AK::AtomicSpace || k == AK::LemType ||
         k == AK::AtomicSpaces || k == AK::HeapChunk;
}

void leaf_denominators(const Assertion& a, std::int64_t& d) {
  if (is_leaf(a.kind)) d = std::lcm(d, a.coeff.den());
  if (a.left) leaf_denominators(*a.left, d);
  if (a.right) leaf_denominators(*a.right, d);
}

/// Reference checker: same result lattice as `satisfies`, but `*` tries
/// every split of every chunk on a fixed grid.
class SplitChecker {
 public:
  SplitChecker(const Program& program, std::vector<GhostValue> universe, std::int64_t grid)
      : program_(program), universe_(std::move(universe)), grid_(grid) {}

  SatResult check(const LogicalHeap& h, const Assertion& a, const Env& env, int depth) const {
    switch (a.kind) {
      case AK::Emp: return SatResult::Sat;
      case AK::PureEq:
        try {
          return eval_ghost_expr(*a.exprs[0], env) == eval_ghost_expr(*a.exprs[1], env) ? SatResult::Sat
                                                                                       : SatResult::Unsat;
        } catch (const EvalError&) {
          return SatResult::Unsat;
        }
      case AK::PredApp: {
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
        Env inner;
        for (std::size_t i = 0; i < d->params.size(); ++i) inner.ghost[d->params[i]] = p.args()[i];
        return check(h, *d->body, inner, depth - 1);
      }
      case AK::Exists: {
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
      case AK::SepConj: return check_sep(h, a, env, depth);
      default: break;
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
  SatResult check_sep(const LogicalHeap& h, const Assertion& a, const Env& env, int depth) const {
    std::vector<std::pair<Chunk, Fraction>> cells(h.begin(), h.end());
    std::vector<std::int64_t> steps;
    for (const auto& [c, f] : cells) steps.push_back(f.num() * (grid_ / f.den()));
    std::vector<std::int64_t> idx(cells.size(), 0);
    SatResult acc = SatResult::Unsat;
    for (;;) {
      LogicalHeap h1, h2;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        Fraction give(idx[i], grid_);
        h1.add(cells[i].first, give);
        h2.add(cells[i].first, cells[i].second - give);
      }
      SatResult l = check(h1, *a.left, env, depth);
      SatResult r = l == SatResult::Unsat ? l : sat_and(l, check(h2, *a.right, env, depth));
      if (r == SatResult::Sat) return r;
      acc = sat_or(acc, r);
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] > steps[k]) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    return acc;
  }

  const Program& program_;
  std::vector<GhostValue> universe_;
  std::int64_t grid_;
};

std::string heap_key(const LogicalHeap& h) { return h.dump(); }

void models_rec(const Assertion& a, const Env& env, const Program& program, const WitnessUniverse& u, int depth,
                std::vector<LogicalHeap>& out) {
  switch (a.kind) {
    case AK::Emp: out.emplace_back(); return;
    case AK::PureEq:
      try {
        if (eval_ghost_expr(*a.exprs[0], env) == eval_ghost_expr(*a.exprs[1], env)) out.emplace_back();
      } catch (const EvalError&) {
      }
      return;
    case AK::PredApp: {
      Term p;
      try {
        p = eval_ghost_expr(*a.exprs[0], env);
      } catch (const EvalError&) {
        return;
      }
      if (!p.is(TermKind::PredVal) || depth <= 0) return;
      const GhostDecl* d = program.find(p.name());
      if (!d || d->kind != GhostDecl::Kind::PredCtor || d->params.size() != p.args().size()) return;
      Env inner;
      for (std::size_t i = 0; i < d->params.size(); ++i) inner.ghost[d->params[i]] = p.args()[i];
      models_rec(*d->body, inner, program, u, depth - 1, out);
      return;
    }
    case AK::Exists:
      for (const auto& w : u.values()) {
        Env inner = env;
        inner.ghost[a.name] = w;
        models_rec(*a.left, inner, program, u, depth, out);
      }
      return;
    case AK::SepConj: {
      std::vector<LogicalHeap> l, r;
      models_rec(*a.left, env, program, u, depth, l);
      if (l.empty()) return;
      models_rec(*a.right, env, program, u, depth, r);
      for (const auto& x : l)
        for (const auto& y : r) out.push_back(heap_add(x, y));
      return;
    }
    default: break;
  }
  try {
    LogicalHeap h;
    h.add(eval_leaf_chunk(a, env), a.coeff);
    out.push_back(std::move(h));
  } catch (const EvalError&) {
  }
}

std::optional<PhysHeap> decode_heap(const Term& t) {
  if (!t.is_set()) return std::nullopt;
  PhysHeap h;
  for (const auto& cell : t.args()) {
    if (!cell.is(TermKind::Pair) || !cell.args()[0].is_int() || !cell.args()[1].is_int()) return std::nullopt;
    if (!h.emplace(cell.args()[0].int_value(), cell.args()[1].int_value()).second) return std::nullopt;
  }
  return h;
}

using Pair = std::pair<Term, Term>;

/// Search shared by `consistent` (`given` set, nothing else on the left)
/// and `ok_k` (heap(h), chunks(S) and atomic_spaces(S) also on the left).
class Search {
 public:
  Search(const Program& program, const WitnessUniverse& u) : program_(program), u_(u) {}

  SearchOutcome run(const LogicalHeap& H, const PhysHeap* given, std::size_t stock_bound) {
    std::vector<Pair> pool;
    auto add_pairs = [&](const LogicalHeap& h) {
      for (const auto& [c, f] : h)
        if (c.kind == ChunkKind::AtomicSpace) {
          Pair p{c.args[0], c.args[1]};
          if (std::find(pool.begin(), pool.end(), p) == pool.end()) pool.push_back(p);
        }
    };
    add_pairs(H);
    for (std::size_t i = 0; i < pool.size() && i < 8; ++i)
      for (const auto& m : models(pool[i].second)) add_pairs(m);

    for (std::size_t n = 0; n <= u_.max_bag; ++n) {
      std::vector<std::size_t> pick(n, 0);
      if (n > 0 && pool.empty()) break;
      for (;;) {
        if (auto w = try_bag(H, pool, pick, given, stock_bound)) return {SearchResult::Yes, std::move(w)};
        // Next multiset: non-decreasing index sequences.
        std::size_t k = n;
        while (k > 0 && pick[k - 1] + 1 == pool.size()) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t j = k; j < n; ++j) pick[j] = pick[k - 1];
      }
    }
    return {};
  }

 private:
  const std::vector<LogicalHeap>& models(const Term& inv) {
    auto it = models_.find(inv);
    if (it != models_.end()) return it->second;
    std::vector<LogicalHeap> all;
    if (inv.is(TermKind::PredVal))
      models_rec(*Assertion::make_pred_app(GhostExpr::make_value(inv)), {}, program_, u_, u_.unfold_depth, all);
    std::vector<LogicalHeap> unique;
    std::set<std::string> seen;
    for (auto& m : all)
      if (seen.insert(heap_key(m)).second) unique.push_back(std::move(m));
    return models_.emplace(inv, std::move(unique)).first->second;
  }

  std::optional<ConsistencyWitness> try_bag(const LogicalHeap& H, const std::vector<Pair>& pool,
                                            const std::vector<std::size_t>& pick, const PhysHeap* given,
                                            std::size_t stock_bound) {
    std::vector<const std::vector<LogicalHeap>*> choices;
    for (auto i : pick) {
      choices.push_back(&models(pool[i].second));
      if (choices.back()->empty()) return std::nullopt;
    }
    std::vector<std::size_t> idx(pick.size(), 0);
    for (;;) {
      LogicalHeap D = H;
      std::map<Pair, std::size_t> supply;
      for (std::size_t j = 0; j < pick.size(); ++j) {
        D = heap_add(D, (*choices[j])[idx[j]]);
        ++supply[pool[pick[j]]];
      }
      if (auto w = cover(D, supply, given, stock_bound)) {
        for (std::size_t j = 0; j < pick.size(); ++j) {
          BagElement e{pool[pick[j]].first, pool[pick[j]].second, (*choices[j])[idx[j]]};
          auto inv = Assertion::make_pred_app(GhostExpr::make_value(e.inv));
          if (satisfies(e.owned, *inv, {}, program_) != SatResult::Sat)
            throw std::logic_error("atomic spaces bag element does not satisfy its invariant");
          w->bag.push_back(std::move(e));
        }
        return w;
      }
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == choices[k]->size()) idx[k++] = 0;
      if (k == idx.size()) return std::nullopt;
    }
  }

  bool well_typed(const Chunk& c) {
    auto it = typed_.find(c);
    if (it != typed_.end()) return it->second;
    std::vector<Term> targs(c.args.begin() + 1, c.args.end());
    bool ok = check_lemma_value(program_, c.args[0], c.lem_type, targs);
    typed_.emplace(c, ok);
    return ok;
  }

  std::optional<ConsistencyWitness> cover(const LogicalHeap& D, const std::map<Pair, std::size_t>& supply,
                                          const PhysHeap* given, std::size_t stock_bound) {
    const bool self = given == nullptr;
    ConsistencyWitness w;
    std::optional<Term> heap_value, spaces_value;
    Fraction heap_total, spaces_total;
    std::map<std::int64_t, std::pair<std::int64_t, Fraction>> cells;
    std::map<Term, std::pair<Term, Fraction>> ghost_cells;
    std::map<Pair, Fraction> space_demand;
    std::size_t stock = 0;

    for (const auto& [c, f] : D) {
      switch (c.kind) {
        case ChunkKind::Heap:
        case ChunkKind::AtomicSpaces: {
          if (!self) return std::nullopt;
          auto& value = c.kind == ChunkKind::Heap ? heap_value : spaces_value;
          auto& total = c.kind == ChunkKind::Heap ? heap_total : spaces_total;
          if (value && !(*value == c.args[0])) return std::nullopt;
          value = c.args[0];
          total += f;
          if (Fraction::one() < total) return std::nullopt;
          break;
        }
        case ChunkKind::PointsTo: {
          if (!c.args[0].is_int() || !c.args[1].is_int() || Fraction::one() < f) return std::nullopt;
          auto [it, fresh] = cells.emplace(c.args[0].int_value(), std::make_pair(c.args[1].int_value(), f));
          if (!fresh) return std::nullopt;  // two values for one address, or a total above 1
          break;
        }
        case ChunkKind::GhostPointsTo: {
          if (!c.args[0].is_int() || Fraction::one() < f) return std::nullopt;
          if (!ghost_cells.emplace(c.args[0], std::make_pair(c.args[1], f)).second) return std::nullopt;
          break;
        }
        case ChunkKind::AtomicSpace: space_demand[{c.args[0], c.args[1]}] += f; break;
        case ChunkKind::LemType: {
          auto copies = static_cast<std::size_t>((f.num() + f.den() - 1) / f.den());
          stock += copies;
          if (stock > stock_bound || !well_typed(c)) return std::nullopt;
          w.stock.add(c, Fraction(static_cast<std::int64_t>(copies)));
          break;
        }
      }
    }

    // Physical cells.
    if (given) {
      w.heap = *given;
    } else if (heap_value) {
      auto h = decode_heap(*heap_value);
      if (!h) return std::nullopt;
      w.heap = *h;
    } else {
      for (const auto& [a, vf] : cells) w.heap[a] = vf.first;
    }
    for (const auto& [a, vf] : cells) {
      auto it = w.heap.find(a);
      if (it == w.heap.end() || it->second != vf.first) return std::nullopt;
    }
    for (const auto& [a, vf] : ghost_cells) w.ghost[a] = vf.first;

    // Opened atomic spaces.
    std::set<Pair> opened;
    if (spaces_value) {
      if (!spaces_value->is_set()) return std::nullopt;
      for (const auto& e : spaces_value->args()) {
        if (!e.is(TermKind::Pair)) return std::nullopt;
        opened.insert({e.args()[0], e.args()[1]});
      }
    }
    for (const auto& [p, need] : space_demand) {
      auto it = supply.find(p);
      std::int64_t have = it == supply.end() ? 0 : static_cast<std::int64_t>(it->second);
      if (self && !spaces_value && Fraction(have) < need) opened.insert(p);
      if (opened.count(p)) ++have;
      if (Fraction(have) < need) return std::nullopt;
    }
    if (self)
      for (const auto& p : opened) w.opened.push_back(Term::pair(p.first, p.second));
    return w;
  }

  const Program& program_;
  const WitnessUniverse& u_;
  std::map<Term, std::vector<LogicalHeap>> models_;
  std::map<Chunk, bool> typed_;
};

}  // namespace

std::vector<GhostValue> WitnessUniverse::values() const {
  std::vector<GhostValue> out;
  for (auto z = value_min; z <= value_max; ++z) out.push_back(Term::integer(z));
  out.push_back(Term::unit());
  return out;
}

std::vector<Fraction> WitnessUniverse::coefficients() const {
  std::set<Fraction> out;
  for (auto q : denominators)
    for (std::int64_t p = 1; p <= q; ++p) out.insert(Fraction(p, q));
  return {out.begin(), out.end()};
}

SatResult split_satisfies(const LogicalHeap& h, const Assertion& a, const Env& env, const Program& program,
                          const std::vector<GhostValue>& witnesses, int unfold_depth) {
  std::int64_t grid = 1;
  for (const auto& [c, f] : h) grid = std::lcm(grid, f.den());
  leaf_denominators(a, grid);
  for (const auto& d : program.decls)
    if (d.body) leaf_denominators(*d.body, grid);
  auto universe = witnesses.empty() ? witness_universe(h, a, program, env) : witnesses;
  return SplitChecker(program, std::move(universe), grid).check(h, a, env, unfold_depth);
}

std::vector<LogicalHeap> minimal_models(const Assertion& a, const Env& env, const Program& program,
                                        const WitnessUniverse& u) {
  std::vector<LogicalHeap> all, out;
  models_rec(a, env, program, u, u.unfold_depth, all);
  std::set<std::string> seen;
  for (auto& m : all)
    if (seen.insert(heap_key(m)).second) out.push_back(std::move(m));
  return out;
}

bool sok(const Program& program, const LogicalHeap& h) {
  for (const auto& [c, f] : h) {
    if (c.kind != ChunkKind::LemType || f.is_zero()) continue;
    std::vector<Term> targs(c.args.begin() + 1, c.args.end());
    if (!check_lemma_value(program, c.args[0], c.lem_type, targs)) return false;
  }
  return true;
}

std::string to_string(SearchResult r) { return r == SearchResult::Yes ? "Yes" : "No-within-universe"; }

SearchOutcome consistent(const Program& program, const PhysHeap& h, const LogicalHeap& H, const WitnessUniverse& u) {
  Search s(program, u);
  return s.run(H, &h, u.max_stock);
}

SearchOutcome ok_k(const Program& program, const LogicalHeap& H, std::size_t k, const WitnessUniverse& u) {
  Search s(program, u);
  return s.run(H, nullptr, k);
}

GhostValue phys_heap_value(const PhysHeap& h) {
  std::vector<Term> cells;
  for (const auto& [a, v] : h) cells.push_back(Term::pair(Term::integer(a), Term::integer(v)));
  return Term::set(std::move(cells));
}

LogicalHeap boot_chunks(const PhysHeap& h) {
  LogicalHeap out;
  out.add(Chunk::heap(phys_heap_value(h)), Fraction::one());
  out.add(Chunk::atomic_spaces(Term::set({})), Fraction::one());
  return out;
}

// ---------------------------------------------------------------------------

std::string CrosscheckReport::quadrant() const {
  return "(" + to_string(verdict) + ", " + to_string(explore) + ")";
}

std::string CrosscheckReport::text() const {
  std::string out = quadrant() + "\n";
  if (failure) out += "verifier: " + to_string(failure->kind) + ": " + failure->message + "\n";
  out += "explorer: " + std::to_string(states_visited) + " states\n";
  if (fatal()) out += "UNSOUND: verified program reaches a configuration that is not okay\n";
  return out;
}

std::string CrosscheckReport::json() const {
  nlohmann::json j;
  j["file"] = file;
  j["quadrant"] = quadrant();
  j["verdict"] = to_string(verdict);
  j["explore"] = to_string(explore);
  j["fatal"] = fatal();
  j["states_visited"] = states_visited;
  if (failure)
    j["failure"] = {{"kind", to_string(failure->kind)},
                    {"line", failure->loc.line},
                    {"col", failure->loc.col},
                    {"message", failure->message}};
  else
    j["failure"] = nullptr;
  return j.dump(2);
}

CrosscheckReport soundness_crosscheck(const Program& p, const CrosscheckOptions& options) {
  CrosscheckReport r;
  r.file = options.verify.file;
  VerifyReport v = verify_program(p, options.verify);
  r.verdict = v.verdict;
  r.failure = v.failure;
  ExploreOptions eo;
  eo.max_steps = options.depth;
  eo.jobs = options.jobs;
  ExploreReport e = explore(Configuration{{}, erase(p.main)}, eo);
  r.explore = e.verdict;
  r.states_visited = e.states_visited;
  return r;
}

}  // namespace cvf
