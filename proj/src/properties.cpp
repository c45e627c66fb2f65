// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/properties.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "cvf/transform.hpp"

namespace cvf {

namespace {

using Rng = std::mt19937_64;

std::int64_t pick(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(v.size()) - 1))];
}

Term I(std::int64_t z) { return Term::integer(z); }

PropertyResult named(std::string name) {
  PropertyResult r;
  r.name = std::move(name);
  return r;
}

void record(PropertyResult& r, bool ok, const std::function<std::string()>& describe) {
  ++r.trials;
  if (ok) return;
  if (r.failures++ == 0) r.first_failure = describe();
}

// -- heap algebra -------------------------------------------------------------

Chunk random_chunk(Rng& rng) {
  switch (pick(rng, 0, 4)) {
    case 0: return Chunk::points_to(I(pick(rng, 0, 2)), I(pick(rng, 0, 2)));
    case 1: return Chunk::ghost_points_to(I(pick(rng, 0, 2)), I(pick(rng, 0, 2)));
    case 2: return Chunk::atomic_space(Term::unit(), Term::pred("Inv", {I(pick(rng, 0, 1))}));
    case 3: return Chunk::atomic_spaces(Term::set({}));
    default: return Chunk::heap(Term::set({Term::pair(I(0), I(pick(rng, 0, 2)))}));
  }
}

Fraction random_coeff(Rng& rng) {
  static const std::vector<Fraction> coeffs{Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1),
                                            Fraction(3, 2), Fraction(2)};
  return pick(rng, coeffs);
}

LogicalHeap random_heap(Rng& rng, std::size_t max_cells = 4) {
  LogicalHeap h;
  auto n = pick(rng, 0, static_cast<std::int64_t>(max_cells));
  for (std::int64_t i = 0; i < n; ++i) h.add(random_chunk(rng), random_coeff(rng));
  return h;
}

std::string show(const LogicalHeap& h) {
  std::string s = "{";
  bool first = true;
  for (const auto& line : h.dump_lines()) {
    s += (first ? "" : ", ") + line;
    first = false;
  }
  return s + "}";
}

// -- ground instances ---------------------------------------------------------

/// Ground stand-ins for the parameter names used across the corpus.
Term stand_in(const Program& program, const std::string& name, std::size_t position) {
  auto pred = [&](const std::string& p) -> std::optional<Term> {
    const GhostDecl* d = program.find(p);
    if (!d || d->kind != GhostDecl::Kind::PredCtor) return std::nullopt;
    std::vector<Term> args;
    for (std::size_t i = 0; i < d->params.size(); ++i) args.push_back(I(static_cast<std::int64_t>(i)));
    return Term::pred(p, std::move(args));
  };
  auto heap_pred = [](std::int64_t v) {
    return Term::pred("heap_", {Term::set({Term::pair(I(0), I(v))})});
  };
  if (name == "x" || name == "l") return I(0);
  if (name == "g1") return I(1);
  if (name == "g2") return I(2);
  if (name == "n" || name == "z") return I(1);
  if (name == "pre") return pred("pre1").value_or(heap_pred(0));
  if (name == "post") return pred("post1").value_or(heap_pred(1));
  if (name == "P") return heap_pred(0);
  if (name == "Q") return heap_pred(1);
  if (name == "h") return Term::set({Term::pair(I(0), I(0))});
  return I(static_cast<std::int64_t>(position));
}

struct Walker {
  const Program& program;
  std::vector<AssertionInstance>* pres = nullptr;
  std::vector<GroundLemma>* lemmas = nullptr;
  std::int64_t next = 0;

  void ghost(const GhostCommand& g, const Env& env) {
    if (g.kind == GhostCommandKind::GLet) {
      ghost(*g.first, env);
      ghost(*g.second, env);
      return;
    }
    if (g.kind != GhostCommandKind::ProduceLemPtrChunk || !lemmas) return;
    Env closing = env;
    for (const auto& p : g.params) closing.ghost.erase(p);
    GroundLemma l;
    l.type = g.name;
    l.loc = g.loc;
    try {
      for (const auto& e : g.exprs) l.type_args.push_back(eval_ghost_expr(*e, env));
    } catch (const EvalError&) {
      return;
    }
    l.value = Term::lemma(g.params, subst(g.first, closing));
    lemmas->push_back(std::move(l));
  }

  void walk(const AnnotatedCommand& c, Env env) {
    switch (c.kind) {
      case AnnotatedKind::Expr:
      case AnnotatedKind::Instr: return;
      case AnnotatedKind::Let:
        walk(*c.first, env);
        if (c.var != kSeqVar) env.prog[c.var] = I(next++);
        walk(*c.second, env);
        return;
      case AnnotatedKind::GLet:
        ghost(*c.ghost, env);
        if (c.var != kSeqVar) env.ghost[c.var] = I(next++);
        walk(*c.first, env);
        return;
      case AnnotatedKind::Par:
        if (pres) {
          if (c.pre_first) pres->push_back({"par pre (left)", c.pre_first, env});
          if (c.pre_second) pres->push_back({"par pre (right)", c.pre_second, env});
        }
        walk(*c.first, env);
        walk(*c.second, env);
        return;
    }
  }
};

std::vector<Chunk> instance_pool(const Program& program, const AssertionInstance& inst, const WitnessUniverse& u,
                                 std::size_t cap) {
  std::vector<Chunk> pool;
  auto push = [&](const Chunk& c) {
    if (pool.size() < cap && std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
  };
  auto models = minimal_models(*inst.assertion, inst.env, program, u);
  if (models.size() > 4) models.resize(4);
  for (const auto& m : models)
    for (const auto& [c, f] : m) push(c);
  for (const auto& m : models)
    for (const auto& [c, f] : m)
      if (c.is_points_to_kind() && c.args[1].is_int()) {
        Chunk near = c;
        near.args[1] = I(c.args[1].int_value() + 1);
        push(near);
      }
  push(Chunk::points_to(I(4), I(4)));
  return pool;
}

}  // namespace

std::string PropertyResult::str() const {
  std::ostringstream out;
  out << name << ": " << trials << " trials, " << failures << " failures";
  if (failures) out << " (first: " << first_failure << ")";
  return out.str();
}

std::vector<PropertyResult> heap_algebra_suite(std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  PropertyResult comm = named("heap_add commutativity"), assoc = named("heap_add associativity"), ident = named("heap_add identity"),
      round = named("heap_sub after heap_add"), order = named("heap_geq partial order");
  for (std::size_t i = 0; i < trials; ++i) {
    LogicalHeap a = random_heap(rng), b = random_heap(rng), c = random_heap(rng);
    auto abc = [&] { return show(a) + " " + show(b) + " " + show(c); };
    record(comm, heap_add(a, b) == heap_add(b, a), abc);
    record(assoc, heap_add(heap_add(a, b), c) == heap_add(a, heap_add(b, c)), abc);
    record(ident, heap_add(a, LogicalHeap{}) == a && heap_add(LogicalHeap{}, a) == a, abc);
    bool rt = false;
    try {
      rt = heap_sub(heap_add(a, b), b) == a;
    } catch (const InsufficientError&) {
    }
    record(round, rt, abc);
    // Reflexivity, antisymmetry, transitivity, and agreement with heap_sub.
    LogicalHeap ab = heap_add(a, b), abc_sum = heap_add(ab, c);
    bool refl = heap_geq(a, a);
    bool anti = !(heap_geq(a, b) && heap_geq(b, a)) || a == b;
    bool trans = heap_geq(abc_sum, ab) && heap_geq(ab, a) && heap_geq(abc_sum, a);
    bool sub_ok;
    try {
      heap_sub(a, b);
      sub_ok = heap_geq(a, b);
    } catch (const InsufficientError&) {
      sub_ok = !heap_geq(a, b);
    }
    record(order, refl && anti && trans && sub_ok, abc);
  }
  return {comm, assoc, ident, round, order};
}

std::vector<AssertionInstance> assertion_instances(const Program& program) {
  std::vector<AssertionInstance> out;
  for (const auto& d : program.decls) {
    if (d.kind == GhostDecl::Kind::PredCtor) {
      Env env;
      for (std::size_t i = 0; i < d.params.size(); ++i) env.ghost[d.params[i]] = stand_in(program, d.params[i], i);
      out.push_back({"pred_ctor " + d.name, d.body, env});
      continue;
    }
    Env env;
    std::size_t pos = 0;
    for (const auto* names : {&d.params, &d.lem_params, &d.forall_params})
      for (const auto& n : *names) env.ghost[n] = stand_in(program, n, pos++);
    out.push_back({"lem_type " + d.name + " req", d.req, env});
    out.push_back({"lem_type " + d.name + " ens", d.ens, env});
  }
  Walker w{program, &out, nullptr};
  w.walk(*program.main, {});
  return out;
}

std::vector<GroundLemma> ground_lemmas(const Program& program) {
  std::vector<GroundLemma> out;
  Walker w{program, nullptr, &out};
  w.walk(*program.main, {});
  return out;
}

PropertyResult satisfaction_agreement(const Program& program, const std::vector<AssertionInstance>& instances,
                                      std::size_t max_chunks) {
  PropertyResult r = named("satisfies agrees with split enumeration");
  WitnessUniverse u;
  const std::vector<Fraction> coeffs{Fraction(1, 2), Fraction(1)};
  auto witnesses = u.values();
  SatConfig cfg;
  cfg.existential_witness_universe = witnesses;
  for (const auto& inst : instances) {
    auto pool = instance_pool(program, inst, u, 9);
    // Subsets of the pool of size <= max_chunks, each with every coefficient.
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> grow = [&](std::size_t from) {
      std::vector<std::size_t> ci(chosen.size(), 0);
      for (;;) {
        LogicalHeap h;
        for (std::size_t i = 0; i < chosen.size(); ++i) h.add(pool[chosen[i]], coeffs[ci[i]]);
        SatResult fast = satisfies(h, *inst.assertion, inst.env, program, cfg);
        SatResult slow = split_satisfies(h, *inst.assertion, inst.env, program, witnesses);
        record(r, fast == slow, [&] {
          return inst.label + " on " + show(h) + ": " + to_string(fast) + " vs " + to_string(slow);
        });
        std::size_t k = 0;
        while (k < ci.size() && ++ci[k] == coeffs.size()) ci[k++] = 0;
        if (k == ci.size()) break;
      }
      if (chosen.size() == max_chunks) return;
      for (std::size_t j = from; j < pool.size(); ++j) {
        chosen.push_back(j);
        grow(j + 1);
        chosen.pop_back();
      }
    };
    grow(0);
  }
  return r;
}

PropertyResult upward_closure(const Program& program, const std::vector<AssertionInstance>& instances,
                              std::size_t trials, std::uint64_t seed) {
  PropertyResult r = named("upward closure of satisfaction");
  if (instances.empty()) return r;
  Rng rng(seed);
  WitnessUniverse u;
  SatConfig cfg;
  cfg.existential_witness_universe = u.values();
  std::vector<std::vector<LogicalHeap>> models;
  std::vector<std::vector<Chunk>> pools;
  for (const auto& inst : instances) {
    models.push_back(minimal_models(*inst.assertion, inst.env, program, u));
    pools.push_back(instance_pool(program, inst, u, 12));
  }
  for (std::size_t t = 0; t < trials; ++t) {
    auto i = static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(instances.size()) - 1));
    if (models[i].empty()) {
      record(r, true, {});
      continue;
    }
    const auto& inst = instances[i];
    LogicalHeap h = pick(rng, models[i]);
    LogicalHeap ext;
    auto n = pick(rng, 1, 3);
    for (std::int64_t k = 0; k < n; ++k) {
      Chunk c = rng() % 2 ? pick(rng, pools[i]) : random_chunk(rng);
      ext.add(c, rng() % 2 ? Fraction(1, 2) : Fraction(1));
    }
    SatResult base = satisfies(h, *inst.assertion, inst.env, program, cfg);
    SatResult up = satisfies(heap_add(h, ext), *inst.assertion, inst.env, program, cfg);
    record(r, base == SatResult::Sat && up == SatResult::Sat, [&] {
      return inst.label + ": " + show(h) + " -> " + to_string(base) + ", + " + show(ext) + " -> " + to_string(up);
    });
  }
  return r;
}

PropertyResult consistency_equivalence(const Program& program, std::size_t trials, std::uint64_t seed,
                                       std::size_t* yes_count) {
  PropertyResult r = named("consistent iff ok_k with boot chunks");
  Rng rng(seed);
  WitnessUniverse u;
  auto lemmas = ground_lemmas(program);
  std::size_t yes = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    PhysHeap h;
    for (std::int64_t n = pick(rng, 0, 2); n > 0; --n) h[pick(rng, u.addr_min, u.addr_max)] = pick(rng, u.value_min, u.value_max);
    std::vector<std::int64_t> addrs;
    for (const auto& [a, v] : h) addrs.push_back(a);
    auto coeff = [&] { return pick(rng, 0, 2) == 0 ? Fraction(1) : Fraction(1, 2); };
    LogicalHeap H;
    for (std::int64_t n = pick(rng, 0, 3); n > 0; --n) {
      switch (pick(rng, 0, 9)) {
        case 0:
        case 1:
        case 2:
          if (!h.empty() && pick(rng, 0, 4) > 0) {
            auto a = pick(rng, addrs);
            H.add(Chunk::points_to(I(a), I(h[a])), coeff());
          } else {
            H.add(Chunk::points_to(I(pick(rng, u.addr_min, u.addr_max)), I(pick(rng, u.value_min, u.value_max))),
                  coeff());
          }
          break;
        case 3:
        case 4:
          H.add(Chunk::ghost_points_to(I(pick(rng, 1, 2)), I(pick(rng, -1, 1))), coeff());
          break;
        case 5:
        case 6: {
          std::int64_t a = !addrs.empty() && pick(rng, 0, 3) > 0 ? pick(rng, addrs) : pick(rng, 0, 4);
          H.add(Chunk::atomic_space(Term::unit(), Term::pred("Inv", {I(a), I(1), I(2)})), coeff());
          break;
        }
        case 7:
          if (!lemmas.empty()) {
            const auto& l = pick(rng, lemmas);
            auto targs = l.type_args;
            if (pick(rng, 0, 2) == 0 && lemmas.size() > 1) targs = lemmas[(&l == &lemmas[0]) ? 1 : 0].type_args;
            H.add(Chunk::lem_type_chunk(l.value, l.type, targs), coeff());
          }
          break;
        case 8: H.add(Chunk::atomic_spaces(Term::set({})), Fraction(1)); break;
        default: H.add(Chunk::heap(phys_heap_value(h)), Fraction(1)); break;
      }
    }
    bool left = consistent(program, h, H, u).yes();
    bool right = false;
    LogicalHeap boot = heap_add(H, boot_chunks(h));
    for (std::size_t k = 0; k <= 2 && !right; ++k) right = ok_k(program, boot, k, u).yes();
    if (left) ++yes;
    record(r, left == right, [&] {
      return "h = " + format_heap(h) + ", H = " + show(H) + ": consistent " + (left ? "yes" : "no") + ", ok_k " +
             (right ? "yes" : "no");
    });
  }
  if (yes_count) *yes_count = yes;
  return r;
}

PropertyResult sok_monotone(const Program& program, std::size_t trials, std::uint64_t seed) {
  PropertyResult r = named("sok monotone under removing lemma chunks");
  Rng rng(seed);
  auto lemmas = ground_lemmas(program);
  if (lemmas.empty()) return r;
  for (std::size_t t = 0; t < trials; ++t) {
    LogicalHeap H = random_heap(rng, 2);
    for (std::int64_t n = pick(rng, 1, 2); n > 0; --n) {
      const auto& l = pick(rng, lemmas);
      auto targs = l.type_args;
      if (pick(rng, 0, 3) == 0) targs = pick(rng, lemmas).type_args;
      H.add(Chunk::lem_type_chunk(l.value, l.type, targs), rng() % 2 ? Fraction(1, 2) : Fraction(1));
    }
    if (!sok(program, H)) {
      record(r, true, {});
      continue;
    }
    bool ok = true;
    for (const auto& [c, f] : H) {
      if (c.kind != ChunkKind::LemType) continue;
      LogicalHeap less = H;
      less.set(c, rng() % 2 ? Fraction::zero() : f - std::min(f, Fraction(1, 2)));
      ok = ok && sok(program, less);
    }
    record(r, ok, [&] { return show(H); });
  }
  return r;
}

}  // namespace cvf
