// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/verifier.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "cvf/printer.hpp"

namespace cvf {

namespace {

using AK = AssertionKind;
using GK = GhostCommandKind;

std::string ghost_kind_name(GK k) {
  switch (k) {
    case GK::LemCall: return "lemma call";
    case GK::GCons: return "gcons";
    case GK::GAssign: return "ghost assignment";
    case GK::OpenAtomicSpace: return "open_atomic_space";
    case GK::CloseAtomicSpace: return "close_atomic_space";
    case GK::HeapUpdate: return "heap update";
    case GK::GLet: return "glet";
    case GK::ProduceLemPtrChunk: return "produce_lem_ptr_chunk";
    case GK::CreateAtomicSpace: return "create_atomic_space";
    case GK::DestroyAtomicSpace: return "destroy_atomic_space";
  }
  return "?";
}

std::string describe(const AnnotatedCommand& c) {
  switch (c.kind) {
    case AnnotatedKind::Expr: return "value";
    case AnnotatedKind::Instr:
      switch (c.instr.kind) {
        case InstrKind::Cons: return "cons";
        case InstrKind::Faa: return "faa";
        case InstrKind::Deref: return "deref";
        case InstrKind::AssertEq: return "assert";
      }
      return "instr";
    case AnnotatedKind::Let: return c.var == kSeqVar ? "seq" : "let " + c.var;
    case AnnotatedKind::Par: return "par";
    case AnnotatedKind::GLet:
      return c.var == kSeqVar ? "ghost " + ghost_kind_name(c.ghost->kind) : "glet " + c.var;
  }
  return "?";
}

SymChunk::Kind leaf_kind(AK k) {
  switch (k) {
    case AK::PointsTo: return SymChunk::Kind::PointsTo;
    case AK::GhostPointsTo: return SymChunk::Kind::GhostPointsTo;
    case AK::AtomicSpace: return SymChunk::Kind::AtomicSpace;
    case AK::LemType: return SymChunk::Kind::LemType;
    case AK::AtomicSpaces: return SymChunk::Kind::AtomicSpaces;
    case AK::HeapChunk: return SymChunk::Kind::Heap;
    default: break;
  }
  throw std::logic_error("not a leaf assertion");
}

GhostExprPtr val(const Term& t) { return GhostExpr::make_value(t); }
GhostExprPtr gvar(const std::string& g) { return GhostExpr::make_ghost_var(g); }

AssertionPtr exists_all(const std::vector<std::string>& names, AssertionPtr body) {
  for (auto it = names.rbegin(); it != names.rend(); ++it) body = Assertion::make_exists(*it, body);
  return body;
}

SymHeap heap_minus(const SymHeap& a, const SymHeap& b) {
  SymHeap out;
  for (const auto& [c, f] : a) {
    Fraction rest = f - b.coefficient(c);
    out.add(c, rest);
  }
  return out;
}

[[noreturn]] void fail(FailureKind kind, std::string message, const SymbolicState* st = nullptr,
                       SourceLoc loc = {}) {
  Diagnostic d;
  d.kind = kind;
  d.loc = loc;
  d.message = std::move(message);
  if (st) d.state = st->dump();
  throw VerifyFailure(std::move(d));
}

std::string readable(const std::string& s) { return readable_symbols({s}).front(); }

/// Unification variables of one consume call.
struct MatchCtx {
  std::set<std::uint64_t> uvars;
  std::map<std::uint64_t, Term> bound;
  std::map<std::string, Term> witnesses;

  Term apply(const Term& t, const PathCondition& pc) const {
    Term r = t;
    if (!bound.empty()) {
      r = t.rewrite([this](const Term& s) -> std::optional<Term> {
        if (!s.is(TermKind::Sym)) return std::nullopt;
        auto it = bound.find(s.sym_id());
        if (it == bound.end()) return std::nullopt;
        return it->second;
      });
    }
    return pc.normalize(r);
  }

  bool open(const Term& t) const {
    std::vector<std::uint64_t> ids;
    t.collect_symbols(ids);
    for (auto id : ids)
      if (uvars.count(id) && !bound.count(id)) return true;
    return false;
  }

  bool is_uvar(const Term& t) const {
    return t.is(TermKind::Sym) && uvars.count(t.sym_id()) && !bound.count(t.sym_id());
  }

  /// Unifies `pattern` with `actual`, binding unification variables.
  bool match(const Term& pattern, const Term& actual, const PathCondition& pc) {
    Term p = apply(pattern, pc);
    Term a = pc.normalize(actual);
    if (!open(p)) return pc.entails_eq(p, a) == Entailment::Yes;
    if (is_uvar(p)) {
      if (a.mentions(p.sym_id())) return false;
      bound[p.sym_id()] = a;
      return true;
    }
    if ((p.is(TermKind::Pair) || p.is(TermKind::PredVal)) && p.kind() == a.kind() && p.name() == a.name() &&
        p.args().size() == a.args().size()) {
      for (std::size_t i = 0; i < p.args().size(); ++i)
        if (!match(p.args()[i], a.args()[i], pc)) return false;
      return true;
    }
    if (p.is(TermKind::Sum)) {
      // Solve for the single open atom with a unit coefficient.
      std::optional<std::size_t> slot;
      for (std::size_t i = 0; i < p.args().size(); ++i) {
        if (!open(p.args()[i])) continue;
        if (slot || !is_uvar(p.args()[i]) || (p.coeffs()[i] != 1 && p.coeffs()[i] != -1)) return false;
        slot = i;
      }
      if (!slot) return false;
      const Term& u = p.args()[*slot];
      std::int64_t c = p.coeffs()[*slot];
      Term rest = Term::sub(p, Term::scale(u, c));
      Term diff = Term::sub(a, rest);
      bound[u.sym_id()] = pc.normalize(c == 1 ? diff : Term::scale(diff, -1));
      return true;
    }
    return false;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(FailureKind k) {
  switch (k) {
    case FailureKind::ConsumeFailure: return "consume failure";
    case FailureKind::UnprovableEquality: return "unprovable equality";
    case FailureKind::SideCondition: return "side condition";
    case FailureKind::AmbiguousMatch: return "ambiguous match";
    case FailureKind::DepthExceeded: return "depth exceeded";
    case FailureKind::Leak: return "leak";
    case FailureKind::IllFormed: return "ill-formed";
  }
  return "?";
}

std::string to_string(Verdict v) { return v == Verdict::Verified ? "Verified" : "Failed"; }

VerifyFailure::VerifyFailure(Diagnostic d) : std::runtime_error(d.message), diag(std::move(d)) {}

std::vector<std::string> SymbolicState::dump() const {
  auto lines = heap.dump_lines();
  for (const auto& f : pc.dump()) lines.push_back("pc: " + f);
  return readable_symbols(std::move(lines));
}

// ---------------------------------------------------------------------------

struct Verifier::Impl {
  Verifier& v;

  const Program& program() const { return v.program_; }

  std::string thread() const {
    std::string t = "root";
    for (const auto& s : v.thread_) t += "." + s;
    return t;
  }

  void snapshot(const SymbolicState& st, const std::string& point, SourceLoc loc) {
    if (!v.options_.record_snapshots || v.lemma_depth_ > 0) return;
    Snapshot s;
    s.thread = thread();
    s.point = point;
    s.loc = loc;
    s.heap = readable_symbols(st.heap.dump_lines());
    s.pc = readable_symbols(st.pc.dump());
    v.snapshots_.push_back(std::move(s));
  }

  // -- evaluation -----------------------------------------------------------

  Term eval(const GhostExpr& e, const Bindings& env) {
    auto need_set = [&](const Term& t) {
      if (t.is_ground() && !t.is_set()) fail(FailureKind::IllFormed, "set operation on non-set " + t.str(), nullptr);
    };
    switch (e.kind) {
      case GhostExprKind::Value: return e.value;
      case GhostExprKind::ProgVar: {
        auto it = env.prog.find(e.name);
        if (it == env.prog.end()) fail(FailureKind::IllFormed, "unbound program variable " + e.name, nullptr);
        return it->second;
      }
      case GhostExprKind::GhostVar: {
        auto it = env.ghost.find(e.name);
        if (it == env.ghost.end()) fail(FailureKind::IllFormed, "unbound ghost variable " + e.name, nullptr);
        return it->second;
      }
      case GhostExprKind::Add: {
        Term a = eval(*e.args[0], env), b = eval(*e.args[1], env);
        for (const Term* t : {&a, &b})
          if (t->is_ground() && !t->is_int())
            fail(FailureKind::IllFormed, "'+' on non-integer " + t->str(), nullptr);
        return Term::add(a, b);
      }
      case GhostExprKind::PredCtorApp: {
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(eval(*a, env));
        return Term::pred(e.name, std::move(args));
      }
      case GhostExprKind::Pair: return Term::pair(eval(*e.args[0], env), eval(*e.args[1], env));
      case GhostExprKind::Unit: return Term::unit();
      case GhostExprKind::EmptySet: return Term::set({});
      case GhostExprKind::Singleton: return Term::set({eval(*e.args[0], env)});
      case GhostExprKind::Union: {
        Term a = eval(*e.args[0], env), b = eval(*e.args[1], env);
        need_set(a);
        need_set(b);
        return Term::set_union(a, b);
      }
      case GhostExprKind::Diff: {
        Term a = eval(*e.args[0], env), b = eval(*e.args[1], env);
        need_set(a);
        need_set(b);
        return Term::set_diff(a, b);
      }
    }
    return Term::unit();
  }

  Term eval_expr(const Expr& e, const Bindings& env, SourceLoc loc) {
    if (e.is_value()) return Term::integer(e.value);
    auto it = env.prog.find(e.name);
    if (it == env.prog.end()) fail(FailureKind::IllFormed, "unbound program variable " + e.name, nullptr, loc);
    return it->second;
  }

  const GhostDecl& decl(const std::string& name, GhostDecl::Kind kind) {
    const GhostDecl* d = program().find(name);
    if (!d || d->kind != kind)
      fail(FailureKind::IllFormed,
           std::string(kind == GhostDecl::Kind::PredCtor ? "unknown predicate constructor " : "unknown lemma type ") +
               name);
    return *d;
  }

  // -- state maintenance ----------------------------------------------------

  /// Normalizes the heap and applies weak consistency: two (ghost) points-to
  /// chunks for one address agree on the value and their coefficients add
  /// up to at most 1. Returns false for a vacuous (inconsistent) state.
  bool settle(SymbolicState& st) {
    for (;;) {
      st.heap.normalize(st.pc);
      if (!st.pc.consistent()) return false;
      std::vector<std::pair<SymChunk, Fraction>> cells(st.heap.begin(), st.heap.end());
      bool changed = false;
      for (std::size_t i = 0; i < cells.size() && !changed; ++i) {
        if (!cells[i].first.is_points_to_kind()) continue;
        for (std::size_t j = i + 1; j < cells.size() && !changed; ++j) {
          if (cells[j].first.kind != cells[i].first.kind) continue;
          const auto& a = cells[i].first.args;
          const auto& b = cells[j].first.args;
          Entailment same = st.pc.entails_eq(a[0], b[0]);
          if (same == Entailment::Yes) {
            if (!st.pc.assume_eq(a[1], b[1])) return false;
            changed = true;
          } else if (same == Entailment::Unknown && Fraction::one() < cells[i].second + cells[j].second) {
            if (!st.pc.assume_neq(a[0], b[0])) return false;
          }
        }
      }
      if (!changed) break;
    }
    for (const auto& [c, f] : st.heap)
      if (c.is_points_to_kind() && Fraction::one() < f) return false;
    return st.pc.consistent();
  }

  bool prune(const SymbolicState& st) {
    (void)st;
    ++v.stats_.pruned;
    return false;
  }

  // -- produce --------------------------------------------------------------

  bool produce(SymbolicState& st, const Assertion& a, Bindings env, int depth) {
    switch (a.kind) {
      case AK::Emp: return true;
      case AK::PureEq: {
        Term l = eval(*a.exprs[0], env), r = eval(*a.exprs[1], env);
        st.pc.assume_eq(l, r);
        return settle(st) || prune(st);
      }
      case AK::PredApp: {
        Term p = st.pc.normalize(eval(*a.exprs[0], env));
        if (p.is(TermKind::PredVal)) {
          const GhostDecl& d = decl(p.name(), GhostDecl::Kind::PredCtor);
          if (depth <= 0)
            fail(FailureKind::DepthExceeded, "unfold depth exceeded while producing " + readable(p.str()) + "()", &st);
          Bindings inner;
          for (std::size_t i = 0; i < d.params.size(); ++i) inner.ghost[d.params[i]] = p.args().at(i);
          return produce(st, *d.body, std::move(inner), depth - 1);
        }
        if (p.is_ground())
          fail(FailureKind::IllFormed, "applying non-predicate value " + p.str(), &st);
        st.heap.add(SymChunk::pred_instance(p), Fraction::one());
        ++v.stats_.produced;
        return settle(st) || prune(st);
      }
      case AK::Exists:
        env.ghost[a.name] = v.fresh(a.name);
        return produce(st, *a.left, std::move(env), depth);
      case AK::SepConj:
        return produce(st, *a.left, env, depth) && produce(st, *a.right, env, depth);
      default: {
        SymChunk c{leaf_kind(a.kind), {}, a.kind == AK::LemType ? a.name : std::string()};
        for (const auto& e : a.exprs) c.args.push_back(st.pc.normalize(eval(*e, env)));
        st.heap.add(c, a.coeff);
        ++v.stats_.produced;
        return settle(st) || prune(st);
      }
    }
  }

  // -- consume --------------------------------------------------------------

  void consume(SymbolicState& st, const Assertion& a, Bindings env, int depth, MatchCtx& m) {
    switch (a.kind) {
      case AK::Emp: return;
      case AK::PureEq: {
        Term l = m.apply(eval(*a.exprs[0], env), st.pc);
        Term r = m.apply(eval(*a.exprs[1], env), st.pc);
        bool ol = m.open(l), orr = m.open(r);
        bool ok;
        if (ol && !orr) {
          ok = m.match(l, r, st.pc);
        } else if (orr && !ol) {
          ok = m.match(r, l, st.pc);
        } else if (ol) {
          fail(FailureKind::IllFormed, "cannot determine the existentials of " + readable(l.str()) + " == " +
                                           readable(r.str()), &st);
        } else {
          ok = st.pc.entails_eq(l, r) == Entailment::Yes;
        }
        if (!ok) {
          std::string why = st.pc.entails_eq(l, r) == Entailment::No ? "path condition refutes it" : "cannot decide";
          fail(FailureKind::UnprovableEquality,
               "unprovable equality: " + readable(l.str()) + " == " + readable(r.str()) + " (" + why + ")", &st);
        }
        return;
      }
      case AK::PredApp: {
        Term p = m.apply(eval(*a.exprs[0], env), st.pc);
        if (p.is(TermKind::PredVal)) {
          const GhostDecl& d = decl(p.name(), GhostDecl::Kind::PredCtor);
          if (depth <= 0)
            fail(FailureKind::DepthExceeded, "unfold depth exceeded while consuming " + readable(p.str()) + "()", &st);
          Bindings inner;
          for (std::size_t i = 0; i < d.params.size(); ++i) inner.ghost[d.params[i]] = p.args().at(i);
          consume(st, *d.body, std::move(inner), depth - 1, m);
          return;
        }
        std::vector<std::pair<SymChunk, MatchCtx>> found;
        for (const auto& [c, f] : st.heap) {
          if (c.kind != SymChunk::Kind::PredInstance) continue;
          MatchCtx trial = m;
          if (trial.match(p, c.args[0], st.pc)) found.emplace_back(c, std::move(trial));
        }
        take(st, found, Fraction::one(), readable(p.str()) + "()", m.open(p), SymChunk::Kind::PredInstance, m);
        return;
      }
      case AK::Exists: {
        Term u = v.fresh(a.name);
        m.uvars.insert(u.sym_id());
        env.ghost[a.name] = u;
        consume(st, *a.left, std::move(env), depth, m);
        auto it = m.bound.find(u.sym_id());
        m.witnesses[a.name] = it == m.bound.end() ? u : it->second;
        return;
      }
      case AK::SepConj:
        consume(st, *a.left, env, depth, m);
        consume(st, *a.right, env, depth, m);
        return;
      default: {
        SymChunk pattern{leaf_kind(a.kind), {}, a.kind == AK::LemType ? a.name : std::string()};
        for (const auto& e : a.exprs) pattern.args.push_back(m.apply(eval(*e, env), st.pc));
        bool open = std::any_of(pattern.args.begin(), pattern.args.end(), [&](const Term& t) { return m.open(t); });
        std::vector<std::pair<SymChunk, MatchCtx>> found;
        for (const auto& [c, f] : st.heap) {
          if (c.kind != pattern.kind || c.lem_type != pattern.lem_type || c.args.size() != pattern.args.size()) continue;
          MatchCtx trial = m;
          bool ok = true;
          for (std::size_t i = 0; i < c.args.size() && ok; ++i) ok = trial.match(pattern.args[i], c.args[i], st.pc);
          if (ok) found.emplace_back(c, std::move(trial));
        }
        std::string what = a.coeff == Fraction::one() ? pattern.str() : "[" + a.coeff.str() + "]" + pattern.str();
        take(st, found, a.coeff, readable(what), open, pattern.kind, m);
        return;
      }
    }
  }

  void take(SymbolicState& st, std::vector<std::pair<SymChunk, MatchCtx>>& found, Fraction need,
            const std::string& what, bool open, SymChunk::Kind kind, MatchCtx& m) {
    if (found.empty()) {
      std::string have;
      for (const auto& [c, f] : st.heap)
        if (c.kind == kind) have += (have.empty() ? "" : ", ") + f.str() + " " + c.str();
      fail(FailureKind::ConsumeFailure,
           "cannot consume " + what + ": no matching chunk" + (have.empty() ? "" : " (have " + readable(have) + ")"),
           &st);
    }
    if (found.size() > 1 && open) {
      std::string list;
      for (const auto& [c, ctx] : found) list += (list.empty() ? "" : ", ") + c.str();
      fail(FailureKind::AmbiguousMatch, "ambiguous match for " + what + ": " + readable(list), &st);
    }
    auto& [chunk, ctx] = found.front();
    Fraction have = st.heap.coefficient(chunk);
    if (have < need)
      fail(FailureKind::ConsumeFailure,
           "cannot consume " + what + ": have " + have.str() + " of " + readable(chunk.str()) + ", need " + need.str(),
           &st);
    st.heap.remove(chunk, need);
    ++v.stats_.consumed;
    m = std::move(ctx);
  }

  Consumed consume_top(const SymbolicState& st, const Assertion& a, const Bindings& env) {
    Consumed out{st, {}};
    MatchCtx m;
    consume(out.state, a, env, v.options_.unfold_depth, m);
    out.witnesses = std::move(m.witnesses);
    return out;
  }

  std::optional<SymbolicState> produce_top(SymbolicState st, const Assertion& a, const Bindings& env) {
    if (!settle(st) && !prune(st)) return std::nullopt;
    if (!produce(st, a, env, v.options_.unfold_depth)) return std::nullopt;
    return st;
  }

  // -- commands -------------------------------------------------------------

  /// Fills in the location of a failure raised below a command.
  template <typename F>
  auto located(SourceLoc loc, const std::string& where, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (VerifyFailure& e) {
      if (e.diag.loc.line == 0) {
        e.diag.loc = loc;
        if (!where.empty()) e.diag.message = where + ": " + e.diag.message;
      }
      throw;
    }
  }

  std::vector<Outcome> exec(const SymbolicState& st, const AnnotatedCommand& c, const std::string& hint) {
    snapshot(st, describe(c), c.loc);
    switch (c.kind) {
      case AnnotatedKind::Expr:
        return {{st, eval_expr(c.expr, st.env, c.loc)}};
      case AnnotatedKind::Instr:
        return located(c.loc, describe(c), [&] { return exec_instr(st, c, hint); });
      case AnnotatedKind::Let: {
        std::vector<Outcome> out;
        for (auto& o : exec(st, *c.first, c.var == kSeqVar ? std::string() : c.var)) {
          SymbolicState next = std::move(o.state);
          next.env = st.env;
          if (c.var != kSeqVar) next.env.prog[c.var] = o.result;
          for (auto& r : exec(next, *c.second, hint)) out.push_back(std::move(r));
        }
        if (out.size() > 1) v.stats_.branches += out.size() - 1;
        return out;
      }
      case AnnotatedKind::GLet: {
        std::vector<Outcome> out;
        auto first = located(c.loc, "", [&] {
          return verify_ghost(st, *c.ghost, true, c.var == kSeqVar ? std::string() : c.var);
        });
        for (auto& o : first) {
          SymbolicState next = std::move(o.state);
          next.env = st.env;
          if (c.var != kSeqVar) next.env.ghost[c.var] = o.result;
          for (auto& r : exec(next, *c.first, hint)) out.push_back(std::move(r));
        }
        return out;
      }
      case AnnotatedKind::Par:
        return exec_par(st, c);
    }
    return {};
  }

  std::vector<Outcome> exec_instr(const SymbolicState& st, const AnnotatedCommand& c, const std::string& hint) {
    const Instr& i = c.instr;
    switch (i.kind) {
      case InstrKind::Cons: {
        Term value = eval_expr(i.a, st.env, c.loc);
        Term res = v.fresh(hint.empty() ? "res" : hint);
        SymbolicState next = st;
        next.heap.add(SymChunk{SymChunk::Kind::PointsTo, {res, value}, {}}, Fraction::one());
        ++v.stats_.produced;
        if (!settle(next)) return prune(next), std::vector<Outcome>{};
        return {{std::move(next), res}};
      }
      case InstrKind::Deref: {
        Term addr = st.pc.normalize(eval_expr(i.a, st.env, c.loc));
        for (const auto& [chunk, f] : st.heap)
          if (chunk.kind == SymChunk::Kind::PointsTo && st.pc.entails_eq(chunk.args[0], addr) == Entailment::Yes)
            return {{st, chunk.args[1]}};
        fail(FailureKind::ConsumeFailure, "cannot consume [_]" + readable(addr.str()) + " |-> _: no points-to chunk",
             &st);
      }
      case InstrKind::Faa: {
        Term addr = eval_expr(i.a, st.env, c.loc);
        Term inc = eval_expr(i.b, st.env, c.loc);
        // {V : FAA_ghop(l, z, P, Q) * P()} FAA(l, z) {V : FAA_ghop(l, z, P, Q) * Q()}
        auto lem = Assertion::make_lem_type(gvar("V"), "FAA_ghop", {val(addr), val(inc), gvar("P"), gvar("Q")});
        auto pre = exists_all({"V", "P", "Q"}, Assertion::make_sep(lem, Assertion::make_pred_app(gvar("P"))));
        Consumed got = consume_top(st, *pre, {});
        Bindings env;
        env.ghost = got.witnesses;
        auto post = Assertion::make_sep(lem, Assertion::make_pred_app(gvar("Q")));
        auto next = produce_top(std::move(got.state), *post, env);
        if (!next) return {};
        return {{std::move(*next), v.fresh("faa")}};
      }
      case InstrKind::AssertEq: {
        Term a = eval_expr(i.a, st.env, c.loc), b = eval_expr(i.b, st.env, c.loc);
        Entailment e = st.pc.entails_eq(a, b);
        if (e != Entailment::Yes) {
          auto side = [](const Expr& x) { return x.is_value() ? std::to_string(x.value) : x.name; };
          std::string msg = "unprovable equality: " + side(i.a) + " == " + side(i.b);
          Term na = st.pc.normalize(a), nb = st.pc.normalize(b);
          if (!i.a.is_value() && na.is_ground())
            msg += " (path condition entails " + i.a.name + " = " + na.str() + ")";
          else if (!i.b.is_value() && nb.is_ground())
            msg += " (path condition entails " + i.b.name + " = " + nb.str() + ")";
          else if (e == Entailment::Unknown)
            msg += " (cannot decide)";
          fail(FailureKind::UnprovableEquality, msg, &st);
        }
        return {{st, Term::integer(0)}};
      }
    }
    return {};
  }

  std::vector<Outcome> exec_par(const SymbolicState& st, const AnnotatedCommand& c) {
    auto emp = Assertion::make_emp();
    const Assertion& pre1 = c.pre_first ? *c.pre_first : *emp;
    const Assertion& pre2 = c.pre_second ? *c.pre_second : *emp;
    Consumed left = located(c.loc, "par: left precondition", [&] { return consume_top(st, pre1, st.env); });
    Consumed right =
        located(c.loc, "par: right precondition", [&] { return consume_top(left.state, pre2, st.env); });
    SymHeap frame = right.state.heap;
    SymbolicState ls{st.pc, heap_minus(st.heap, left.state.heap), st.env};
    SymbolicState rs{st.pc, heap_minus(left.state.heap, right.state.heap), st.env};

    auto branch = [&](const SymbolicState& s, const AnnotatedCommand& body, const char* tag) {
      v.thread_.push_back(tag);
      snapshot(s, "entry", body.loc);
      std::vector<Outcome> outs;
      try {
        outs = exec(s, body, "");
      } catch (...) {
        v.thread_.pop_back();
        throw;
      }
      for (const auto& o : outs) snapshot(o.state, "exit", body.loc);
      v.thread_.pop_back();
      return outs;
    };
    auto louts = branch(ls, *c.first, "L");
    auto routs = branch(rs, *c.second, "R");

    std::vector<Outcome> out;
    std::size_t base = st.pc.log().size();
    for (const auto& l : louts) {
      for (const auto& r : routs) {
        SymbolicState joined{l.state.pc, sym_heap_add(frame, sym_heap_add(l.state.heap, r.state.heap)), st.env};
        const auto& log = r.state.pc.log();
        for (std::size_t k = base; k < log.size(); ++k) joined.pc.assume(log[k]);
        if (!settle(joined)) {
          prune(joined);
          continue;
        }
        snapshot(joined, "join", c.loc);
        out.push_back({std::move(joined), Term::integer(0)});
      }
    }
    if (out.size() > 1) v.stats_.branches += out.size() - 1;
    return out;
  }

  // -- ghost commands -------------------------------------------------------

  std::vector<Outcome> verify_ghost(const SymbolicState& st, const GhostCommand& g, bool outer,
                                    const std::string& hint) {
    if (!outer && g.is_outer_only())
      fail(FailureKind::IllFormed, ghost_kind_name(g.kind) + " is not allowed inside a lemma body", &st, g.loc);
    if (g.kind == GK::GLet) {
      std::vector<Outcome> out;
      for (auto& o : verify_ghost(st, *g.first, outer, g.name == kSeqVar ? std::string() : g.name)) {
        SymbolicState next = std::move(o.state);
        next.env = st.env;
        if (g.name != kSeqVar) next.env.ghost[g.name] = o.result;
        for (auto& r : verify_ghost(next, *g.second, outer, hint)) out.push_back(std::move(r));
      }
      return out;
    }
    Fraction before = st.heap.lemma_chunk_total();
    auto outs = located(g.loc, ghost_kind_name(g.kind), [&] { return ghost_step(st, g, hint); });
    if (v.lemma_depth_ > 0)
      for (const auto& o : outs)
        if (before < o.state.heap.lemma_chunk_total()) ++v.stats_.lemma_chunk_increases;
    return outs;
  }

  std::vector<Outcome> single(std::optional<SymbolicState> st, Term result) {
    if (!st) return {};
    return {{std::move(*st), std::move(result)}};
  }

  std::vector<Outcome> ghost_step(const SymbolicState& st, const GhostCommand& g, const std::string& hint) {
    auto arg = [&](std::size_t i) { return st.pc.normalize(eval(*g.exprs.at(i), st.env)); };
    switch (g.kind) {
      case GK::GCons: {
        Term value = arg(0);
        Term res = v.fresh(hint.empty() ? "res" : hint);
        SymbolicState next = st;
        next.heap.add(SymChunk{SymChunk::Kind::GhostPointsTo, {res, value}, {}}, Fraction::one());
        ++v.stats_.produced;
        if (!settle(next)) return prune(next), std::vector<Outcome>{};
        return {{std::move(next), res}};
      }
      case GK::GAssign: {
        Term addr = arg(0), value = arg(1);
        auto pre = Assertion::make_exists("old", Assertion::make_ghost_points_to(Fraction::one(), val(addr), gvar("old")));
        Consumed got = consume_top(st, *pre, {});
        auto post = Assertion::make_ghost_points_to(Fraction::one(), val(addr), val(value));
        return single(produce_top(std::move(got.state), *post, {}), Term::unit());
      }
      case GK::HeapUpdate: {
        Term addr = arg(0), value = arg(1);
        auto pre = exists_all({"h", "old"}, Assertion::make_sep(Assertion::make_heap_chunk(gvar("h")),
                                                                 Assertion::make_points_to(Fraction::one(), val(addr),
                                                                                           gvar("old"))));
        Consumed got = consume_top(st, *pre, {});
        Term h = got.witnesses.at("h");
        if (!h.is_set()) fail(FailureKind::IllFormed, "heap chunk value is not a finite map: " + readable(h.str()), &st);
        std::vector<Term> cells;
        for (const auto& cell : h.args()) {
          if (!cell.is(TermKind::Pair)) fail(FailureKind::IllFormed, "malformed heap chunk value " + h.str(), &st);
          Entailment e = got.state.pc.entails_eq(cell.args()[0], addr);
          if (e == Entailment::Unknown)
            fail(FailureKind::IllFormed, "cannot decide heap update address " + readable(addr.str()), &st);
          if (e == Entailment::No) cells.push_back(cell);
        }
        cells.push_back(Term::pair(addr, value));
        auto post = Assertion::make_sep(Assertion::make_heap_chunk(val(Term::set(std::move(cells)))),
                                        Assertion::make_points_to(Fraction::one(), val(addr), val(value)));
        return single(produce_top(std::move(got.state), *post, {}), Term::unit());
      }
      case GK::OpenAtomicSpace: {
        Term name = arg(0), inv = arg(1);
        bool present = false;
        for (const auto& [c, f] : st.heap)
          if (c.kind == SymChunk::Kind::AtomicSpace && st.pc.entails_eq(c.args[0], name) == Entailment::Yes &&
              st.pc.entails_eq(c.args[1], inv) == Entailment::Yes)
            present = true;
        if (!present)
          fail(FailureKind::ConsumeFailure,
               "cannot consume [_]atomic_space(" + readable(name.str() + ", " + inv.str()) + "): no matching chunk",
               &st);
        auto spaces = Assertion::make_exists("S", Assertion::make_atomic_spaces(gvar("S")));
        Consumed got = consume_top(st, *spaces, {});
        Term s = got.witnesses.at("S");
        Term entry = Term::pair(name, inv);
        Entailment side = got.state.pc.entails_not_member(entry, s);
        if (side != Entailment::Yes)
          fail(FailureKind::SideCondition,
               std::string("side condition (V, V') ∉ S ") +
                   (side == Entailment::No ? "violated: " : "cannot be decided: ") + readable(entry.str()) +
                   (side == Entailment::No ? " is already open" : " against " + readable(s.str())),
               &st);
        auto post = Assertion::make_sep(Assertion::make_atomic_spaces(val(Term::set_union(s, Term::set({entry})))),
                                        Assertion::make_pred_app(val(inv)));
        return single(produce_top(std::move(got.state), *post, {}), Term::unit());
      }
      case GK::CloseAtomicSpace: {
        Term name = arg(0), inv = arg(1);
        auto pre = Assertion::make_exists(
            "S", Assertion::make_sep(Assertion::make_atomic_spaces(gvar("S")), Assertion::make_pred_app(val(inv))));
        Consumed got = consume_top(st, *pre, {});
        Term s = got.witnesses.at("S");
        auto post = Assertion::make_atomic_spaces(val(Term::set_diff(s, Term::set({Term::pair(name, inv)}))));
        return single(produce_top(std::move(got.state), *post, {}), Term::unit());
      }
      case GK::CreateAtomicSpace: {
        Term name = arg(0), inv = arg(1);
        Consumed got = consume_top(st, *Assertion::make_pred_app(val(inv)), {});
        auto post = Assertion::make_atomic_space(Fraction::one(), val(name), val(inv));
        return single(produce_top(std::move(got.state), *post, {}), Term::unit());
      }
      case GK::DestroyAtomicSpace: {
        Term name = arg(0), inv = arg(1);
        Consumed got = consume_top(st, *Assertion::make_atomic_space(Fraction::one(), val(name), val(inv)), {});
        return single(produce_top(std::move(got.state), *Assertion::make_pred_app(val(inv)), {}), Term::unit());
      }
      case GK::LemCall: return lemma_call(st, g);
      case GK::ProduceLemPtrChunk: {
        std::vector<Term> targs;
        for (std::size_t i = 0; i < g.exprs.size(); ++i) targs.push_back(arg(i));
        Bindings closing = st.env;
        for (const auto& p : g.params) closing.ghost.erase(p);
        GhostCommandPtr body = subst(g.first, closing);
        v.check_lemma_value(st.pc, g.name, targs, g.params, body, g.loc);
        Term value = st.pc.normalize(Term::lemma(g.params, body));
        std::vector<GhostExprPtr> targ_exprs;
        for (const auto& t : targs) targ_exprs.push_back(val(t));
        auto chunk = Assertion::make_lem_type(val(value), g.name, std::move(targ_exprs));
        return single(produce_top(st, *chunk, {}), value);
      }
      case GK::GLet: break;
    }
    return {};
  }

  std::vector<Outcome> lemma_call(const SymbolicState& st, const GhostCommand& g) {
    Term callee = st.pc.normalize(eval(*g.exprs.at(0), st.env));
    std::vector<Term> args;
    for (std::size_t i = 1; i < g.exprs.size(); ++i) args.push_back(st.pc.normalize(eval(*g.exprs[i], st.env)));
    const SymChunk* chunk = nullptr;
    for (const auto& [c, f] : st.heap)
      if (c.kind == SymChunk::Kind::LemType && st.pc.entails_eq(c.args[0], callee) == Entailment::Yes) {
        chunk = &c;
        break;
      }
    if (!chunk)
      fail(FailureKind::ConsumeFailure, "cannot consume " + readable(callee.str()) + " : _(...): no lemma type chunk",
           &st);
    SymChunk held = *chunk;
    if (st.heap.coefficient(held) < Fraction::one())
      fail(FailureKind::ConsumeFailure, "a full lemma type chunk is required to call " + readable(callee.str()), &st);
    const GhostDecl& d = decl(held.lem_type, GhostDecl::Kind::LemType);
    if (args.size() != d.lem_params.size())
      fail(FailureKind::IllFormed,
           "arity mismatch: " + held.lem_type + " lemmas take " + std::to_string(d.lem_params.size()) +
               " argument(s), got " + std::to_string(args.size()),
           &st);
    Bindings env;
    for (std::size_t i = 0; i < d.params.size(); ++i) env.ghost[d.params[i]] = held.args.at(i + 1);
    for (std::size_t i = 0; i < d.lem_params.size(); ++i) env.ghost[d.lem_params[i]] = args[i];

    SymbolicState next = st;
    next.heap.remove(held, Fraction::one());
    ++v.stats_.consumed;
    Consumed got = consume_top(next, *exists_all(d.forall_params, d.req), env);
    for (const auto& f : d.forall_params) env.ghost[f] = got.witnesses.at(f);
    got.state.heap.add(held, Fraction::one());
    ++v.stats_.produced;
    return single(produce_top(std::move(got.state), *d.ens, env), Term::unit());
  }

  // -- lemma values ---------------------------------------------------------

  void check_lemma(const PathCondition& ctx, const std::string& type, const std::vector<Term>& type_args,
                   const std::vector<std::string>& params, const GhostCommandPtr& body, SourceLoc loc) {
    SymbolicState probe{ctx, {}, {}};
    const GhostDecl& d = located(loc, "produce_lem_ptr_chunk", [&]() -> const GhostDecl& {
      return decl(type, GhostDecl::Kind::LemType);
    });
    if (type_args.size() != d.params.size())
      fail(FailureKind::IllFormed,
           "arity mismatch: lem_type " + type + " expects " + std::to_string(d.params.size()) + " argument(s), got " +
               std::to_string(type_args.size()),
           &probe, loc);
    if (params.size() != d.lem_params.size())
      fail(FailureKind::IllFormed,
           "arity mismatch: lem_type " + type + " lemmas take " + std::to_string(d.lem_params.size()) +
               " parameter(s), got " + std::to_string(params.size()),
           &probe, loc);
    if (!body->is_inner())
      fail(FailureKind::IllFormed, "nested produce_lem_ptr_chunk, create or destroy in a lemma body", &probe, loc);

    struct Depth {
      int& d;
      explicit Depth(int& x) : d(x) { ++d; }
      ~Depth() { --d; }
    } guard(v.lemma_depth_);
    ++v.stats_.lemma_bodies;

    Bindings spec_env, body_env;
    for (std::size_t i = 0; i < d.params.size(); ++i) spec_env.ghost[d.params[i]] = type_args[i];
    for (std::size_t i = 0; i < d.lem_params.size(); ++i) {
      Term s = v.fresh(params[i]);
      spec_env.ghost[d.lem_params[i]] = s;
      body_env.ghost[params[i]] = s;
    }
    for (const auto& f : d.forall_params) spec_env.ghost[f] = v.fresh(f);

    const std::string where = "lemma body for " + type;
    auto start = located(loc, where + ": precondition", [&] { return produce_top({ctx, {}, {}}, *d.req, spec_env); });
    if (!start) return;
    start->env = body_env;
    auto outs = verify_ghost(*start, *body, false, "");
    for (auto& o : outs) {
      Consumed got = located(loc, where + ": postcondition", [&] { return consume_top(o.state, *d.ens, spec_env); });
      leaks(got.state, loc, "in lemma body for " + type + ": ");
    }
  }

  void leaks(const SymbolicState& st, SourceLoc loc, const std::string& where) {
    for (const auto& line : readable_symbols(st.heap.dump_lines())) {
      Diagnostic d;
      d.kind = FailureKind::Leak;
      d.loc = loc;
      d.message = "leaked " + where + line;
      if (v.options_.strict_leaks) {
        d.state = st.dump();
        throw VerifyFailure(std::move(d));
      }
      v.notes_.push_back(std::move(d));
    }
  }

  VerifyReport finish(const std::function<void()>& body) {
    VerifyReport r;
    r.file = v.options_.file;
    try {
      body();
      r.verdict = Verdict::Verified;
    } catch (VerifyFailure& f) {
      r.verdict = Verdict::Failed;
      r.failure = std::move(f.diag);
    }
    r.notes = v.notes_;
    r.stats = v.stats_;
    r.snapshots = v.snapshots_;
    return r;
  }
};

// ---------------------------------------------------------------------------

Verifier::Verifier(const Program& program, VerifyOptions options)
    : program_(program), options_(std::move(options)) {}

Term Verifier::fresh(const std::string& hint) { return Term::symbol(next_symbol_++, hint.empty() ? "s" : hint); }

std::vector<SymbolicState> Verifier::produce(const SymbolicState& st, const Assertion& a) {
  Impl impl{*this};
  auto r = impl.produce_top(st, a, st.env);
  if (!r) return {};
  return {std::move(*r)};
}

Verifier::Consumed Verifier::consume(const SymbolicState& st, const Assertion& a) {
  Impl impl{*this};
  return impl.consume_top(st, a, st.env);
}

std::vector<Verifier::Outcome> Verifier::verify_cmd(const SymbolicState& st, const AnnotatedCommand& c) {
  return Impl{*this}.exec(st, c, "");
}

std::vector<Verifier::Outcome> Verifier::verify_ghost(const SymbolicState& st, const GhostCommand& g, bool outer) {
  return Impl{*this}.verify_ghost(st, g, outer, "");
}

void Verifier::check_lemma_value(const PathCondition& ctx, const std::string& type, const std::vector<Term>& type_args,
                                 const std::vector<std::string>& params, const GhostCommandPtr& body, SourceLoc loc) {
  Impl{*this}.check_lemma(ctx, type, type_args, params, body, loc);
}

VerifyReport Verifier::run() {
  Impl impl{*this};
  return impl.finish([&] {
    SymbolicState st;
    impl.snapshot(st, "entry", program_.main->loc);
    auto outs = impl.exec(st, *program_.main, "");
    for (const auto& o : outs) {
      impl.snapshot(o.state, "exit", program_.main->loc);
      impl.leaks(o.state, program_.main->loc, "at program end: ");
    }
  });
}

VerifyReport Verifier::run(const AnnotatedCommand& c, const Assertion* post) {
  Impl impl{*this};
  return impl.finish([&] {
    SymbolicState st;
    auto outs = impl.exec(st, c, "");
    for (auto& o : outs) {
      if (!post) continue;
      Bindings env = o.state.env;
      env.ghost["res"] = o.result;
      impl.located(c.loc, "postcondition", [&] { return impl.consume_top(o.state, *post, env); });
    }
  });
}

VerifyReport verify_program(const Program& program, const VerifyOptions& options) {
  Verifier v(program, options);
  return v.run();
}

bool check_lemma_value(const Program& program, const Term& value, const std::string& type,
                       const std::vector<Term>& type_args, Diagnostic* diag) {
  if (!value.is(TermKind::LemVal)) {
    if (diag) *diag = {FailureKind::IllFormed, {}, "not a lemma value: " + value.str(), {}};
    return false;
  }
  Verifier v(program);
  try {
    v.check_lemma_value(PathCondition{}, type, type_args, value.params(), value.body(), value.body()->loc);
    return true;
  } catch (VerifyFailure& f) {
    if (diag) *diag = std::move(f.diag);
    return false;
  }
}

// ---------------------------------------------------------------------------

std::string VerifyReport::text() const {
  std::string out = to_string(verdict) + "\n";
  auto where = [&](SourceLoc loc) {
    return (file.empty() ? std::string() : file + ":") + std::to_string(loc.line) + ":" + std::to_string(loc.col);
  };
  if (failure) {
    out += where(failure->loc) + ": error: " + failure->message + "\n";
    if (!failure->state.empty()) {
      out += "  state:\n";
      for (const auto& l : failure->state) out += "    " + l + "\n";
    }
  }
  for (const auto& n : notes) out += where(n.loc) + ": note: " + n.message + "\n";
  out += "stats: branches=" + std::to_string(stats.branches) + " pruned=" + std::to_string(stats.pruned) +
         " produced=" + std::to_string(stats.produced) + " consumed=" + std::to_string(stats.consumed) +
         " lemma_bodies=" + std::to_string(stats.lemma_bodies) + "\n";
  return out;
}

std::string VerifyReport::json() const {
  using nlohmann::json;
  auto diag = [](const Diagnostic& d) {
    return json{{"kind", to_string(d.kind)},
                {"line", d.loc.line},
                {"col", d.loc.col},
                {"message", d.message},
                {"state", d.state}};
  };
  json j;
  j["verdict"] = to_string(verdict);
  j["file"] = file;
  j["failure"] = failure ? diag(*failure) : json(nullptr);
  j["notes"] = json::array();
  for (const auto& n : notes) j["notes"].push_back(diag(n));
  j["stats"] = {{"branches", stats.branches},
                {"pruned", stats.pruned},
                {"produced", stats.produced},
                {"consumed", stats.consumed},
                {"lemma_bodies", stats.lemma_bodies},
                {"lemma_chunk_increases", stats.lemma_chunk_increases}};
  return j.dump(2);
}

}  // namespace cvf
