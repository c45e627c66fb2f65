// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/transform.hpp"

#include <set>
#include <stdexcept>

namespace cvf {

namespace {

struct Scope {
  std::set<std::string> prog;
  std::set<std::string> ghost;
};

// Called on ProgVar, GhostVar and Value leaves; nullptr keeps the leaf.
using LeafFn = std::function<GhostExprPtr(const GhostExpr&, const Scope&)>;

class Rewriter {
 public:
  explicit Rewriter(LeafFn leaf) : leaf_(std::move(leaf)) {}

  GhostExprPtr expr(const GhostExprPtr& e, const Scope& s) const {
    switch (e->kind) {
      case GhostExprKind::Value:
      case GhostExprKind::ProgVar:
      case GhostExprKind::GhostVar: {
        auto r = leaf_(*e, s);
        return r ? r : e;
      }
      default:
        break;
    }
    if (e->args.empty()) return e;
    auto copy = std::make_shared<GhostExpr>(*e);
    for (auto& a : copy->args) a = expr(a, s);
    return copy;
  }

  AssertionPtr assertion(const AssertionPtr& a, const Scope& s) const {
    if (!a) return a;
    auto copy = std::make_shared<Assertion>(*a);
    for (auto& e : copy->exprs) e = expr(e, s);
    if (a->kind == AssertionKind::Exists) {
      Scope inner = s;
      inner.ghost.insert(a->name);
      copy->left = assertion(a->left, inner);
    } else {
      copy->left = assertion(a->left, s);
      copy->right = assertion(a->right, s);
    }
    return copy;
  }

  GhostCommandPtr ghost(const GhostCommandPtr& g, const Scope& s) const {
    if (!g) return g;
    auto copy = std::make_shared<GhostCommand>(*g);
    for (auto& e : copy->exprs) e = expr(e, s);
    if (g->kind == GhostCommandKind::GLet) {
      copy->first = ghost(g->first, s);
      Scope inner = s;
      inner.ghost.insert(g->name);
      copy->second = ghost(g->second, inner);
    } else if (g->kind == GhostCommandKind::ProduceLemPtrChunk) {
      Scope inner = s;
      inner.ghost.insert(g->params.begin(), g->params.end());
      copy->first = ghost(g->first, inner);
    }
    return copy;
  }

  AnnotatedCommandPtr annotated(const AnnotatedCommandPtr& c, const Scope& s,
                                const std::function<Expr(const Expr&, const Scope&)>& concrete) const {
    if (!c) return c;
    auto copy = std::make_shared<AnnotatedCommand>(*c);
    switch (c->kind) {
      case AnnotatedKind::Expr:
        copy->expr = concrete(c->expr, s);
        break;
      case AnnotatedKind::Instr:
        copy->instr.a = concrete(c->instr.a, s);
        copy->instr.b = concrete(c->instr.b, s);
        break;
      case AnnotatedKind::Let: {
        copy->first = annotated(c->first, s, concrete);
        Scope inner = s;
        inner.prog.insert(c->var);
        copy->second = annotated(c->second, inner, concrete);
        break;
      }
      case AnnotatedKind::Par:
        copy->pre_first = assertion(c->pre_first, s);
        copy->pre_second = assertion(c->pre_second, s);
        copy->first = annotated(c->first, s, concrete);
        copy->second = annotated(c->second, s, concrete);
        break;
      case AnnotatedKind::GLet: {
        copy->ghost = ghost(c->ghost, s);
        Scope inner = s;
        inner.ghost.insert(c->var);
        copy->first = annotated(c->first, inner, concrete);
        break;
      }
    }
    return copy;
  }

 private:
  LeafFn leaf_;
};

LeafFn binding_leaf(const Bindings& b) {
  return [&b](const GhostExpr& e, const Scope& s) -> GhostExprPtr {
    if (e.kind == GhostExprKind::ProgVar && !s.prog.count(e.name)) {
      auto it = b.prog.find(e.name);
      if (it != b.prog.end()) return GhostExpr::make_value(it->second, e.loc);
    } else if (e.kind == GhostExprKind::GhostVar && !s.ghost.count(e.name)) {
      auto it = b.ghost.find(e.name);
      if (it != b.ghost.end()) return GhostExpr::make_value(it->second, e.loc);
    }
    return nullptr;
  };
}

}  // namespace

CommandPtr subst(const CommandPtr& c, const std::string& x, std::int64_t v) {
  return subst(c, std::map<std::string, std::int64_t>{{x, v}});
}

CommandPtr subst(const CommandPtr& c, const std::map<std::string, std::int64_t>& values) {
  if (values.empty()) return c;
  auto sub_expr = [&values](const Expr& e) {
    if (e.kind == Expr::Kind::Var) {
      auto it = values.find(e.name);
      if (it != values.end()) return Expr::lit(it->second);
    }
    return e;
  };
  switch (c->kind) {
    case CommandKind::Expr:
      return Command::make_expr(sub_expr(c->expr), c->loc);
    case CommandKind::Instr: {
      Instr i = c->instr;
      i.a = sub_expr(i.a);
      i.b = sub_expr(i.b);
      return Command::make_instr(i, c->loc);
    }
    case CommandKind::Let: {
      auto bound = subst(c->first, values);
      if (values.count(c->var)) {
        auto inner = values;
        inner.erase(c->var);
        return Command::make_let(c->var, bound, subst(c->second, inner), c->loc);
      }
      return Command::make_let(c->var, bound, subst(c->second, values), c->loc);
    }
    case CommandKind::Par:
      return Command::make_par(subst(c->first, values), subst(c->second, values), c->loc);
  }
  return c;
}

GhostExprPtr subst(const GhostExprPtr& e, const Bindings& b) {
  if (b.empty()) return e;
  return Rewriter(binding_leaf(b)).expr(e, {});
}

AssertionPtr subst(const AssertionPtr& a, const Bindings& b) {
  if (b.empty()) return a;
  return Rewriter(binding_leaf(b)).assertion(a, {});
}

GhostCommandPtr subst(const GhostCommandPtr& g, const Bindings& b) {
  if (b.empty()) return g;
  return Rewriter(binding_leaf(b)).ghost(g, {});
}

AnnotatedCommandPtr subst(const AnnotatedCommandPtr& c, const Bindings& b) {
  if (b.empty()) return c;
  auto concrete = [&b](const Expr& e, const Scope& s) {
    if (e.kind != Expr::Kind::Var || s.prog.count(e.name)) return e;
    auto it = b.prog.find(e.name);
    if (it == b.prog.end()) return e;
    if (!it->second.is_int())
      throw std::invalid_argument("program variable " + e.name + " bound to a non-integer value");
    return Expr::lit(it->second.int_value());
  };
  return Rewriter(binding_leaf(b)).annotated(c, {}, concrete);
}

GhostCommandPtr rename_ghost_vars(const GhostCommandPtr& g, const std::map<std::string, std::string>& names) {
  Rewriter r([&names](const GhostExpr& e, const Scope& s) -> GhostExprPtr {
    if (e.kind != GhostExprKind::GhostVar || s.ghost.count(e.name)) return nullptr;
    auto it = names.find(e.name);
    return it == names.end() ? nullptr : GhostExpr::make_ghost_var(it->second, e.loc);
  });
  return r.ghost(g, {});
}

GhostCommandPtr map_values(const GhostCommandPtr& g, const std::function<Term(const Term&)>& f) {
  Rewriter r([&f](const GhostExpr& e, const Scope&) -> GhostExprPtr {
    if (e.kind != GhostExprKind::Value) return nullptr;
    return GhostExpr::make_value(f(e.value), e.loc);
  });
  return r.ghost(g, {});
}

AssertionPtr map_values(const AssertionPtr& a, const std::function<Term(const Term&)>& f) {
  Rewriter r([&f](const GhostExpr& e, const Scope&) -> GhostExprPtr {
    if (e.kind != GhostExprKind::Value) return nullptr;
    return GhostExpr::make_value(f(e.value), e.loc);
  });
  return r.assertion(a, {});
}

CommandPtr erase(const AnnotatedCommandPtr& c) {
  switch (c->kind) {
    case AnnotatedKind::Expr:
      return Command::make_expr(c->expr, c->loc);
    case AnnotatedKind::Instr:
      return Command::make_instr(c->instr, c->loc);
    case AnnotatedKind::Let:
      return Command::make_let(c->var, erase(c->first), erase(c->second), c->loc);
    case AnnotatedKind::Par:
      return Command::make_par(erase(c->first), erase(c->second), c->loc);
    case AnnotatedKind::GLet:
      return erase(c->first);
  }
  return nullptr;
}

bool is_ghost_free(const AnnotatedCommand& c) { return count_ghost_nodes(c) == 0; }

std::size_t count_ghost_nodes(const AnnotatedCommand& c) {
  switch (c.kind) {
    case AnnotatedKind::Expr:
    case AnnotatedKind::Instr:
      return 0;
    case AnnotatedKind::Let:
      return count_ghost_nodes(*c.first) + count_ghost_nodes(*c.second);
    case AnnotatedKind::Par:
      return (c.pre_first ? 1 : 0) + (c.pre_second ? 1 : 0) + count_ghost_nodes(*c.first) +
             count_ghost_nodes(*c.second);
    case AnnotatedKind::GLet:
      return 1 + count_ghost_nodes(*c.first);
  }
  return 0;
}

}  // namespace cvf
