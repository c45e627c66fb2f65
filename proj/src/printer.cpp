// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/printer.hpp"

#include <sstream>

namespace cvf {

namespace {

std::string indent(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

std::string join_exprs(const std::vector<GhostExprPtr>& es, std::size_t from = 0) {
  std::vector<std::string> parts;
  for (std::size_t i = from; i < es.size(); ++i) parts.push_back(pretty(*es[i]));
  return join(parts);
}

std::string coeff_prefix(const Fraction& c) {
  if (c == Fraction::one()) return "";
  return "[" + c.str() + "]";
}

// --- commands --------------------------------------------------------------

void print_command(const Command& c, int depth, std::ostringstream& out);

void print_command_head(const Command& c, int depth, std::ostringstream& out) {
  if (c.kind == CommandKind::Let) {
    out << "(";
    print_command(c, depth, out);
    out << ")";
  } else {
    print_command(c, depth, out);
  }
}

void print_command(const Command& c, int depth, std::ostringstream& out) {
  switch (c.kind) {
    case CommandKind::Expr:
      out << pretty(c.expr);
      return;
    case CommandKind::Instr:
      out << pretty(c.instr);
      return;
    case CommandKind::Let:
      if (c.var == kSeqVar) {
        print_command_head(*c.first, depth, out);
        out << ";\n" << indent(depth);
      } else {
        out << "let " << c.var << " = ";
        print_command_head(*c.first, depth, out);
        out << " in\n" << indent(depth);
      }
      print_command(*c.second, depth, out);
      return;
    case CommandKind::Par:
      out << "par {\n" << indent(depth + 1);
      print_command(*c.first, depth + 1, out);
      out << "\n" << indent(depth) << "} {\n" << indent(depth + 1);
      print_command(*c.second, depth + 1, out);
      out << "\n" << indent(depth) << "}";
      return;
  }
}

// --- ghost commands --------------------------------------------------------

void print_ghost(const GhostCommand& g, int depth, std::ostringstream& out);

// A ghost instruction position: sequences and glets need braces.
void print_ghost_atom(const GhostCommand& g, int depth, std::ostringstream& out) {
  if (g.kind == GhostCommandKind::GLet) {
    out << "{\n" << indent(depth + 1);
    print_ghost(g, depth + 1, out);
    out << "\n" << indent(depth) << "}";
  } else {
    print_ghost(g, depth, out);
  }
}

void print_ghost(const GhostCommand& g, int depth, std::ostringstream& out) {
  switch (g.kind) {
    case GhostCommandKind::LemCall: {
      const auto& callee = *g.exprs[0];
      bool simple = callee.kind == GhostExprKind::GhostVar || callee.kind == GhostExprKind::ProgVar;
      out << (simple ? pretty(callee) : "(" + pretty(callee) + ")") << "(" << join_exprs(g.exprs, 1) << ")";
      return;
    }
    case GhostCommandKind::GCons:
      out << "gcons(" << pretty(*g.exprs[0]) << ")";
      return;
    case GhostCommandKind::GAssign:
      out << "*" << pretty(*g.exprs[0]) << " <-g " << pretty(*g.exprs[1]);
      return;
    case GhostCommandKind::OpenAtomicSpace:
      out << "open_atomic_space(" << join_exprs(g.exprs) << ")";
      return;
    case GhostCommandKind::CloseAtomicSpace:
      out << "close_atomic_space(" << join_exprs(g.exprs) << ")";
      return;
    case GhostCommandKind::HeapUpdate:
      out << pretty(*g.exprs[0]) << " <-h " << pretty(*g.exprs[1]);
      return;
    case GhostCommandKind::GLet:
      if (g.name == kSeqVar) {
        print_ghost_atom(*g.first, depth, out);
        out << ";\n" << indent(depth);
      } else {
        out << "glet " << g.name << " = ";
        print_ghost_atom(*g.first, depth, out);
        out << " in\n" << indent(depth);
      }
      print_ghost(*g.second, depth, out);
      return;
    case GhostCommandKind::ProduceLemPtrChunk:
      out << "produce_lem_ptr_chunk " << g.name << "(" << join_exprs(g.exprs) << ")(" << join(g.params)
          << ") {\n"
          << indent(depth + 1);
      print_ghost(*g.first, depth + 1, out);
      out << "\n" << indent(depth) << "}";
      return;
    case GhostCommandKind::CreateAtomicSpace:
      out << "create_atomic_space(" << join_exprs(g.exprs) << ")";
      return;
    case GhostCommandKind::DestroyAtomicSpace:
      out << "destroy_atomic_space(" << join_exprs(g.exprs) << ")";
      return;
  }
}

// Statement-level rendering of an outer ghost command: lemma calls, ghost
// assignments, heap updates and sequences need the `ghost` prefix.
void print_ghost_statement(const GhostCommand& g, int depth, std::ostringstream& out) {
  switch (g.kind) {
    case GhostCommandKind::LemCall:
    case GhostCommandKind::GAssign:
    case GhostCommandKind::HeapUpdate:
    case GhostCommandKind::GLet:
      out << "ghost ";
      break;
    default:
      break;
  }
  print_ghost_atom(g, depth, out);
}

// --- annotated commands ----------------------------------------------------

void print_annotated(const AnnotatedCommand& c, int depth, std::ostringstream& out);

void print_annotated_head(const AnnotatedCommand& c, int depth, std::ostringstream& out) {
  if (c.kind == AnnotatedKind::Let || c.kind == AnnotatedKind::GLet) {
    out << "(";
    print_annotated(c, depth, out);
    out << ")";
  } else {
    print_annotated(c, depth, out);
  }
}

void print_annotated(const AnnotatedCommand& c, int depth, std::ostringstream& out) {
  switch (c.kind) {
    case AnnotatedKind::Expr:
      out << pretty(c.expr);
      return;
    case AnnotatedKind::Instr:
      out << pretty(c.instr);
      return;
    case AnnotatedKind::Let:
      if (c.var == kSeqVar) {
        print_annotated_head(*c.first, depth, out);
        out << ";\n" << indent(depth);
      } else {
        out << "let " << c.var << " = ";
        print_annotated_head(*c.first, depth, out);
        out << " in\n" << indent(depth);
      }
      print_annotated(*c.second, depth, out);
      return;
    case AnnotatedKind::Par:
      out << "par ";
      if (c.pre_first) out << "pre { " << pretty(*c.pre_first) << " } ";
      out << "{\n" << indent(depth + 1);
      print_annotated(*c.first, depth + 1, out);
      out << "\n" << indent(depth) << "} ";
      if (c.pre_second) out << "pre { " << pretty(*c.pre_second) << " } ";
      out << "{\n" << indent(depth + 1);
      print_annotated(*c.second, depth + 1, out);
      out << "\n" << indent(depth) << "}";
      return;
    case AnnotatedKind::GLet:
      if (c.var == kSeqVar) {
        print_ghost_statement(*c.ghost, depth, out);
        out << ";\n" << indent(depth);
      } else {
        out << "glet " << c.var << " = ";
        print_ghost_atom(*c.ghost, depth, out);
        out << " in\n" << indent(depth);
      }
      print_annotated(*c.first, depth, out);
      return;
  }
}

void print_assertion(const Assertion& a, std::ostringstream& out) {
  switch (a.kind) {
    case AssertionKind::PointsTo:
      out << coeff_prefix(a.coeff) << pretty(*a.exprs[0]) << " |-> " << pretty(*a.exprs[1]);
      return;
    case AssertionKind::GhostPointsTo:
      out << coeff_prefix(a.coeff) << pretty(*a.exprs[0]) << " |->g " << pretty(*a.exprs[1]);
      return;
    case AssertionKind::PredApp:
      out << pretty(*a.exprs[0]) << "()";
      return;
    case AssertionKind::AtomicSpace:
      out << coeff_prefix(a.coeff) << "atomic_space(" << join_exprs(a.exprs) << ")";
      return;
    case AssertionKind::LemType:
      out << pretty(*a.exprs[0]) << " : " << a.name << "(" << join_exprs(a.exprs, 1) << ")";
      return;
    case AssertionKind::Exists: {
      out << "exists " << a.name;
      const Assertion* body = a.left.get();
      while (body->kind == AssertionKind::Exists) {
        out << ", " << body->name;
        body = body->left.get();
      }
      out << ". ";
      print_assertion(*body, out);
      return;
    }
    case AssertionKind::AtomicSpaces:
      out << "atomic_spaces(" << pretty(*a.exprs[0]) << ")";
      return;
    case AssertionKind::HeapChunk:
      out << "heap(" << pretty(*a.exprs[0]) << ")";
      return;
    case AssertionKind::SepConj: {
      bool wrap = a.left->kind == AssertionKind::SepConj || a.left->kind == AssertionKind::Exists;
      if (wrap) out << "(";
      print_assertion(*a.left, out);
      if (wrap) out << ")";
      out << " * ";
      print_assertion(*a.right, out);
      return;
    }
    case AssertionKind::Emp:
      out << "emp";
      return;
    case AssertionKind::PureEq:
      out << pretty(*a.exprs[0]) << " == " << pretty(*a.exprs[1]);
      return;
  }
}

}  // namespace

std::string pretty(const Expr& e) {
  return e.kind == Expr::Kind::Int ? std::to_string(e.value) : e.name;
}

std::string pretty(const Instr& i) {
  switch (i.kind) {
    case InstrKind::Cons:
      return "cons(" + pretty(i.a) + ")";
    case InstrKind::Faa:
      return "faa(" + pretty(i.a) + ", " + pretty(i.b) + ")";
    case InstrKind::Deref:
      return "*" + pretty(i.a);
    case InstrKind::AssertEq:
      return "assert " + pretty(i.a) + " == " + pretty(i.b);
  }
  return {};
}

std::string pretty(const Command& c) {
  std::ostringstream out;
  print_command(c, 0, out);
  return out.str();
}

std::string pretty(const GhostExpr& e) {
  switch (e.kind) {
    case GhostExprKind::Value:
      return e.value.str();
    case GhostExprKind::ProgVar:
    case GhostExprKind::GhostVar:
      return e.name;
    case GhostExprKind::Add: {
      std::string rhs = pretty(*e.args[1]);
      if (e.args[1]->kind == GhostExprKind::Add) rhs = "(" + rhs + ")";
      return pretty(*e.args[0]) + " + " + rhs;
    }
    case GhostExprKind::PredCtorApp:
      return e.name + "(" + join_exprs(e.args) + ")";
    case GhostExprKind::Pair:
      return "(" + pretty(*e.args[0]) + ", " + pretty(*e.args[1]) + ")";
    case GhostExprKind::Unit:
      return "()";
    case GhostExprKind::EmptySet:
      return "{}";
    case GhostExprKind::Singleton:
      return "{" + pretty(*e.args[0]) + "}";
    case GhostExprKind::Union:
      return "union(" + join_exprs(e.args) + ")";
    case GhostExprKind::Diff:
      return "diff(" + join_exprs(e.args) + ")";
  }
  return {};
}

std::string pretty(const Assertion& a) {
  std::ostringstream out;
  print_assertion(a, out);
  return out.str();
}

std::string pretty(const GhostCommand& g) {
  std::ostringstream out;
  print_ghost(g, 0, out);
  return out.str();
}

std::string pretty(const AnnotatedCommand& c) {
  std::ostringstream out;
  print_annotated(c, 0, out);
  return out.str();
}

std::string pretty(const GhostDecl& d) {
  std::ostringstream out;
  if (d.kind == GhostDecl::Kind::PredCtor) {
    out << "pred_ctor " << d.name << "(" << join(d.params) << ")() =\n  " << pretty(*d.body) << ";";
  } else {
    out << "lem_type " << d.name << "(" << join(d.params) << ") = lem(" << join(d.lem_params) << ")";
    if (!d.forall_params.empty()) out << "\n  forall " << join(d.forall_params);
    out << "\n  req " << pretty(*d.req) << "\n  ens " << pretty(*d.ens) << ";";
  }
  return out.str();
}

std::string pretty(const Program& p) {
  std::ostringstream out;
  for (std::size_t i = p.prelude_count; i < p.decls.size(); ++i) out << pretty(p.decls[i]) << "\n\n";
  out << pretty(*p.main) << "\n";
  return out.str();
}

}  // namespace cvf
