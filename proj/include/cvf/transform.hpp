// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "cvf/ast.hpp"

namespace cvf {

/// Values for free variables, one map per namespace.
struct Bindings {
  std::map<std::string, Term> prog;
  std::map<std::string, Term> ghost;

  bool empty() const { return prog.empty() && ghost.empty(); }
};

// Simultaneous substitution of closed values for free variables. Binders
// (let, glet, exists, lemma parameters) shadow the substituted names.
// Commands can only hold integers, so program-variable bindings reaching a
// concrete expression must be Int terms (std::invalid_argument otherwise).

CommandPtr subst(const CommandPtr& c, const std::string& x, std::int64_t v);
CommandPtr subst(const CommandPtr& c, const std::map<std::string, std::int64_t>& values);
GhostExprPtr subst(const GhostExprPtr& e, const Bindings& b);
AssertionPtr subst(const AssertionPtr& a, const Bindings& b);
GhostCommandPtr subst(const GhostCommandPtr& g, const Bindings& b);
AnnotatedCommandPtr subst(const AnnotatedCommandPtr& c, const Bindings& b);

/// Renames free ghost variables (used to compare lemma values up to
/// renaming of their parameters).
GhostCommandPtr rename_ghost_vars(const GhostCommandPtr& g, const std::map<std::string, std::string>& names);

/// Applies `f` to every embedded Value term.
GhostCommandPtr map_values(const GhostCommandPtr& g, const std::function<Term(const Term&)>& f);
AssertionPtr map_values(const AssertionPtr& a, const std::function<Term(const Term&)>& f);

/// Removes every ghost construct: GLet nodes and Par branch preconditions.
CommandPtr erase(const AnnotatedCommandPtr& c);

/// True when the annotated command carries no ghost construct at all.
bool is_ghost_free(const AnnotatedCommand& c);

/// Counts GLet nodes and Par preconditions (zero after erasure).
std::size_t count_ghost_nodes(const AnnotatedCommand& c);

}  // namespace cvf
