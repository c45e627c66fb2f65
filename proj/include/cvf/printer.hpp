// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "cvf/ast.hpp"

namespace cvf {

// Concrete-syntax rendering. For every AST the parser can produce,
// parse(pretty(x)) is structurally equal to x.

std::string pretty(const Expr& e);
std::string pretty(const Instr& i);
std::string pretty(const Command& c);
std::string pretty(const GhostExpr& e);
std::string pretty(const Assertion& a);
std::string pretty(const GhostCommand& g);
std::string pretty(const AnnotatedCommand& c);
std::string pretty(const GhostDecl& d);
/// Prints the user declarations (prelude omitted) followed by the main command.
std::string pretty(const Program& p);

}  // namespace cvf
