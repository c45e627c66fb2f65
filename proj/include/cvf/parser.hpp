// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cvf/ast.hpp"

namespace cvf {

struct ParseError : std::runtime_error {
  ParseError(int line_, int col_, const std::string& message_);
  int line;
  int col;
  std::string message;
};

struct ParseOptions {
  /// Accept `heap(E)` assertions and `E <-h E` commands.
  bool allow_internal = false;
};

/// Parses declarations followed by one annotated command. The prelude
/// declarations are loaded first.
Program parse_program(std::string_view text, const ParseOptions& options = {});

/// Parses a program of the plain language (no declarations, no ghost code).
CommandPtr parse_command(std::string_view text);

/// Names visible to a standalone assertion.
struct AssertionScope {
  std::vector<std::string> prog;
  std::vector<std::string> ghost;
  /// Makes the reserved result name `res` usable.
  bool allow_res = false;
  bool allow_internal = false;
};

/// Parses an assertion against the declarations of `program`.
AssertionPtr parse_assertion(std::string_view text, const Program& program, const AssertionScope& scope);

/// Source text of the built-in declarations.
const std::string& prelude_source();

/// The built-in declarations, parsed once.
const std::vector<GhostDecl>& prelude_decls();

}  // namespace cvf
