// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cvf/value.hpp"

namespace cvf {

enum class Entailment : std::uint8_t { Yes, No, Unknown };

std::string to_string(Entailment e);

struct Fact {
  enum class Kind : std::uint8_t { Eq, Neq };
  Kind kind = Kind::Eq;
  Term lhs;
  Term rhs;
};

/// Facts assumed along one symbolic branch.
///
/// Equalities are kept in solved form: a substitution from symbols to
/// normalized terms, obtained by constructor decomposition and by solving
/// linear integer equations for a symbol with a unit coefficient. What
/// cannot be solved is kept as a residual equation. Disequalities are kept
/// as given and rechecked whenever the substitution grows.
class PathCondition {
 public:
  /// Applies the substitution until no solved symbol remains.
  Term normalize(const Term& t) const;

  /// Adds a fact; returns false once the condition has become inconsistent.
  bool assume(const Fact& f);
  bool assume_eq(const Term& a, const Term& b) { return assume({Fact::Kind::Eq, a, b}); }
  bool assume_neq(const Term& a, const Term& b) { return assume({Fact::Kind::Neq, a, b}); }

  Entailment entails_eq(const Term& a, const Term& b) const;
  Entailment entails_neq(const Term& a, const Term& b) const;
  /// e is not an element of the set S.
  Entailment entails_not_member(const Term& e, const Term& s) const;

  bool consistent() const { return !inconsistent_; }

  /// Every fact passed to assume, in order (used to merge branches).
  const std::vector<Fact>& log() const { return log_; }

  /// One line per solved symbol, residual equation and disequality.
  std::vector<std::string> dump() const;

 private:
  void add_eq(const Term& a, const Term& b);
  void add_neq(const Term& a, const Term& b);
  void bind(const Term& sym, const Term& value);
  void recheck();

  std::map<std::uint64_t, std::pair<Term, Term>> solved_;  // id -> (symbol, value)
  std::vector<std::pair<Term, Term>> residual_;
  std::vector<std::pair<Term, Term>> neqs_;
  std::vector<Fact> log_;
  bool inconsistent_ = false;
};

}  // namespace cvf
