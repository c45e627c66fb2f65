// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvf {

struct GhostCommand;
using GhostCommandPtr = std::shared_ptr<const GhostCommand>;

enum class TermKind : std::uint8_t {
  Int,
  Unit,
  Pair,
  Set,
  PredVal,
  LemVal,
  // Non-ground forms below; only the verifier builds them.
  Sym,
  Sum,
  Union,
  Diff,
};

/// Immutable ghost value or symbolic term.
///
/// The ground subset (Int, Unit, Pair, Set, PredVal, LemVal with a ground
/// body) is exactly the set of ghost values. Symbols, linear sums with
/// symbolic atoms and unresolved set operations only arise during symbolic
/// execution. All constructors normalize: sums are kept as
/// `const + sum(coeff * atom)` with atoms sorted, sets as sorted
/// duplicate-free sequences, lemma values are compared up to renaming of
/// their parameters.
class Term {
 public:
  Term();  // the integer 0

  static Term integer(std::int64_t z);
  static Term unit();
  static Term pair(Term first, Term second);
  static Term set(std::vector<Term> elements);
  static Term pred(std::string name, std::vector<Term> args);
  static Term lemma(std::vector<std::string> params, GhostCommandPtr body);
  static Term symbol(std::uint64_t id, std::string hint);

  /// Linear integer combination `constant + sum(coeff * atom)`, normalized.
  static Term sum(std::int64_t constant, const std::vector<std::pair<Term, std::int64_t>>& atoms);
  static Term add(const Term& a, const Term& b);
  static Term sub(const Term& a, const Term& b);
  static Term scale(const Term& a, std::int64_t k);
  static Term set_union(const Term& a, const Term& b);
  static Term set_diff(const Term& a, const Term& b);

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }
  bool is_ground() const;
  bool is_int() const { return is(TermKind::Int); }
  bool is_set() const { return is(TermKind::Set); }

  std::int64_t int_value() const;           // Int, and the constant part of Sum
  std::uint64_t sym_id() const;             // Sym
  const std::string& name() const;          // PredVal name, Sym hint
  const std::vector<Term>& args() const;    // Pair, Set, PredVal, Sum atoms, Union/Diff operands
  const std::vector<std::int64_t>& coeffs() const;  // Sum coefficients, parallel to args()
  const std::vector<std::string>& params() const;   // LemVal
  const GhostCommandPtr& body() const;              // LemVal

  /// True when the term mentions symbol `id` anywhere (lemma bodies included).
  bool mentions(std::uint64_t id) const;
  /// Collects every symbol id mentioned by the term.
  void collect_symbols(std::vector<std::uint64_t>& out) const;

  /// Top-down rebuild: `f` may replace any subterm; replaced subterms are not
  /// revisited. Rebuilt nodes go through the normalizing constructors.
  Term rewrite(const std::function<std::optional<Term>(const Term&)>& f) const;

  /// Syntactic disequality: true only when `a` and `b` denote different
  /// values under every assignment of their symbols.
  static bool distinct(const Term& a, const Term& b);

  std::size_t hash() const;
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

  struct Node;

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(Node node);
  std::shared_ptr<const Node> node_;
};

/// Ghost values are the ground terms.
using GhostValue = Term;

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace cvf
