// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/path_condition.hpp"

namespace cvf {

namespace {

bool arithmetic(const Term& t) { return t.is(TermKind::Int) || t.is(TermKind::Sum); }

Entailment flip(Entailment e) {
  switch (e) {
    case Entailment::Yes: return Entailment::No;
    case Entailment::No: return Entailment::Yes;
    case Entailment::Unknown: return Entailment::Unknown;
  }
  return Entailment::Unknown;
}

bool same_pair(const Term& p, const Term& q, const Term& a, const Term& b) {
  return (p == a && q == b) || (p == b && q == a);
}

}  // namespace

std::string to_string(Entailment e) {
  switch (e) {
    case Entailment::Yes: return "Yes";
    case Entailment::No: return "No";
    case Entailment::Unknown: return "Unknown";
  }
  return "?";
}

Term PathCondition::normalize(const Term& t) const {
  if (solved_.empty()) return t;
  return t.rewrite([this](const Term& s) -> std::optional<Term> {
    if (!s.is(TermKind::Sym)) return std::nullopt;
    auto it = solved_.find(s.sym_id());
    if (it == solved_.end()) return std::nullopt;
    return it->second.second;
  });
}

bool PathCondition::assume(const Fact& f) {
  log_.push_back(f);
  if (f.kind == Fact::Kind::Eq) {
    add_eq(f.lhs, f.rhs);
  } else {
    add_neq(f.lhs, f.rhs);
  }
  return !inconsistent_;
}

void PathCondition::bind(const Term& sym, const Term& value) {
  std::uint64_t id = sym.sym_id();
  for (auto& [k, entry] : solved_) {
    if (!entry.second.mentions(id)) continue;
    entry.second = entry.second.rewrite([&](const Term& s) -> std::optional<Term> {
      if (s.is(TermKind::Sym) && s.sym_id() == id) return value;
      return std::nullopt;
    });
  }
  solved_.emplace(id, std::make_pair(sym, value));
  recheck();
}

void PathCondition::recheck() {
  auto residual = std::move(residual_);
  auto neqs = std::move(neqs_);
  residual_.clear();
  neqs_.clear();
  for (const auto& [a, b] : residual) add_eq(a, b);
  for (const auto& [a, b] : neqs) add_neq(a, b);
}

void PathCondition::add_eq(const Term& lhs, const Term& rhs) {
  if (inconsistent_) return;
  Term a = normalize(lhs), b = normalize(rhs);
  if (a == b) return;
  if (Term::distinct(a, b)) {
    inconsistent_ = true;
    return;
  }
  if (a.is(TermKind::Sym) && !b.mentions(a.sym_id())) return bind(a, b);
  if (b.is(TermKind::Sym) && !a.mentions(b.sym_id())) return bind(b, a);
  if (arithmetic(a) || arithmetic(b)) {
    Term d = Term::sub(a, b);
    if (d.is(TermKind::Sum)) {
      for (std::size_t i = 0; i < d.args().size(); ++i) {
        const Term& s = d.args()[i];
        std::int64_t c = d.coeffs()[i];
        if (!s.is(TermKind::Sym) || (c != 1 && c != -1)) continue;
        Term rest = Term::sub(d, Term::scale(s, c));
        if (rest.mentions(s.sym_id())) continue;
        return bind(s, c == 1 ? Term::scale(rest, -1) : rest);
      }
    }
  }
  if (a.kind() == b.kind() && (a.is(TermKind::Pair) || a.is(TermKind::PredVal)) &&
      a.args().size() == b.args().size()) {
    for (std::size_t i = 0; i < a.args().size(); ++i) add_eq(a.args()[i], b.args()[i]);
    return;
  }
  residual_.emplace_back(a, b);
}

void PathCondition::add_neq(const Term& lhs, const Term& rhs) {
  if (inconsistent_) return;
  Term a = normalize(lhs), b = normalize(rhs);
  if (a == b) {
    inconsistent_ = true;
    return;
  }
  if (Term::distinct(a, b)) return;
  neqs_.emplace_back(a, b);
}

Entailment PathCondition::entails_eq(const Term& lhs, const Term& rhs) const {
  if (inconsistent_) return Entailment::Yes;
  Term a = normalize(lhs), b = normalize(rhs);
  if (a == b) return Entailment::Yes;
  if (Term::distinct(a, b)) return Entailment::No;
  for (const auto& [p, q] : neqs_)
    if (same_pair(normalize(p), normalize(q), a, b)) return Entailment::No;
  for (const auto& [p, q] : residual_)
    if (same_pair(normalize(p), normalize(q), a, b)) return Entailment::Yes;
  if (arithmetic(a) || arithmetic(b) || a.is(TermKind::Sym) || b.is(TermKind::Sym)) {
    Term d = Term::sub(a, b);
    Term nd = Term::scale(d, -1);
    for (const auto& [p, q] : residual_) {
      Term r = Term::sub(normalize(p), normalize(q));
      if (r == d || r == nd) return Entailment::Yes;
    }
    for (const auto& [p, q] : neqs_) {
      Term r = Term::sub(normalize(p), normalize(q));
      if (r == d || r == nd) return Entailment::No;
    }
  }
  if (a.kind() == b.kind() && (a.is(TermKind::Pair) || a.is(TermKind::PredVal)) &&
      a.args().size() == b.args().size() && a.name() == b.name()) {
    bool all = true;
    for (std::size_t i = 0; i < a.args().size(); ++i) {
      Entailment e = entails_eq(a.args()[i], b.args()[i]);
      if (e == Entailment::No) return Entailment::No;
      if (e != Entailment::Yes) all = false;
    }
    if (all) return Entailment::Yes;
  }
  return Entailment::Unknown;
}

Entailment PathCondition::entails_neq(const Term& a, const Term& b) const { return flip(entails_eq(a, b)); }

Entailment PathCondition::entails_not_member(const Term& elem, const Term& set) const {
  if (inconsistent_) return Entailment::Yes;
  Term e = normalize(elem), s = normalize(set);
  switch (s.kind()) {
    case TermKind::Set: {
      bool unknown = false;
      for (const auto& x : s.args()) {
        Entailment r = entails_eq(e, x);
        if (r == Entailment::Yes) return Entailment::No;
        if (r == Entailment::Unknown) unknown = true;
      }
      return unknown ? Entailment::Unknown : Entailment::Yes;
    }
    case TermKind::Union: {
      Entailment l = entails_not_member(e, s.args()[0]);
      Entailment r = entails_not_member(e, s.args()[1]);
      if (l == Entailment::No || r == Entailment::No) return Entailment::No;
      if (l == Entailment::Yes && r == Entailment::Yes) return Entailment::Yes;
      return Entailment::Unknown;
    }
    case TermKind::Diff:
      if (entails_not_member(e, s.args()[0]) == Entailment::Yes) return Entailment::Yes;
      return Entailment::Unknown;
    default:
      return Entailment::Unknown;
  }
}

std::vector<std::string> PathCondition::dump() const {
  std::vector<std::string> out;
  if (inconsistent_) out.push_back("false");
  for (const auto& [id, entry] : solved_) out.push_back(entry.first.str() + " = " + entry.second.str());
  for (const auto& [a, b] : residual_) out.push_back(a.str() + " = " + b.str());
  for (const auto& [a, b] : neqs_) out.push_back(a.str() + " != " + b.str());
  return out;
}

}  // namespace cvf
