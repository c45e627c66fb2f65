// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/value.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "cvf/ast.hpp"
#include "cvf/printer.hpp"
#include "cvf/transform.hpp"

namespace cvf {

struct Term::Node {
  TermKind kind = TermKind::Int;
  std::int64_t number = 0;
  std::uint64_t sym = 0;
  std::string name;
  std::vector<Term> args;
  std::vector<std::int64_t> coeffs;
  std::vector<std::string> params;
  GhostCommandPtr body;
  std::string key;                   // LemVal: body with canonical parameter names
  std::vector<std::uint64_t> syms;   // sorted, unique
  bool ground = true;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int kind_rank(TermKind k) { return static_cast<int>(k); }

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in ghost arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in ghost arithmetic");
  return r;
}

struct Linear {
  std::int64_t constant = 0;
  std::map<Term, std::int64_t> atoms;
};

Linear to_linear(const Term& t) {
  Linear l;
  if (t.is(TermKind::Int)) {
    l.constant = t.int_value();
  } else if (t.is(TermKind::Sum)) {
    l.constant = t.int_value();
    for (std::size_t i = 0; i < t.args().size(); ++i) l.atoms[t.args()[i]] = t.coeffs()[i];
  } else {
    l.atoms[t] = 1;
  }
  return l;
}

std::string collapse_whitespace(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == '\n' || c == ' ') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

Term Term::make(Node node) {
  std::vector<std::uint64_t> syms;
  bool ground = node.kind != TermKind::Sym && node.kind != TermKind::Sum && node.kind != TermKind::Union &&
                node.kind != TermKind::Diff;
  if (node.kind == TermKind::Sym) syms.push_back(node.sym);
  for (const auto& a : node.args) {
    syms.insert(syms.end(), a.node_->syms.begin(), a.node_->syms.end());
    ground = ground && a.node_->ground;
  }
  if (node.kind == TermKind::LemVal && node.body) {
    map_values(node.body, [&](const Term& v) {
      syms.insert(syms.end(), v.node_->syms.begin(), v.node_->syms.end());
      ground = ground && v.node_->ground;
      return v;
    });
  }
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  node.syms = std::move(syms);
  node.ground = ground;

  std::size_t h = std::hash<int>{}(kind_rank(node.kind));
  h = mix(h, std::hash<std::int64_t>{}(node.number));
  h = mix(h, std::hash<std::uint64_t>{}(node.sym));
  if (node.kind == TermKind::PredVal) h = mix(h, std::hash<std::string>{}(node.name));
  for (const auto& a : node.args) h = mix(h, a.hash());
  for (auto c : node.coeffs) h = mix(h, std::hash<std::int64_t>{}(c));
  if (node.kind == TermKind::LemVal) h = mix(h, std::hash<std::string>{}(node.key));
  node.hash = h;
  return Term(std::make_shared<const Node>(std::move(node)));
}

Term::Term() : Term(integer(0)) {}

Term Term::integer(std::int64_t z) {
  Node n;
  n.kind = TermKind::Int;
  n.number = z;
  return make(std::move(n));
}

Term Term::unit() {
  Node n;
  n.kind = TermKind::Unit;
  return make(std::move(n));
}

Term Term::pair(Term first, Term second) {
  Node n;
  n.kind = TermKind::Pair;
  n.args = {std::move(first), std::move(second)};
  return make(std::move(n));
}

Term Term::set(std::vector<Term> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  Node n;
  n.kind = TermKind::Set;
  n.args = std::move(elements);
  return make(std::move(n));
}

Term Term::pred(std::string name, std::vector<Term> args) {
  Node n;
  n.kind = TermKind::PredVal;
  n.name = std::move(name);
  n.args = std::move(args);
  return make(std::move(n));
}

Term Term::lemma(std::vector<std::string> params, GhostCommandPtr body) {
  std::map<std::string, std::string> canon;
  for (std::size_t i = 0; i < params.size(); ++i) canon[params[i]] = "%" + std::to_string(i);
  auto renamed = rename_ghost_vars(body, canon);
  Node n;
  n.kind = TermKind::LemVal;
  n.key = std::to_string(params.size()) + ":" + collapse_whitespace(pretty(*renamed));
  n.params = std::move(params);
  n.body = std::move(body);
  return make(std::move(n));
}

Term Term::symbol(std::uint64_t id, std::string hint) {
  Node n;
  n.kind = TermKind::Sym;
  n.sym = id;
  n.name = std::move(hint);
  return make(std::move(n));
}

Term Term::sum(std::int64_t constant, const std::vector<std::pair<Term, std::int64_t>>& atoms) {
  Linear l;
  l.constant = constant;
  for (const auto& [atom, c] : atoms) {
    if (c == 0) continue;
    Linear part = to_linear(atom);
    l.constant = checked_add(l.constant, checked_mul(part.constant, c));
    for (const auto& [a, k] : part.atoms) {
      auto& slot = l.atoms[a];
      slot = checked_add(slot, checked_mul(k, c));
    }
  }
  Node n;
  n.kind = TermKind::Sum;
  n.number = l.constant;
  for (const auto& [atom, c] : l.atoms) {
    if (c == 0) continue;
    n.args.push_back(atom);
    n.coeffs.push_back(c);
  }
  if (n.args.empty()) return integer(l.constant);
  if (n.args.size() == 1 && n.coeffs[0] == 1 && l.constant == 0) return n.args[0];
  return make(std::move(n));
}

Term Term::add(const Term& a, const Term& b) { return sum(0, {{a, 1}, {b, 1}}); }

Term Term::sub(const Term& a, const Term& b) { return sum(0, {{a, 1}, {b, -1}}); }

Term Term::scale(const Term& a, std::int64_t k) { return sum(0, {{a, k}}); }

Term Term::set_union(const Term& a, const Term& b) {
  if (a.is_set() && b.is_set()) {
    std::vector<Term> all = a.args();
    all.insert(all.end(), b.args().begin(), b.args().end());
    return set(std::move(all));
  }
  if (a.is_set() && a.args().empty()) return b;
  if (b.is_set() && b.args().empty()) return a;
  if (a == b) return a;
  Node n;
  n.kind = TermKind::Union;
  n.args = a < b ? std::vector<Term>{a, b} : std::vector<Term>{b, a};
  return make(std::move(n));
}

Term Term::set_diff(const Term& a, const Term& b) {
  if (a.is_set() && a.args().empty()) return a;
  if (b.is_set() && b.args().empty()) return a;
  if (a == b) return set({});
  if (a.is_set() && b.is_set()) {
    std::vector<Term> kept;
    bool resolved = true;
    for (const auto& e : a.args()) {
      bool removed = false, unknown = false;
      for (const auto& f : b.args()) {
        if (e == f) {
          removed = true;
          break;
        }
        if (!distinct(e, f)) unknown = true;
      }
      if (removed) continue;
      if (unknown) {
        resolved = false;
        break;
      }
      kept.push_back(e);
    }
    if (resolved) return set(std::move(kept));
  }
  Node n;
  n.kind = TermKind::Diff;
  n.args = {a, b};
  return make(std::move(n));
}

TermKind Term::kind() const { return node_->kind; }
bool Term::is_ground() const { return node_->ground; }
std::int64_t Term::int_value() const { return node_->number; }
std::uint64_t Term::sym_id() const { return node_->sym; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }
const std::vector<std::int64_t>& Term::coeffs() const { return node_->coeffs; }
const std::vector<std::string>& Term::params() const { return node_->params; }
const GhostCommandPtr& Term::body() const { return node_->body; }

bool Term::mentions(std::uint64_t id) const {
  return std::binary_search(node_->syms.begin(), node_->syms.end(), id);
}

void Term::collect_symbols(std::vector<std::uint64_t>& out) const {
  out.insert(out.end(), node_->syms.begin(), node_->syms.end());
}

Term Term::rewrite(const std::function<std::optional<Term>(const Term&)>& f) const {
  if (auto r = f(*this)) return *r;
  if (node_->syms.empty() && node_->ground) {
    // Ground terms can still be rewritten by callers that match on values,
    // so only skip the walk for leaves.
    if (node_->args.empty() && node_->kind != TermKind::LemVal) return *this;
  }
  auto map_args = [&] {
    std::vector<Term> out;
    out.reserve(node_->args.size());
    for (const auto& a : node_->args) out.push_back(a.rewrite(f));
    return out;
  };
  switch (node_->kind) {
    case TermKind::Int:
    case TermKind::Unit:
    case TermKind::Sym:
      return *this;
    case TermKind::Pair: {
      auto a = map_args();
      return pair(a[0], a[1]);
    }
    case TermKind::Set:
      return set(map_args());
    case TermKind::PredVal:
      return pred(node_->name, map_args());
    case TermKind::LemVal:
      return lemma(node_->params, map_values(node_->body, [&](const Term& v) { return v.rewrite(f); }));
    case TermKind::Sum: {
      auto a = map_args();
      std::vector<std::pair<Term, std::int64_t>> parts;
      for (std::size_t i = 0; i < a.size(); ++i) parts.emplace_back(a[i], node_->coeffs[i]);
      return sum(node_->number, parts);
    }
    case TermKind::Union: {
      auto a = map_args();
      return set_union(a[0], a[1]);
    }
    case TermKind::Diff: {
      auto a = map_args();
      return set_diff(a[0], a[1]);
    }
  }
  return *this;
}

namespace {

bool arithmetic(const Term& t) { return t.is(TermKind::Int) || t.is(TermKind::Sum); }

bool value_constructor(TermKind k) {
  return k == TermKind::Int || k == TermKind::Unit || k == TermKind::Pair || k == TermKind::PredVal ||
         k == TermKind::LemVal;
}

}  // namespace

bool Term::distinct(const Term& a, const Term& b) {
  if (a == b) return false;
  if (a.is_ground() && b.is_ground()) return true;
  if (arithmetic(a) || arithmetic(b)) {
    Term d = sub(a, b);
    if (d.is_int()) return d.int_value() != 0;
    if (arithmetic(a) && arithmetic(b)) return false;
  }
  TermKind ka = a.kind(), kb = b.kind();
  if (ka == TermKind::Sum) ka = TermKind::Int;
  if (kb == TermKind::Sum) kb = TermKind::Int;
  bool ca = value_constructor(ka) || (ka == TermKind::Set && a.is_ground());
  bool cb = value_constructor(kb) || (kb == TermKind::Set && b.is_ground());
  if (ca && cb && ka != kb) return true;
  if (ka != kb) return false;
  switch (ka) {
    case TermKind::Pair:
      return distinct(a.args()[0], b.args()[0]) || distinct(a.args()[1], b.args()[1]);
    case TermKind::PredVal:
      if (a.name() != b.name() || a.args().size() != b.args().size()) return true;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (distinct(a.args()[i], b.args()[i])) return true;
      return false;
    default:
      return false;
  }
}

std::size_t Term::hash() const { return node_->hash; }

std::string Term::str() const {
  const Node& n = *node_;
  auto list = [](const std::vector<Term>& ts) {
    std::string out;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (i) out += ", ";
      out += ts[i].str();
    }
    return out;
  };
  switch (n.kind) {
    case TermKind::Int:
      return std::to_string(n.number);
    case TermKind::Unit:
      return "()";
    case TermKind::Pair:
      return "(" + n.args[0].str() + ", " + n.args[1].str() + ")";
    case TermKind::Set:
      return "{" + list(n.args) + "}";
    case TermKind::PredVal:
      return n.name + "(" + list(n.args) + ")";
    case TermKind::LemVal: {
      std::string ps;
      for (std::size_t i = 0; i < n.params.size(); ++i) ps += (i ? ", " : "") + n.params[i];
      return "lem(" + ps + ") { " + collapse_whitespace(pretty(*n.body)) + " }";
    }
    case TermKind::Sym:
      return n.name + "#" + std::to_string(n.sym);
    case TermKind::Sum: {
      std::string out;
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        std::int64_t c = n.coeffs[i];
        std::string atom = n.args[i].str();
        if (i == 0) {
          out += c == 1 ? atom : c == -1 ? "-" + atom : std::to_string(c) + "*" + atom;
        } else if (c < 0) {
          out += " - " + (c == -1 ? atom : std::to_string(-c) + "*" + atom);
        } else {
          out += " + " + (c == 1 ? atom : std::to_string(c) + "*" + atom);
        }
      }
      if (n.number > 0) out += " + " + std::to_string(n.number);
      if (n.number < 0) out += " - " + std::to_string(-n.number);
      return out;
    }
    case TermKind::Union:
      return "union(" + list(n.args) + ")";
    case TermKind::Diff:
      return "diff(" + list(n.args) + ")";
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (auto c = kind_rank(x.kind) <=> kind_rank(y.kind); c != 0) return c;
  switch (x.kind) {
    case TermKind::Int:
      return x.number <=> y.number;
    case TermKind::Unit:
      return std::strong_ordering::equal;
    case TermKind::Sym:
      return x.sym <=> y.sym;
    case TermKind::LemVal:
      if (auto c = x.key.compare(y.key); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      return std::strong_ordering::equal;
    case TermKind::Sum:
      if (auto c = x.number <=> y.number; c != 0) return c;
      if (auto c = x.coeffs <=> y.coeffs; c != 0) return c;
      break;
    case TermKind::PredVal:
      if (auto c = x.name.compare(y.name); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      break;
    default:
      break;
  }
  return std::lexicographical_compare_three_way(x.args.begin(), x.args.end(), y.args.begin(), y.args.end());
}

}  // namespace cvf
