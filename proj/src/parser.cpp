// Copyright 2026 The cvf Authors
// SPDX-License-Identifier: Apache-2.0

#include "cvf/parser.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "cvf/transform.hpp"

namespace cvf {

ParseError::ParseError(int line_, int col_, const std::string& message_)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + message_),
      line(line_),
      col(col_),
      message(message_) {}

namespace {

// --- lexer -------------------------------------------------------------------

enum class Tok : std::uint8_t {
  Ident,
  Int,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Dot,
  Colon,
  Star,
  Plus,
  Minus,
  Slash,
  Assign,    // =
  EqEq,      // ==
  PointsTo,  // |->
  GPointsTo, // |->g
  GAssign,   // <-g
  HAssign,   // <-h
  ParBar,    // ||
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Dot: return "'.'";
    case Tok::Colon: return "':'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Slash: return "'/'";
    case Tok::Assign: return "'='";
    case Tok::EqEq: return "'=='";
    case Tok::PointsTo: return "'|->'";
    case Tok::GPointsTo: return "'|->g'";
    case Tok::GAssign: return "'<-g'";
    case Tok::HAssign: return "'<-h'";
    case Tok::ParBar: return "'||'";
    case Tok::End: return "end of input";
  }
  return "?";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view s) { return text.substr(i, s.size()) == s; };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (starts("//")) {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(text.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(text.substr(i, j - i));
      if (t.text.size() > 18) throw ParseError(line, col, "integer literal too large");
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    struct Op {
      const char* text;
      Tok kind;
    };
    static const Op ops[] = {
        {"|->", Tok::PointsTo}, {"<-g", Tok::GAssign}, {"<-h", Tok::HAssign}, {"==", Tok::EqEq},
        {"||", Tok::ParBar},    {"(", Tok::LParen},    {")", Tok::RParen},    {"{", Tok::LBrace},
        {"}", Tok::RBrace},     {"[", Tok::LBracket},  {"]", Tok::RBracket},  {",", Tok::Comma},
        {";", Tok::Semi},       {".", Tok::Dot},       {":", Tok::Colon},     {"*", Tok::Star},
        {"+", Tok::Plus},       {"-", Tok::Minus},     {"/", Tok::Slash},     {"=", Tok::Assign},
    };
    bool matched = false;
    for (const auto& op : ops) {
      std::string_view s(op.text);
      if (!starts(s)) continue;
      t.kind = op.kind;
      t.text = op.text;
      advance(s.size());
      if (t.kind == Tok::PointsTo && i < text.size() && text[i] == 'g' &&
          (i + 1 >= text.size() || !ident_char(text[i + 1]))) {
        t.kind = Tok::GPointsTo;
        t.text = "|->g";
        advance(1);
      }
      matched = true;
      break;
    }
    if (!matched) throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {
      "let",    "in",     "cons",   "faa",    "FAA",    "assert",        "par",
      "ghost",  "glet",   "gcons",  "open_atomic_space",  "close_atomic_space",
      "create_atomic_space",  "destroy_atomic_space",   "produce_lem_ptr_chunk",
      "pred_ctor", "lem_type", "forall", "req",    "ens",           "exists",
      "emp",    "union",  "diff",   "atomic_space",       "atomic_spaces", "heap",
  };
  return k;
}

constexpr const char* kRes = "res";

// --- parser ------------------------------------------------------------------

enum class Ns : std::uint8_t { Prog, Ghost };

struct DeclInfo {
  GhostDecl::Kind kind;
  std::size_t arity = 0;
  std::size_t lem_arity = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::map<std::string, DeclInfo> decls, bool allow_internal)
      : toks_(std::move(toks)), decls_(std::move(decls)), allow_internal_(allow_internal) {}

  // Registers declaration headers appearing before the main command so that
  // bodies may refer to declarations further down.
  void prescan(const std::set<std::string>& reserved_names) {
    std::size_t i = 0;
    auto at = [&](std::size_t k) -> const Token& { return toks_[std::min(k, toks_.size() - 1)]; };
    auto count_params = [&](std::size_t& k) -> std::optional<std::size_t> {
      if (at(k).kind != Tok::LParen) return std::nullopt;
      ++k;
      std::size_t n = 0;
      while (at(k).kind == Tok::Ident) {
        ++n;
        ++k;
        if (at(k).kind == Tok::Comma) ++k;
      }
      if (at(k).kind != Tok::RParen) return std::nullopt;
      ++k;
      return n;
    };
    while (at(i).kind == Tok::Ident && (at(i).text == "pred_ctor" || at(i).text == "lem_type")) {
      bool pred = at(i).text == "pred_ctor";
      const Token& name = at(i + 1);
      std::size_t k = i + 2;
      if (name.kind != Tok::Ident) return;
      if (reserved_names.count(name.text))
        throw ParseError(name.loc.line, name.loc.col, "redeclaration of built-in declaration " + name.text);
      if (decls_.count(name.text))
        throw ParseError(name.loc.line, name.loc.col, "duplicate declaration of " + name.text);
      auto arity = count_params(k);
      if (!arity) return;
      DeclInfo info{pred ? GhostDecl::Kind::PredCtor : GhostDecl::Kind::LemType, *arity, 0};
      if (!pred) {
        if (at(k).kind != Tok::Assign || at(k + 1).text != "lem") return;
        k += 2;
        auto lem_arity = count_params(k);
        if (!lem_arity) return;
        info.lem_arity = *lem_arity;
      }
      decls_[name.text] = info;
      // Skip to the terminating ';' at nesting depth zero.
      int depth = 0;
      while (at(k).kind != Tok::End) {
        Tok t = at(k).kind;
        if (t == Tok::LParen || t == Tok::LBrace || t == Tok::LBracket) ++depth;
        if (t == Tok::RParen || t == Tok::RBrace || t == Tok::RBracket) --depth;
        ++k;
        if (t == Tok::Semi && depth == 0) break;
      }
      i = k;
    }
  }

  std::vector<GhostDecl> parse_decls() {
    std::vector<GhostDecl> out;
    while (is_kw("pred_ctor") || is_kw("lem_type")) out.push_back(parse_decl());
    return out;
  }

  AnnotatedCommandPtr parse_main() {
    if (peek().kind == Tok::End) fail(peek(), "expected a command");
    auto c = parse_seq();
    expect(Tok::End, "end of program");
    return c;
  }

  AssertionPtr parse_standalone_assertion(const AssertionScope& scope) {
    for (const auto& x : scope.prog) bind(x, Ns::Prog, peek());
    for (const auto& g : scope.ghost) bind(g, Ns::Ghost, peek());
    allow_res_ = scope.allow_res;
    if (allow_res_) bind(kRes, Ns::Ghost, peek());
    auto a = parse_assertion();
    expect(Tok::End, "end of assertion");
    return a;
  }

 private:
  // -- token helpers

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
  bool is_kw(const char* kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == kw;
  }
  bool accept(Tok k) {
    if (!is(k)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.loc.line, t.loc.col, msg);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!is(k)) {
      std::string found = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      fail(peek(), std::string("expected ") + describe(k) + " (" + what + "), found " + found);
    }
    return next();
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) {
      std::string found = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      fail(peek(), std::string("expected '") + kw + "', found " + found);
    }
    next();
  }
  const Token& expect_name(const std::string& what) {
    const Token& t = expect(Tok::Ident, what);
    if (keywords().count(t.text)) fail(t, "keyword '" + t.text + "' cannot be used as " + what);
    return t;
  }

  // -- scopes

  struct Binding {
    std::string name;
    Ns ns;
  };

  std::optional<Ns> lookup(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return it->ns;
    return std::nullopt;
  }

  bool visible_in(const std::string& name, Ns ns) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name && it->ns == ns) return true;
    return false;
  }

  void bind(const std::string& name, Ns ns, const Token& at) {
    if (name == kSeqVar) {
      scope_.push_back({name, ns});
      return;
    }
    if (decls_.count(name)) fail(at, "variable " + name + " clashes with a declaration name");
    Ns other = ns == Ns::Prog ? Ns::Ghost : Ns::Prog;
    if (visible_in(name, other))
      fail(at, std::string(ns == Ns::Prog ? "program" : "ghost") + " variable " + name + " clashes with " +
                   (ns == Ns::Prog ? "ghost" : "program") + " variable of the same name");
    scope_.push_back({name, ns});
  }

  std::string binder_name(Ns ns) {
    const Token& t = expect_name(ns == Ns::Prog ? "variable name" : "ghost variable name");
    if (t.text == kRes) fail(t, "'res' is reserved");
    return t.text;
  }

  struct ScopeMark {
    Parser& p;
    std::size_t size;
    explicit ScopeMark(Parser& parser) : p(parser), size(parser.scope_.size()) {}
    ~ScopeMark() { p.scope_.resize(size); }
  };

  // -- declarations

  std::vector<std::string> param_list(const char* what) {
    std::vector<std::string> out;
    expect(Tok::LParen, what);
    if (!is(Tok::RParen)) {
      do {
        const Token& t = expect_name("parameter name");
        if (t.text == kRes) fail(t, "'res' is reserved");
        out.push_back(t.text);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, what);
    return out;
  }

  void check_distinct(const std::vector<std::string>& names, const Token& at) {
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second) fail(at, "duplicate parameter " + n);
  }

  GhostDecl parse_decl() {
    const Token& kw = next();
    GhostDecl d;
    d.loc = kw.loc;
    const Token& name = expect_name("declaration name");
    d.name = name.text;
    ScopeMark mark(*this);
    if (kw.text == "pred_ctor") {
      d.kind = GhostDecl::Kind::PredCtor;
      d.params = param_list("predicate constructor parameters");
      check_distinct(d.params, name);
      expect(Tok::LParen, "'()' after predicate constructor parameters");
      expect(Tok::RParen, "'()' after predicate constructor parameters");
      expect(Tok::Assign, "predicate constructor body");
      for (const auto& p : d.params) bind(p, Ns::Ghost, name);
      d.body = parse_assertion();
    } else {
      d.kind = GhostDecl::Kind::LemType;
      d.params = param_list("lemma type parameters");
      expect(Tok::Assign, "lemma type definition");
      expect_kw("lem");
      d.lem_params = param_list("lemma parameters");
      if (is_kw("forall")) {
        next();
        do {
          d.forall_params.push_back(expect_name("forall parameter").text);
        } while (accept(Tok::Comma));
      }
      std::vector<std::string> all = d.params;
      all.insert(all.end(), d.lem_params.begin(), d.lem_params.end());
      all.insert(all.end(), d.forall_params.begin(), d.forall_params.end());
      check_distinct(all, name);
      for (const auto& p : all) bind(p, Ns::Ghost, name);
      expect_kw("req");
      d.req = parse_assertion();
      expect_kw("ens");
      d.ens = parse_assertion();
    }
    expect(Tok::Semi, "end of declaration");
    return d;
  }

  // -- ghost expressions

  GhostExprPtr parse_gexpr() {
    auto e = parse_gatom();
    while (is(Tok::Plus)) {
      SourceLoc loc = next().loc;
      e = GhostExpr::make_add(e, parse_gatom(), loc);
    }
    return e;
  }

  std::vector<GhostExprPtr> gexpr_args(const char* what) {
    std::vector<GhostExprPtr> out;
    expect(Tok::LParen, what);
    if (!is(Tok::RParen)) {
      do {
        out.push_back(parse_gexpr());
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, what);
    return out;
  }

  std::int64_t int_literal() {
    bool neg = accept(Tok::Minus);
    const Token& t = expect(Tok::Int, "integer literal");
    std::int64_t v = std::stoll(t.text);
    return neg ? -v : v;
  }

  GhostExprPtr parse_gatom() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case Tok::Int:
      case Tok::Minus:
        return GhostExpr::make_int(int_literal(), loc);
      case Tok::LParen: {
        next();
        if (accept(Tok::RParen)) return GhostExpr::make_unit(loc);
        auto first = parse_gexpr();
        if (accept(Tok::Comma)) {
          auto second = parse_gexpr();
          expect(Tok::RParen, "end of pair");
          return GhostExpr::make_pair(first, second, loc);
        }
        expect(Tok::RParen, "closing parenthesis");
        return first;
      }
      case Tok::LBrace: {
        next();
        if (accept(Tok::RBrace)) return GhostExpr::make_empty_set(loc);
        auto e = parse_gexpr();
        expect(Tok::RBrace, "end of singleton set");
        return GhostExpr::make_singleton(e, loc);
      }
      case Tok::Ident:
        break;
      default:
        fail(t, std::string("expected a ghost expression, found ") + describe(t.kind));
    }
    if (t.text == "union" || t.text == "diff") {
      next();
      auto args = gexpr_args("set operation operands");
      if (args.size() != 2) fail(t, t.text + " takes two operands");
      return t.text == "union" ? GhostExpr::make_union(args[0], args[1], loc)
                               : GhostExpr::make_diff(args[0], args[1], loc);
    }
    if (keywords().count(t.text)) fail(t, "unexpected keyword '" + t.text + "' in ghost expression");
    next();
    auto decl = decls_.find(t.text);
    if (decl != decls_.end()) {
      if (decl->second.kind != GhostDecl::Kind::PredCtor)
        fail(t, t.text + " is a lemma type, not a predicate constructor");
      auto args = gexpr_args("predicate constructor arguments");
      if (args.size() != decl->second.arity)
        fail(t, "arity mismatch: " + t.text + " expects " + std::to_string(decl->second.arity) +
                    " arguments, got " + std::to_string(args.size()));
      return GhostExpr::make_pred(t.text, std::move(args), loc);
    }
    if (t.text == kRes && !allow_res_) fail(t, "'res' is reserved");
    if (t.text == kSeqVar) fail(t, "'_' cannot be referenced");
    auto ns = lookup(t.text);
    if (!ns) fail(t, "unbound identifier " + t.text);
    return *ns == Ns::Prog ? GhostExpr::make_prog_var(t.text, loc) : GhostExpr::make_ghost_var(t.text, loc);
  }

  // -- assertions

  AssertionPtr parse_assertion() {
    auto left = parse_assertion_unary();
    if (is(Tok::Star)) {
      SourceLoc loc = next().loc;
      return Assertion::make_sep(left, parse_assertion(), loc);
    }
    return left;
  }

  std::optional<Fraction> coefficient() {
    if (!is(Tok::LBracket)) return std::nullopt;
    const Token& open = next();
    const Token& num = expect(Tok::Int, "coefficient numerator");
    std::string text = num.text;
    if (accept(Tok::Slash)) text += "/" + expect(Tok::Int, "coefficient denominator").text;
    expect(Tok::RBracket, "end of coefficient");
    auto f = Fraction::parse(text);
    if (!f || f->is_zero()) fail(open, "coefficient must be a positive fraction");
    return f;
  }

  AssertionPtr parse_assertion_unary() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (is_kw("exists")) {
      next();
      std::vector<std::string> names;
      do {
        names.push_back(binder_name(Ns::Ghost));
      } while (accept(Tok::Comma));
      expect(Tok::Dot, "'.' after existential variables");
      ScopeMark mark(*this);
      for (const auto& n : names) bind(n, Ns::Ghost, t);
      auto body = parse_assertion();
      for (auto it = names.rbegin(); it != names.rend(); ++it) body = Assertion::make_exists(*it, body, loc);
      return body;
    }
    if (is_kw("emp")) {
      next();
      return Assertion::make_emp(loc);
    }
    if (is_kw("atomic_spaces")) {
      next();
      auto args = gexpr_args("atomic_spaces operand");
      if (args.size() != 1) fail(t, "atomic_spaces takes one operand");
      return Assertion::make_atomic_spaces(args[0], loc);
    }
    if (is_kw("heap")) {
      if (!allow_internal_) fail(t, "internal form in source: heap(...) assertion");
      next();
      auto args = gexpr_args("heap operand");
      if (args.size() != 1) fail(t, "heap takes one operand");
      return Assertion::make_heap_chunk(args[0], loc);
    }
    auto coeff = coefficient();
    if (is_kw("atomic_space")) {
      next();
      auto args = gexpr_args("atomic_space operands");
      if (args.size() != 2) fail(t, "atomic_space takes a name and an invariant");
      return Assertion::make_atomic_space(coeff.value_or(Fraction::one()), args[0], args[1], loc);
    }
    if (!coeff && is(Tok::LParen)) {
      // Either a parenthesized assertion or a ghost expression in parentheses.
      std::size_t save = pos_;
      try {
        next();
        auto inner = parse_assertion();
        expect(Tok::RParen, "closing parenthesis");
        return inner;
      } catch (const ParseError& first) {
        pos_ = save;
        try {
          return expression_led(std::nullopt, loc);
        } catch (const ParseError& second) {
          if (first.line > second.line || (first.line == second.line && first.col > second.col)) throw first;
          throw;
        }
      }
    }
    return expression_led(coeff, loc);
  }

  AssertionPtr expression_led(std::optional<Fraction> coeff, SourceLoc loc) {
    auto e = parse_gexpr();
    const Token& op = peek();
    switch (op.kind) {
      case Tok::PointsTo:
        next();
        return Assertion::make_points_to(coeff.value_or(Fraction::one()), e, parse_gexpr(), loc);
      case Tok::GPointsTo:
        next();
        return Assertion::make_ghost_points_to(coeff.value_or(Fraction::one()), e, parse_gexpr(), loc);
      default:
        break;
    }
    if (coeff) fail(op, "a coefficient must precede a points-to or atomic_space assertion");
    if (op.kind == Tok::EqEq) {
      next();
      return Assertion::make_pure_eq(e, parse_gexpr(), loc);
    }
    if (op.kind == Tok::Colon) {
      next();
      const Token& type = expect_name("lemma type name");
      auto decl = decls_.find(type.text);
      if (decl == decls_.end() || decl->second.kind != GhostDecl::Kind::LemType)
        fail(type, "unknown lemma type " + type.text);
      auto args = gexpr_args("lemma type arguments");
      if (args.size() != decl->second.arity)
        fail(type, "arity mismatch: " + type.text + " expects " + std::to_string(decl->second.arity) +
                       " arguments, got " + std::to_string(args.size()));
      return Assertion::make_lem_type(e, type.text, std::move(args), loc);
    }
    if (op.kind == Tok::LParen && is(Tok::RParen, 1)) {
      next();
      next();
      return Assertion::make_pred_app(e, loc);
    }
    std::string found = op.kind == Tok::End ? "end of input" : "'" + op.text + "'";
    fail(op, "expected '|->', '|->g', '==', ':' or '()' after ghost expression, found " + found);
  }

  // -- ghost commands

  enum class GhostLevel : std::uint8_t { Inner, Outer };

  GhostCommandPtr two_arg(GhostCommandKind kind, const Token& kw) {
    next();
    auto args = gexpr_args("operands");
    if (args.size() != 2) fail(kw, kw.text + " takes a name and an invariant");
    return GhostCommand::make(kind, std::move(args), kw.loc);
  }

  // One ghost instruction, `{ inner sequence }`, or (outer level only) one of
  // the outer ghost commands.
  GhostCommandPtr parse_gatom_cmd(GhostLevel level) {
    const Token& t = peek();
    if (is(Tok::LBrace)) {
      next();
      auto body = parse_gseq();
      expect(Tok::RBrace, "end of ghost block");
      return body;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "gcons") {
        next();
        auto args = gexpr_args("gcons operand");
        if (args.size() != 1) fail(t, "gcons takes one operand");
        return GhostCommand::make(GhostCommandKind::GCons, std::move(args), t.loc);
      }
      if (t.text == "open_atomic_space") return two_arg(GhostCommandKind::OpenAtomicSpace, t);
      if (t.text == "close_atomic_space") return two_arg(GhostCommandKind::CloseAtomicSpace, t);
      if (t.text == "create_atomic_space" || t.text == "destroy_atomic_space" ||
          t.text == "produce_lem_ptr_chunk") {
        if (level == GhostLevel::Inner) fail(t, t.text + " is not allowed inside a lemma body or ghost block");
        if (t.text == "create_atomic_space") return two_arg(GhostCommandKind::CreateAtomicSpace, t);
        if (t.text == "destroy_atomic_space") return two_arg(GhostCommandKind::DestroyAtomicSpace, t);
        return parse_produce();
      }
    }
    if (is(Tok::Star)) {
      next();
      auto addr = parse_gexpr();
      expect(Tok::GAssign, "'<-g' in ghost assignment");
      auto val = parse_gexpr();
      return GhostCommand::make(GhostCommandKind::GAssign, {addr, val}, t.loc);
    }
    auto e = parse_gexpr();
    if (is(Tok::HAssign)) {
      const Token& op = next();
      if (!allow_internal_) fail(op, "internal form in source: '<-h' heap chunk update");
      auto val = parse_gexpr();
      return GhostCommand::make(GhostCommandKind::HeapUpdate, {e, val}, t.loc);
    }
    if (!is(Tok::LParen)) fail(peek(), "expected '(' for a lemma call");
    auto args = gexpr_args("lemma call arguments");
    args.insert(args.begin(), e);
    return GhostCommand::make(GhostCommandKind::LemCall, std::move(args), t.loc);
  }

  GhostCommandPtr parse_produce() {
    const Token& kw = next();
    const Token& type = expect_name("lemma type name");
    auto decl = decls_.find(type.text);
    if (decl == decls_.end() || decl->second.kind != GhostDecl::Kind::LemType)
      fail(type, "unknown lemma type " + type.text);
    auto args = gexpr_args("lemma type arguments");
    if (args.size() != decl->second.arity)
      fail(type, "arity mismatch: " + type.text + " expects " + std::to_string(decl->second.arity) +
                     " arguments, got " + std::to_string(args.size()));
    auto params = param_list("lemma parameters");
    check_distinct(params, type);
    if (params.size() != decl->second.lem_arity)
      fail(type, "arity mismatch: " + type.text + " lemmas take " + std::to_string(decl->second.lem_arity) +
                     " parameters, got " + std::to_string(params.size()));
    ScopeMark mark(*this);
    for (const auto& p : params) bind(p, Ns::Ghost, type);
    expect(Tok::LBrace, "lemma body");
    auto body = parse_gseq();
    expect(Tok::RBrace, "end of lemma body");
    return GhostCommand::make_produce(type.text, std::move(args), std::move(params), body, kw.loc);
  }

  // Inner ghost sequence: `glet g = G in G`, `G; G`, trailing ';' allowed.
  GhostCommandPtr parse_gseq() {
    const Token& t = peek();
    if (is_kw("glet")) {
      next();
      std::string g = binder_name(Ns::Ghost);
      expect(Tok::Assign, "'=' in glet");
      auto bound = parse_gatom_cmd(GhostLevel::Inner);
      expect_kw("in");
      ScopeMark mark(*this);
      bind(g, Ns::Ghost, t);
      return GhostCommand::make_glet(g, bound, parse_gseq(), t.loc);
    }
    auto head = parse_gatom_cmd(GhostLevel::Inner);
    if (accept(Tok::Semi)) {
      if (is(Tok::RBrace)) return head;
      return GhostCommand::make_glet(kSeqVar, head, parse_gseq(), t.loc);
    }
    return head;
  }

  // -- annotated commands

  Expr parse_pexpr() {
    const Token& t = peek();
    if (is(Tok::Int) || is(Tok::Minus)) return Expr::lit(int_literal());
    const Token& name = expect(Tok::Ident, "expression");
    if (keywords().count(name.text)) fail(name, "unexpected keyword '" + name.text + "'");
    if (name.text == kRes) fail(name, "'res' is reserved");
    if (name.text == kSeqVar) fail(name, "'_' cannot be referenced");
    auto ns = lookup(name.text);
    if (!ns) fail(t, "unbound variable " + name.text);
    if (*ns != Ns::Prog) fail(t, "ghost variable " + name.text + " used in real code");
    return Expr::var(name.text);
  }

  std::optional<AssertionPtr> branch_pre() {
    if (!(is_kw("pre") && is(Tok::LBrace, 1))) return std::nullopt;
    next();
    next();
    auto a = parse_assertion();
    expect(Tok::RBrace, "end of branch precondition");
    return a;
  }

  AnnotatedCommandPtr braced_seq(const char* what) {
    expect(Tok::LBrace, what);
    auto c = parse_seq();
    expect(Tok::RBrace, what);
    return c;
  }

  AnnotatedCommandPtr parse_item() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (is(Tok::LParen)) {
      next();
      auto c = parse_seq();
      if (accept(Tok::ParBar)) {
        auto right = parse_seq();
        expect(Tok::RParen, "end of parallel composition");
        return AnnotatedCommand::make_par(nullptr, c, nullptr, right, loc);
      }
      expect(Tok::RParen, "closing parenthesis");
      return c;
    }
    if (is(Tok::Star)) {
      next();
      return AnnotatedCommand::make_instr({InstrKind::Deref, parse_pexpr(), {}}, loc);
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "cons") {
        next();
        expect(Tok::LParen, "cons operand");
        Expr e = parse_pexpr();
        expect(Tok::RParen, "cons operand");
        return AnnotatedCommand::make_instr({InstrKind::Cons, e, {}}, loc);
      }
      if (t.text == "faa" || t.text == "FAA") {
        next();
        expect(Tok::LParen, "faa operands");
        Expr a = parse_pexpr();
        expect(Tok::Comma, "faa operands");
        Expr b = parse_pexpr();
        expect(Tok::RParen, "faa operands");
        return AnnotatedCommand::make_instr({InstrKind::Faa, a, b}, loc);
      }
      if (t.text == "assert") {
        next();
        Expr a = parse_pexpr();
        if (!accept(Tok::EqEq)) expect(Tok::Assign, "'==' in assert");
        Expr b = parse_pexpr();
        return AnnotatedCommand::make_instr({InstrKind::AssertEq, a, b}, loc);
      }
      if (t.text == "par") {
        next();
        auto pre1 = branch_pre();
        auto c1 = braced_seq("first parallel branch");
        auto pre2 = branch_pre();
        auto c2 = braced_seq("second parallel branch");
        return AnnotatedCommand::make_par(pre1.value_or(nullptr), c1, pre2.value_or(nullptr), c2, loc);
      }
    }
    return AnnotatedCommand::make_expr(parse_pexpr(), loc);
  }

  bool at_keyword_ghost_statement() const {
    if (!is(Tok::Ident)) return false;
    const std::string& s = peek().text;
    return s == "gcons" || s == "open_atomic_space" || s == "close_atomic_space" || s == "create_atomic_space" ||
           s == "destroy_atomic_space" || s == "produce_lem_ptr_chunk";
  }

  AnnotatedCommandPtr ghost_statement_tail(const GhostCommandPtr& g, const Token& start) {
    expect(Tok::Semi, "';' after ghost statement");
    if (is(Tok::End) || is(Tok::RBrace) || is(Tok::RParen) || is(Tok::ParBar))
      fail(peek(), "a ghost statement must be followed by a command");
    return AnnotatedCommand::make_glet(kSeqVar, g, parse_seq(), start.loc);
  }

  AnnotatedCommandPtr parse_seq() {
    const Token& t = peek();
    if (is_kw("let")) {
      next();
      std::string x = binder_name(Ns::Prog);
      expect(Tok::Assign, "'=' in let");
      auto bound = parse_item();
      expect_kw("in");
      ScopeMark mark(*this);
      bind(x, Ns::Prog, t);
      return AnnotatedCommand::make_let(x, bound, parse_seq(), t.loc);
    }
    if (is_kw("glet")) {
      next();
      std::string g = binder_name(Ns::Ghost);
      expect(Tok::Assign, "'=' in glet");
      auto bound = parse_gatom_cmd(GhostLevel::Outer);
      expect_kw("in");
      ScopeMark mark(*this);
      bind(g, Ns::Ghost, t);
      return AnnotatedCommand::make_glet(g, bound, parse_seq(), t.loc);
    }
    if (is_kw("ghost")) {
      next();
      return ghost_statement_tail(parse_gatom_cmd(GhostLevel::Outer), t);
    }
    if (at_keyword_ghost_statement()) return ghost_statement_tail(parse_gatom_cmd(GhostLevel::Outer), t);
    auto head = parse_item();
    if (accept(Tok::Semi)) return AnnotatedCommand::make_let(kSeqVar, head, parse_seq(), t.loc);
    return head;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, DeclInfo> decls_;
  bool allow_internal_ = false;
  bool allow_res_ = false;
  std::vector<Binding> scope_;
};

std::map<std::string, DeclInfo> decl_table(const std::vector<GhostDecl>& decls) {
  std::map<std::string, DeclInfo> out;
  for (const auto& d : decls) out[d.name] = {d.kind, d.params.size(), d.lem_params.size()};
  return out;
}

}  // namespace

const std::string& prelude_source() {
  static const std::string text =
      "lem_type FAA_op(x, n, P, Q) = lem()\n"
      "  forall v\n"
      "  req x |-> v * P()\n"
      "  ens x |-> v + n * Q();\n"
      "\n"
      "lem_type FAA_ghop(x, n, pre, post) = lem(op)\n"
      "  forall P, Q\n"
      "  req atomic_spaces({}) * op : FAA_op(x, n, P, Q) * P() * pre()\n"
      "  ens atomic_spaces({}) * op : FAA_op(x, n, P, Q) * Q() * post();\n"
      "\n"
      "pred_ctor heap_(h)() = heap(h);\n";
  return text;
}

const std::vector<GhostDecl>& prelude_decls() {
  static const std::vector<GhostDecl> decls = [] {
    Parser p(lex(prelude_source()), {}, true);
    p.prescan({});
    return p.parse_decls();
  }();
  return decls;
}

Program parse_program(std::string_view text, const ParseOptions& options) {
  const auto& prelude = prelude_decls();
  std::set<std::string> reserved;
  for (const auto& d : prelude) reserved.insert(d.name);
  Parser p(lex(text), decl_table(prelude), options.allow_internal);
  p.prescan(reserved);
  Program prog;
  prog.decls = prelude;
  prog.prelude_count = prelude.size();
  auto user = p.parse_decls();
  prog.decls.insert(prog.decls.end(), user.begin(), user.end());
  prog.main = p.parse_main();
  return prog;
}

CommandPtr parse_command(std::string_view text) {
  auto prog = parse_program(text);
  if (prog.decls.size() != prog.prelude_count) {
    const auto& d = prog.decls[prog.prelude_count];
    throw ParseError(d.loc.line, d.loc.col, "declarations are not allowed in a plain program");
  }
  if (!is_ghost_free(*prog.main)) throw ParseError(1, 1, "ghost code is not allowed in a plain program");
  return erase(prog.main);
}

AssertionPtr parse_assertion(std::string_view text, const Program& program, const AssertionScope& scope) {
  Parser p(lex(text), decl_table(program.decls), scope.allow_internal);
  return p.parse_standalone_assertion(scope);
}

}  // namespace cvf
