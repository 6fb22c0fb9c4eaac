#pragma once

// Lexer and term-level parsers shared by the file formats and the CLI.
//
// Term syntax: identifiers are [A-Za-z0-9_']+, application is f(t1,...,tn),
// nullary symbols are written bare. Binary symbols with symbolic names
// (<, -, ...) may be written infix. Substitution literals look like
// {x -> t, y -> u}; {} is the identity.

#include <optional>
#include <string>
#include <vector>

#include "ssgr/subst.hpp"
#include "ssgr/term.hpp"

namespace ssgr {

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " (line " + std::to_string(l) + ", column " +
                           std::to_string(c) + ")"),
        line(l),
        column(c) {}
};

enum class Tok {
  lparen,
  rparen,
  lbrace,
  rbrace,
  comma,
  arrow,   // ->
  eqeq,    // ==
  conj,    // /\ .
  pipe,    // |
  dot,     // .
  oper,    // other symbolic run, e.g. < or -
  ident,
  string_lit,
  end,
};

struct Token {
  Tok kind;
  std::string text;
  int line = 1, column = 1;
};

inline bool is_symbolic_char(char c) {
  return std::string("<>=+-*/\\|!?~&@$:^%.").find(c) != std::string::npos;
}

class Lexer {
  std::vector<Token> toks_;
  size_t pos_ = 0;

 public:
  explicit Lexer(const std::string& src) {
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
      for (size_t k = 0; k < n; ++k) {
        if (src[i + k] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    while (i < src.size()) {
      char c = src[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance(1);
        continue;
      }
      if (c == ';') {  // comment to end of line
        while (i < src.size() && src[i] != '\n') advance(1);
        continue;
      }
      int tl = line, tc = col;
      if (c == '(') {
        toks_.push_back({Tok::lparen, "(", tl, tc});
        advance(1);
      } else if (c == ')') {
        toks_.push_back({Tok::rparen, ")", tl, tc});
        advance(1);
      } else if (c == '{') {
        toks_.push_back({Tok::lbrace, "{", tl, tc});
        advance(1);
      } else if (c == '}') {
        toks_.push_back({Tok::rbrace, "}", tl, tc});
        advance(1);
      } else if (c == ',') {
        toks_.push_back({Tok::comma, ",", tl, tc});
        advance(1);
      } else if (c == '"') {
        size_t j = i + 1;
        while (j < src.size() && src[j] != '"') ++j;
        if (j >= src.size()) throw ParseError("unterminated string", tl, tc);
        toks_.push_back({Tok::string_lit, src.substr(i + 1, j - i - 1), tl, tc});
        advance(j + 1 - i);
      } else if (is_identifier_char(c)) {
        size_t j = i;
        while (j < src.size() && is_identifier_char(src[j])) ++j;
        toks_.push_back({Tok::ident, src.substr(i, j - i), tl, tc});
        advance(j - i);
      } else if (is_symbolic_char(c)) {
        size_t j = i;
        while (j < src.size() && is_symbolic_char(src[j])) ++j;
        std::string run = src.substr(i, j - i);
        Tok kind = Tok::oper;
        if (run == "->")
          kind = Tok::arrow;
        else if (run == "==")
          kind = Tok::eqeq;
        else if (run == "/\\")
          kind = Tok::conj;
        else if (run == "|")
          kind = Tok::pipe;
        else if (run == ".")
          kind = Tok::dot;
        toks_.push_back({kind, run, tl, tc});
        advance(j - i);
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
      }
    }
    toks_.push_back({Tok::end, "", line, col});
  }

  const Token& peek(size_t ahead = 0) const {
    size_t k = pos_ + ahead;
    return k < toks_.size() ? toks_[k] : toks_.back();
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) {
      const Token& t = peek();
      throw ParseError("expected " + what + ", got '" + t.text + "'", t.line, t.column);
    }
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(msg + " at '" + t.text + "'", t.line, t.column);
  }
};

// Resolves identifiers while parsing terms. Identifiers naming a known
// symbol parse as that symbol; others parse as variables when
// `free_identifiers_are_vars` is set or the name is in `vars`.
struct TermContext {
  const Signature* sig = nullptr;
  VarSet vars;
  bool free_identifiers_are_vars = false;

  bool is_var_name(const std::string& name) const {
    if (vars.count(Variable{name, 0})) return true;
    if (!free_identifiers_are_vars) return false;
    return !(sig && sig->find(name).has_value());
  }
};

Term parse_term(Lexer& lx, const TermContext& ctx);

inline Term parse_primary(Lexer& lx, const TermContext& ctx) {
  if (lx.accept(Tok::lparen)) {
    Term t = parse_term(lx, ctx);
    lx.expect(Tok::rparen, "')'");
    return t;
  }
  Token id = lx.peek();
  if (id.kind != Tok::ident && id.kind != Tok::oper) lx.fail("expected a term");
  lx.next();
  std::vector<Term> args;
  bool applied = false;
  if (lx.accept(Tok::lparen)) {
    applied = true;
    if (!lx.at(Tok::rparen)) {
      args.push_back(parse_term(lx, ctx));
      while (lx.accept(Tok::comma)) args.push_back(parse_term(lx, ctx));
    }
    lx.expect(Tok::rparen, "')'");
  }
  if (!applied && id.kind == Tok::ident && ctx.is_var_name(id.text))
    return Term::var(id.text);
  std::optional<Symbol> sym = ctx.sig ? ctx.sig->find(id.text) : std::nullopt;
  if (!sym) {
    if (id.kind == Tok::ident && !applied && ctx.free_identifiers_are_vars)
      return Term::var(id.text);
    throw ParseError("unknown symbol '" + id.text + "'", id.line, id.column);
  }
  if (sym->arity != static_cast<int>(args.size()))
    throw ParseError("symbol '" + id.text + "' expects " + std::to_string(sym->arity) +
                         " arguments, got " + std::to_string(args.size()),
                     id.line, id.column);
  return Term::app(*sym, std::move(args));
}

// One infix level, left associative: t1 < t2, t1 - t2, ...
inline Term parse_term(Lexer& lx, const TermContext& ctx) {
  Term t = parse_primary(lx, ctx);
  while (lx.at(Tok::oper)) {
    Token op = lx.peek();
    std::optional<Symbol> sym = ctx.sig ? ctx.sig->find(op.text) : std::nullopt;
    if (!sym || sym->arity != 2) break;
    lx.next();
    Term rhs = parse_primary(lx, ctx);
    t = Term::app(*sym, {t, rhs});
  }
  return t;
}

// {x -> t, y -> u}; lhs must be variables. {} is the identity.
inline Substitution parse_substitution(Lexer& lx, const TermContext& ctx) {
  lx.expect(Tok::lbrace, "'{'");
  Substitution s;
  if (!lx.at(Tok::rbrace)) {
    do {
      Token v = lx.expect(Tok::ident, "variable");
      if (!ctx.is_var_name(v.text))
        throw ParseError("'" + v.text + "' is not a variable", v.line, v.column);
      lx.expect(Tok::arrow, "'->'");
      Term t = parse_term(lx, ctx);
      s.bind(Variable{v.text, 0}, t);
    } while (lx.accept(Tok::comma));
  }
  lx.expect(Tok::rbrace, "'}'");
  return s;
}

inline Term parse_term(const std::string& text, const TermContext& ctx) {
  Lexer lx(text);
  Term t = parse_term(lx, ctx);
  if (!lx.at(Tok::end)) lx.fail("trailing input after term");
  return t;
}

inline Substitution parse_substitution(const std::string& text, const TermContext& ctx) {
  Lexer lx(text);
  Substitution s = parse_substitution(lx, ctx);
  if (!lx.at(Tok::end)) lx.fail("trailing input after substitution");
  return s;
}

}  // namespace ssgr
