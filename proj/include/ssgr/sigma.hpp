#pragma once

// Expressions over the signature Sigma = substitutions u {empty, ., /\,
// rec} and their evaluation to substitutions. Composition (.) binds
// tighter than parallel composition (/\); both parse right-associative.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ssgr/parse.hpp"
#include "ssgr/subst.hpp"
#include "ssgr/unify.hpp"

namespace ssgr {

// Second argument of rec: a variable-to-variable map. Identity pairs are
// meaningful here (they fix the restriction domain), so this is kept apart
// from Substitution, which normalizes identities away.
struct RenamingPairs {
  std::vector<std::pair<Variable, Variable>> pairs;

  VarSet dom() const {
    VarSet d;
    for (const auto& [a, b] : pairs) d.insert(a);
    return d;
  }
  VarSet vran() const {
    VarSet r;
    for (const auto& [a, b] : pairs) r.insert(b);
    return r;
  }
  Variable apply(const Variable& v) const {
    for (const auto& [a, b] : pairs)
      if (a == v) return b;
    return v;
  }
  Term apply(const Term& t) const {
    if (t.is_var()) return Term::var(apply(t.var()));
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(apply(a));
    return Term::app(t.sym(), std::move(args));
  }
  Substitution as_subst() const {
    Substitution s;
    for (const auto& [a, b] : pairs) s.bind(a, Term::var(b));
    return s;
  }
  bool injective() const {
    VarSet seen;
    for (const auto& [a, b] : pairs)
      if (!seen.insert(b).second) return false;
    return true;
  }
};

inline std::string show(const RenamingPairs& r) {
  std::string s = "{";
  for (size_t i = 0; i < r.pairs.size(); ++i) {
    if (i) s += ", ";
    s += r.pairs[i].first.str() + " -> " + r.pairs[i].second.str();
  }
  return s + "}";
}

class SigmaExpr {
 public:
  enum class Kind { subst, empty, comp, par, rec, nonterm };

 private:
  struct Node {
    Kind kind;
    Substitution subst;           // subst
    std::vector<SigmaExpr> kids;  // comp/par: [left, right]; rec: [body]
    RenamingPairs delta;          // rec
    std::string nt;               // nonterm
  };
  std::shared_ptr<const Node> n_;
  explicit SigmaExpr(std::shared_ptr<Node> n) : n_(std::move(n)) {}

 public:
  SigmaExpr() = default;
  bool empty_handle() const { return n_ == nullptr; }

  static SigmaExpr subst(Substitution s) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::subst;
    n->subst = std::move(s);
    return SigmaExpr(std::move(n));
  }
  static SigmaExpr empty_set() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::empty;
    return SigmaExpr(std::move(n));
  }
  static SigmaExpr comp(SigmaExpr l, SigmaExpr r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::comp;
    n->kids.push_back(std::move(l));
    n->kids.push_back(std::move(r));
    return SigmaExpr(std::move(n));
  }
  static SigmaExpr par(SigmaExpr l, SigmaExpr r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::par;
    n->kids.push_back(std::move(l));
    n->kids.push_back(std::move(r));
    return SigmaExpr(std::move(n));
  }
  static SigmaExpr rec(SigmaExpr body, RenamingPairs delta) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::rec;
    n->kids.push_back(std::move(body));
    n->delta = std::move(delta);
    return SigmaExpr(std::move(n));
  }
  static SigmaExpr nonterm(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::nonterm;
    n->nt = std::move(name);
    return SigmaExpr(std::move(n));
  }

  Kind kind() const { return n_->kind; }
  const Substitution& as_subst() const { return n_->subst; }
  const SigmaExpr& left() const { return n_->kids[0]; }
  const SigmaExpr& right() const { return n_->kids[1]; }
  const SigmaExpr& rec_body() const { return n_->kids[0]; }
  const RenamingPairs& rec_delta() const { return n_->delta; }
  const std::string& nt_name() const { return n_->nt; }
};

inline std::string show(const SigmaExpr& e) {
  switch (e.kind()) {
    case SigmaExpr::Kind::subst:
      return show(e.as_subst());
    case SigmaExpr::Kind::empty:
      return "empty";
    case SigmaExpr::Kind::comp: {
      auto wrap = [](const SigmaExpr& c) {
        std::string s = show(c);
        return c.kind() == SigmaExpr::Kind::par ? "(" + s + ")" : s;
      };
      return wrap(e.left()) + " . " + wrap(e.right());
    }
    case SigmaExpr::Kind::par:
      return show(e.left()) + " /\\ " + show(e.right());
    case SigmaExpr::Kind::rec:
      return "rec(" + show(e.rec_body()) + ", " + show(e.rec_delta()) + ")";
    case SigmaExpr::Kind::nonterm:
      return e.nt_name();
  }
  return "?";
}

inline bool contains_nonterm(const SigmaExpr& e) {
  switch (e.kind()) {
    case SigmaExpr::Kind::subst:
    case SigmaExpr::Kind::empty:
      return false;
    case SigmaExpr::Kind::comp:
    case SigmaExpr::Kind::par:
      return contains_nonterm(e.left()) || contains_nonterm(e.right());
    case SigmaExpr::Kind::rec:
      return contains_nonterm(e.rec_body());
    case SigmaExpr::Kind::nonterm:
      return true;
  }
  return false;
}

inline bool contains_empty(const SigmaExpr& e) {
  switch (e.kind()) {
    case SigmaExpr::Kind::empty:
      return true;
    case SigmaExpr::Kind::subst:
    case SigmaExpr::Kind::nonterm:
      return false;
    case SigmaExpr::Kind::comp:
    case SigmaExpr::Kind::par:
      return contains_empty(e.left()) || contains_empty(e.right());
    case SigmaExpr::Kind::rec:
      return contains_empty(e.rec_body());
  }
  return false;
}

// The semantics of nonterminal-free Sigma expressions. nullopt is the
// semantic `fail`: empty, a failing parallel composition, or a rec whose
// renaming targets are not covered by the body's substitution.
inline std::optional<Substitution> eval(const SigmaExpr& e, FreshState& fs) {
  switch (e.kind()) {
    case SigmaExpr::Kind::subst:
      return e.as_subst();
    case SigmaExpr::Kind::empty:
      return std::nullopt;
    case SigmaExpr::Kind::comp: {
      auto l = eval(e.left(), fs);
      if (!l) return std::nullopt;
      auto r = eval(e.right(), fs);
      if (!r) return std::nullopt;
      return compose(*l, *r);
    }
    case SigmaExpr::Kind::par: {
      auto l = eval(e.left(), fs);
      if (!l) return std::nullopt;
      auto r = eval(e.right(), fs);
      if (!r) return std::nullopt;
      Substitution r_fresh = freshen(*r, dom_and_vran(*l), fs);
      auto up = parallel_compose(*l, r_fresh);
      if (!up) return std::nullopt;
      return restrict_to(*up, set_union(l->domain(), r_fresh.domain()));
    }
    case SigmaExpr::Kind::rec: {
      auto body = eval(e.rec_body(), fs);
      if (!body) return std::nullopt;
      const RenamingPairs& delta = e.rec_delta();
      VarSet body_dom = body->domain();
      for (const Variable& v : delta.vran())
        if (!body_dom.count(v)) return std::nullopt;
      Substitution fresh_body = freshen(*body, set_union(delta.dom(), delta.vran()), fs);
      return restrict_to(compose(fresh_body, delta.as_subst()), delta.dom());
    }
    case SigmaExpr::Kind::nonterm:
      throw std::logic_error("eval: expression contains nonterminal " + e.nt_name());
  }
  return std::nullopt;
}

// --- Parsing -----------------------------------------------------------------
//
//   expr := comp ('/\' expr)?          (right associative)
//   comp := atom ('.' comp)?
//   atom := 'empty' | substitution | 'rec' '(' expr ',' renaming ')'
//         | NTNAME | '(' expr ')'

struct SigmaParseHooks {
  // returns true when the identifier names a grammar nonterminal
  std::function<bool(const std::string&)> is_nonterminal = [](const std::string&) {
    return false;
  };
};

inline RenamingPairs parse_renaming(Lexer& lx, const TermContext& ctx) {
  RenamingPairs out;
  lx.expect(Tok::lbrace, "'{'");
  if (!lx.at(Tok::rbrace)) {
    do {
      Token a = lx.expect(Tok::ident, "variable");
      lx.expect(Tok::arrow, "'->'");
      Token b = lx.expect(Tok::ident, "variable");
      if (!ctx.is_var_name(a.text) || !ctx.is_var_name(b.text))
        throw ParseError("renaming must map variables to variables", a.line, a.column);
      out.pairs.emplace_back(Variable{a.text, 0}, Variable{b.text, 0});
    } while (lx.accept(Tok::comma));
  }
  lx.expect(Tok::rbrace, "'}'");
  VarSet firsts;
  for (const auto& [a, b] : out.pairs)
    if (!firsts.insert(a).second)
      throw std::runtime_error("renaming binds " + a.str() + " twice");
  if (!out.injective()) throw std::runtime_error("renaming is not injective: " + show(out));
  return out;
}

SigmaExpr parse_sigma_expr(Lexer& lx, const TermContext& ctx, const SigmaParseHooks& hooks);

inline SigmaExpr parse_sigma_atom(Lexer& lx, const TermContext& ctx,
                                  const SigmaParseHooks& hooks) {
  if (lx.at(Tok::lbrace)) return SigmaExpr::subst(parse_substitution(lx, ctx));
  if (lx.accept(Tok::lparen)) {
    SigmaExpr e = parse_sigma_expr(lx, ctx, hooks);
    lx.expect(Tok::rparen, "')'");
    return e;
  }
  Token id = lx.expect(Tok::ident, "expression");
  if (id.text == "empty") return SigmaExpr::empty_set();
  if (id.text == "rec") {
    lx.expect(Tok::lparen, "'('");
    SigmaExpr body = parse_sigma_expr(lx, ctx, hooks);
    lx.expect(Tok::comma, "','");
    RenamingPairs delta = parse_renaming(lx, ctx);
    lx.expect(Tok::rparen, "')'");
    return SigmaExpr::rec(std::move(body), std::move(delta));
  }
  if (hooks.is_nonterminal(id.text)) return SigmaExpr::nonterm(id.text);
  throw ParseError("expected substitution, empty, rec, or a nonterminal; got '" + id.text + "'",
                   id.line, id.column);
}

inline SigmaExpr parse_sigma_comp(Lexer& lx, const TermContext& ctx,
                                  const SigmaParseHooks& hooks) {
  SigmaExpr l = parse_sigma_atom(lx, ctx, hooks);
  if (lx.accept(Tok::dot)) return SigmaExpr::comp(std::move(l), parse_sigma_comp(lx, ctx, hooks));
  return l;
}

inline SigmaExpr parse_sigma_expr(Lexer& lx, const TermContext& ctx,
                                  const SigmaParseHooks& hooks) {
  SigmaExpr l = parse_sigma_comp(lx, ctx, hooks);
  if (lx.accept(Tok::conj)) return SigmaExpr::par(std::move(l), parse_sigma_expr(lx, ctx, hooks));
  return l;
}

}  // namespace ssgr
