#pragma once

// Oriented conditional term rewriting systems: representation, the
// syntactic classes used by the analysis (3-CTRS, syntactic determinism,
// constructor systems), and a reader for the oriented-CTRS file format.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ssgr/goal.hpp"
#include "ssgr/parse.hpp"
#include "ssgr/term.hpp"
#include "ssgr/unify.hpp"

namespace ssgr {

struct CondRule {
  Term lhs;  // non-variable
  Term rhs;
  std::vector<std::pair<Term, Term>> conds;  // oriented s -> t
};

inline std::string show(const CondRule& r) {
  std::string s = show(r.lhs) + " -> " + show(r.rhs);
  for (size_t i = 0; i < r.conds.size(); ++i) {
    s += i == 0 ? " | " : ", ";
    s += show(r.conds[i].first) + " == " + show(r.conds[i].second);
  }
  return s;
}

// The rule (x -> x) => T is implicitly part of every system and is handled
// directly by the rewriting and narrowing engines.
struct Ctrs {
  Signature sig;
  std::vector<CondRule> rules;
};

inline VarSet rule_vars(const CondRule& r) {
  VarSet vs = vars(r.lhs);
  collect_vars(r.rhs, vs);
  for (const auto& [s, t] : r.conds) {
    collect_vars(s, vs);
    collect_vars(t, vs);
  }
  return vs;
}

// --- Classification ---------------------------------------------------------

struct ClassificationReport {
  bool is_3ctrs = true;
  bool is_sdctrs = true;
  bool is_constructor_system = true;
  std::vector<std::string> witnesses;
};

namespace detail {

// A ground term is a normal form of the underlying unconditional system iff
// no subterm matches a left-hand side.
inline bool ground_normal_form_of_ru(const Term& t, const Ctrs& R) {
  if (!is_ground(t)) return false;
  for (const Position& p : positions(t)) {
    const Term& sub = subterm_at(t, p);
    if (sub.is_var()) continue;
    for (const CondRule& r : R.rules)
      if (match(r.lhs, sub)) return false;
  }
  return true;
}

}  // namespace detail

inline ClassificationReport classify(const Ctrs& R) {
  ClassificationReport rep;
  for (const CondRule& r : R.rules) {
    VarSet lhs_vars = vars(r.lhs);
    VarSet lc_vars = lhs_vars;
    for (const auto& [s, t] : r.conds) {
      collect_vars(s, lc_vars);
      collect_vars(t, lc_vars);
    }
    for (const Variable& v : vars(r.rhs)) {
      if (!lc_vars.count(v)) {
        rep.is_3ctrs = false;
        rep.witnesses.push_back("rule " + show(r) + ": right-hand side variable " + v.str() +
                                " appears neither in the left-hand side nor in the conditions");
      }
    }
    // determinism: Var(s_i) within Var(l, t_1..t_{i-1})
    VarSet seen = lhs_vars;
    for (const auto& [s, t] : r.conds) {
      for (const Variable& v : vars(s)) {
        if (!seen.count(v)) {
          rep.is_sdctrs = false;
          rep.witnesses.push_back("rule " + show(r) + ": condition side " + show(s) +
                                  " uses variable " + v.str() +
                                  " before it is bound by earlier conditions");
        }
      }
      collect_vars(t, seen);
    }
    for (const auto& [s, t] : r.conds) {
      if (!is_constructor_term(t, R.sig) && !detail::ground_normal_form_of_ru(t, R)) {
        rep.is_sdctrs = false;
        rep.witnesses.push_back("rule " + show(r) + ": condition target " + show(t) +
                                " is neither a constructor term nor a ground normal form");
      }
    }
    if (!is_basic(r.lhs, R.sig)) {
      rep.is_constructor_system = false;
      rep.witnesses.push_back("rule " + show(r) + ": left-hand side is not basic");
    }
  }
  return rep;
}

// --- File format -------------------------------------------------------------
//
// (CONDITIONTYPE ORIENTED)         optional
// (VAR x y z)
// (RULES
//    l -> r | s1 == t1, s2 == t2
//    ...
// )

namespace detail {

inline Term retag(const Term& t, const Signature& sig) {
  if (t.is_var()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(retag(a, sig));
  auto sym = sig.find(t.sym().name);
  if (!sym) throw std::logic_error("retag: unknown symbol " + t.sym().name);
  return Term::app(*sym, std::move(args));
}

inline void infer_symbols(const Term& t, const VarSet& declared_vars,
                          std::map<std::string, int>& arities) {
  if (t.is_var()) return;
  auto it = arities.find(t.sym().name);
  if (it != arities.end() && it->second != t.sym().arity)
    throw std::runtime_error("symbol '" + t.sym().name + "' used with arities " +
                             std::to_string(it->second) + " and " +
                             std::to_string(t.sym().arity));
  arities[t.sym().name] = t.sym().arity;
  for (const Term& a : t.args()) infer_symbols(a, declared_vars, arities);
}

}  // namespace detail

inline Ctrs parse_ctrs(const std::string& src) {
  Lexer lx(src);
  VarSet declared;
  struct RawRule {
    Term lhs, rhs;
    std::vector<std::pair<Term, Term>> conds;
  };
  std::vector<RawRule> raw;

  // Permissive term parser for the first pass: identifiers in `declared`
  // are variables, any other identifier/operator becomes a provisional
  // symbol with the observed arity. Kinds are fixed up afterwards.
  std::function<Term(Lexer&)> term;
  std::function<Term(Lexer&)> primary = [&](Lexer& l) -> Term {
    if (l.accept(Tok::lparen)) {
      Term t = term(l);
      l.expect(Tok::rparen, "')'");
      return t;
    }
    Token id = l.peek();
    if (id.kind != Tok::ident && id.kind != Tok::oper) l.fail("expected a term");
    l.next();
    std::vector<Term> args;
    if (l.accept(Tok::lparen)) {
      if (!l.at(Tok::rparen)) {
        args.push_back(term(l));
        while (l.accept(Tok::comma)) args.push_back(term(l));
      }
      l.expect(Tok::rparen, "')'");
    } else if (id.kind == Tok::ident && declared.count(Variable{id.text, 0})) {
      return Term::var(id.text);
    }
    int arity = static_cast<int>(args.size());
    return Term::app(Symbol{id.text, arity, SymbolKind::constructor}, std::move(args));
  };
  term = [&](Lexer& l) -> Term {
    Term t = primary(l);
    while (l.at(Tok::oper)) {
      std::string op = l.next().text;
      Term rhs = primary(l);
      t = Term::app(Symbol{op, 2, SymbolKind::constructor}, {t, rhs});
    }
    return t;
  };

  while (!lx.at(Tok::end)) {
    lx.expect(Tok::lparen, "'('");
    Token kw = lx.expect(Tok::ident, "section keyword");
    if (kw.text == "CONDITIONTYPE") {
      lx.expect(Tok::ident, "condition type");
      lx.expect(Tok::rparen, "')'");
    } else if (kw.text == "COMMENT") {
      int depth = 1;
      while (depth > 0) {
        if (lx.at(Tok::end)) lx.fail("unterminated COMMENT");
        Tok k = lx.next().kind;
        if (k == Tok::lparen) ++depth;
        if (k == Tok::rparen) --depth;
      }
    } else if (kw.text == "VAR") {
      while (lx.at(Tok::ident)) declared.insert(Variable{lx.next().text, 0});
      lx.expect(Tok::rparen, "')'");
    } else if (kw.text == "RULES") {
      while (!lx.at(Tok::rparen)) {
        RawRule r;
        r.lhs = term(lx);
        lx.expect(Tok::arrow, "'->'");
        r.rhs = term(lx);
        if (lx.accept(Tok::pipe)) {
          do {
            Term s = term(lx);
            lx.expect(Tok::eqeq, "'=='");
            Term t = term(lx);
            r.conds.emplace_back(std::move(s), std::move(t));
          } while (lx.accept(Tok::comma));
        }
        if (r.lhs.is_var())
          throw std::runtime_error("rule left-hand side must not be a variable");
        raw.push_back(std::move(r));
      }
      lx.expect(Tok::rparen, "')'");
    } else {
      throw ParseError("unknown section '" + kw.text + "'", kw.line, kw.column);
    }
  }

  // Split symbols into defined (roots of left-hand sides) and constructors.
  std::map<std::string, int> arities;
  for (const RawRule& r : raw) {
    detail::infer_symbols(r.lhs, declared, arities);
    detail::infer_symbols(r.rhs, declared, arities);
    for (const auto& [s, t] : r.conds) {
      detail::infer_symbols(s, declared, arities);
      detail::infer_symbols(t, declared, arities);
    }
  }
  std::set<std::string> defined_names;
  for (const RawRule& r : raw) defined_names.insert(r.lhs.sym().name);
  std::vector<Symbol> ctors, defs;
  for (const auto& [name, arity] : arities) {
    if (defined_names.count(name))
      defs.push_back(Symbol{name, arity, SymbolKind::defined});
    else
      ctors.push_back(Symbol{name, arity, SymbolKind::constructor});
  }
  Ctrs R;
  R.sig = Signature(std::move(ctors), std::move(defs));
  for (const RawRule& r : raw) {
    CondRule cr;
    cr.lhs = detail::retag(r.lhs, R.sig);
    cr.rhs = detail::retag(r.rhs, R.sig);
    for (const auto& [s, t] : r.conds)
      cr.conds.emplace_back(detail::retag(s, R.sig), detail::retag(t, R.sig));
    R.rules.push_back(std::move(cr));
  }
  return R;
}

}  // namespace ssgr
