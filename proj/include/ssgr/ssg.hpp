#pragma once

// Substitution-set grammars: regular tree grammars whose productions build
// Sigma expressions. SubstSet(G, N) is the set of evaluations of the
// expression language of N, restricted to the goal variables of N.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssgr/sigma.hpp"
#include "ssgr/subst.hpp"
#include "ssgr/term.hpp"

namespace ssgr {

struct SsgNonterminal {
  std::string name;
  std::vector<Variable> goal_vars;  // ordered as declared
  std::string goal_text;            // display only

  VarSet goal_var_set() const { return VarSet(goal_vars.begin(), goal_vars.end()); }
};

struct SsgRule {
  std::string lhs;
  SigmaExpr alt;  // one alternative
};

struct Ssg {
  std::vector<Symbol> constructors;
  std::vector<SsgNonterminal> nts;
  std::string initial;
  std::vector<SsgRule> rules;

  Signature signature() const { return Signature(constructors, {}); }

  const SsgNonterminal* find_nt(const std::string& name) const {
    for (const auto& n : nts)
      if (n.name == name) return &n;
    return nullptr;
  }

  std::vector<SigmaExpr> alternatives(const std::string& name) const {
    std::vector<SigmaExpr> out;
    for (const auto& r : rules)
      if (r.lhs == name) out.push_back(r.alt);
    return out;
  }
};

// --- File format ---------------------------------------------------------------
//
// (CONSTRUCTORS 0/0 s/1 true/0 false/0)
// (NONTERMINAL G_lt  vars x y  goal "x < y -> true")
// (INITIAL G_lt)
// (RULE G_lt -> {x -> 0, y -> s(y2)})
// (RULE G_lt -> rec(G_lt, {x3 -> x, y3 -> y}) . {x -> s(x3), y -> s(y3)})
//
// `.` is composition, `/\` parallel composition, `empty` the empty set.
// Alternatives may also be separated by `|` within one RULE.

namespace detail {

inline void check_no_reserved_vars(const SigmaExpr& e) {
  auto check_subst = [](const Substitution& s) {
    for (const auto& [v, t] : s.bindings()) {
      if (v.base == "A") throw std::runtime_error("variable name 'A' is reserved");
      for (const Variable& w : vars(t))
        if (w.base == "A") throw std::runtime_error("variable name 'A' is reserved");
    }
  };
  switch (e.kind()) {
    case SigmaExpr::Kind::subst:
      check_subst(e.as_subst());
      break;
    case SigmaExpr::Kind::comp:
    case SigmaExpr::Kind::par:
      check_no_reserved_vars(e.left());
      check_no_reserved_vars(e.right());
      break;
    case SigmaExpr::Kind::rec:
      check_no_reserved_vars(e.rec_body());
      for (const auto& [a, b] : e.rec_delta().pairs)
        if (a.base == "A" || b.base == "A")
          throw std::runtime_error("variable name 'A' is reserved");
      break;
    default:
      break;
  }
}

}  // namespace detail

inline Ssg parse_ssg(const std::string& src) {
  Lexer lx(src);
  Ssg g;
  Signature sig;  // rebuilt once constructors are known
  bool have_ctors = false;

  SigmaParseHooks hooks;
  hooks.is_nonterminal = [&g](const std::string& n) { return g.find_nt(n) != nullptr; };

  while (!lx.at(Tok::end)) {
    lx.expect(Tok::lparen, "'('");
    Token kw = lx.expect(Tok::ident, "section keyword");
    if (kw.text == "CONSTRUCTORS") {
      while (lx.at(Tok::ident)) {
        Token name = lx.next();
        if (!lx.at(Tok::oper) || lx.peek().text != "/") lx.fail("expected '/arity'");
        lx.next();
        Token ar = lx.expect(Tok::ident, "arity");
        if (name.text == "A")
          throw ParseError("constructor name 'A' is reserved", name.line, name.column);
        g.constructors.push_back(
            Symbol{name.text, std::stoi(ar.text), SymbolKind::constructor});
      }
      lx.expect(Tok::rparen, "')'");
      sig = g.signature();
      have_ctors = true;
    } else if (kw.text == "NONTERMINAL") {
      SsgNonterminal nt;
      nt.name = lx.expect(Tok::ident, "nonterminal name").text;
      while (lx.at(Tok::ident)) {
        Token key = lx.next();
        if (key.text == "vars") {
          while (lx.at(Tok::ident) && lx.peek().text != "goal" && lx.peek().text != "vars")
            nt.goal_vars.push_back(Variable{lx.next().text, 0});
        } else if (key.text == "goal") {
          nt.goal_text = lx.expect(Tok::string_lit, "goal string").text;
        } else {
          throw ParseError("unknown nonterminal attribute '" + key.text + "'", key.line,
                           key.column);
        }
      }
      for (const Variable& v : nt.goal_vars)
        if (v.base == "A") throw std::runtime_error("variable name 'A' is reserved");
      if (g.find_nt(nt.name)) throw std::runtime_error("duplicate nonterminal " + nt.name);
      g.nts.push_back(std::move(nt));
      lx.expect(Tok::rparen, "')'");
    } else if (kw.text == "INITIAL") {
      g.initial = lx.expect(Tok::ident, "nonterminal name").text;
      lx.expect(Tok::rparen, "')'");
    } else if (kw.text == "RULE") {
      if (!have_ctors) throw std::runtime_error("CONSTRUCTORS must precede RULE sections");
      Token lhs = lx.expect(Tok::ident, "nonterminal name");
      if (!g.find_nt(lhs.text))
        throw ParseError("rule for undeclared nonterminal '" + lhs.text + "'", lhs.line,
                         lhs.column);
      lx.expect(Tok::arrow, "'->'");
      TermContext ctx;
      ctx.sig = &sig;
      ctx.free_identifiers_are_vars = true;
      do {
        SigmaExpr alt = parse_sigma_expr(lx, ctx, hooks);
        detail::check_no_reserved_vars(alt);
        g.rules.push_back({lhs.text, std::move(alt)});
      } while (lx.accept(Tok::pipe));
      lx.expect(Tok::rparen, "')'");
    } else {
      throw ParseError("unknown section '" + kw.text + "'", kw.line, kw.column);
    }
  }
  if (!g.initial.empty() && !g.find_nt(g.initial))
    throw std::runtime_error("initial nonterminal " + g.initial + " is not declared");
  return g;
}

inline std::string show(const Ssg& g) {
  std::ostringstream os;
  os << "(CONSTRUCTORS";
  for (const Symbol& c : g.constructors) os << " " << c.name << "/" << c.arity;
  os << ")\n";
  for (const auto& nt : g.nts) {
    os << "(NONTERMINAL " << nt.name << " vars";
    for (const Variable& v : nt.goal_vars) os << " " << v.str();
    if (!nt.goal_text.empty()) os << " goal \"" << nt.goal_text << "\"";
    os << ")\n";
  }
  if (!g.initial.empty()) os << "(INITIAL " << g.initial << ")\n";
  for (const auto& r : g.rules) os << "(RULE " << r.lhs << " -> " << show(r.alt) << ")\n";
  return os.str();
}

// --- Expression enumeration and SubstSet ---------------------------------------

namespace detail {

inline const SigmaExpr* find_first_nonterm(const SigmaExpr& e) {
  switch (e.kind()) {
    case SigmaExpr::Kind::nonterm:
      return &e;
    case SigmaExpr::Kind::comp:
    case SigmaExpr::Kind::par: {
      if (const SigmaExpr* l = find_first_nonterm(e.left())) return l;
      return find_first_nonterm(e.right());
    }
    case SigmaExpr::Kind::rec:
      return find_first_nonterm(e.rec_body());
    default:
      return nullptr;
  }
}

// Replaces the leftmost nonterminal occurrence with `repl`.
inline SigmaExpr replace_first_nonterm(const SigmaExpr& e, const SigmaExpr& repl, bool& done) {
  if (done) return e;
  switch (e.kind()) {
    case SigmaExpr::Kind::nonterm:
      done = true;
      return repl;
    case SigmaExpr::Kind::comp: {
      SigmaExpr l = replace_first_nonterm(e.left(), repl, done);
      SigmaExpr r = done ? e.right() : replace_first_nonterm(e.right(), repl, done);
      return SigmaExpr::comp(std::move(l), std::move(r));
    }
    case SigmaExpr::Kind::par: {
      SigmaExpr l = replace_first_nonterm(e.left(), repl, done);
      SigmaExpr r = done ? e.right() : replace_first_nonterm(e.right(), repl, done);
      return SigmaExpr::par(std::move(l), std::move(r));
    }
    case SigmaExpr::Kind::rec:
      return SigmaExpr::rec(replace_first_nonterm(e.rec_body(), repl, done), e.rec_delta());
    default:
      return e;
  }
}

}  // namespace detail

// All nonterminal-free expressions derivable from `nt` with at most `bound`
// production applications.
inline std::vector<SigmaExpr> enumerate_exprs(const Ssg& g, const std::string& nt, int bound) {
  std::vector<SigmaExpr> done;
  std::set<std::string> seen;
  std::function<void(const SigmaExpr&, int)> expand = [&](const SigmaExpr& e, int remaining) {
    const SigmaExpr* occ = detail::find_first_nonterm(e);
    if (!occ) {
      std::string key = show(e);
      if (seen.insert(key).second) done.push_back(e);
      return;
    }
    if (remaining == 0) return;
    for (const SigmaExpr& alt : g.alternatives(occ->nt_name())) {
      bool flag = false;
      expand(detail::replace_first_nonterm(e, alt, flag), remaining - 1);
    }
  };
  expand(SigmaExpr::nonterm(nt), bound);
  std::sort(done.begin(), done.end(),
            [](const SigmaExpr& a, const SigmaExpr& b) { return show(a) < show(b); });
  return done;
}

// Evaluations of the bounded expression language, restricted to the goal
// variables of nt and deduplicated up to renaming of range variables.
inline std::vector<Substitution> subst_set(const Ssg& g, const std::string& nt, int bound,
                                           FreshState& fs) {
  const SsgNonterminal* decl = g.find_nt(nt);
  if (!decl) throw std::invalid_argument("unknown nonterminal " + nt);
  VarSet goal_vars = decl->goal_var_set();
  std::map<std::string, Substitution> out;
  for (const SigmaExpr& e : enumerate_exprs(g, nt, bound)) {
    auto v = eval(e, fs);
    if (!v) continue;
    Substitution r = restrict_to(*v, goal_vars);
    out.emplace(show(canon_ranges(r, goal_vars)), r);
  }
  std::vector<Substitution> res;
  for (auto& [k, s] : out) res.push_back(std::move(s));
  return res;
}

}  // namespace ssgr
