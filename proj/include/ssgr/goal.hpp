#pragma once

// Goal clauses: conjunctions of oriented pairs s -> t and T atoms, the
// objects rewritten and narrowed.

#include <string>
#include <vector>

#include "ssgr/parse.hpp"
#include "ssgr/subst.hpp"
#include "ssgr/term.hpp"

namespace ssgr {

struct GoalAtom {
  bool is_top = false;
  Term lhs, rhs;  // unset when is_top

  static GoalAtom top() { return GoalAtom{true, {}, {}}; }
  static GoalAtom pair(Term l, Term r) { return GoalAtom{false, std::move(l), std::move(r)}; }

  Term as_term() const {
    return is_top ? Term::app(top_symbol()) : Term::app(arrow_symbol(), {lhs, rhs});
  }

  bool operator==(const GoalAtom& o) const {
    if (is_top != o.is_top) return false;
    return is_top || (lhs == o.lhs && rhs == o.rhs);
  }
};

struct GoalClause {
  std::vector<GoalAtom> atoms;  // non-empty

  bool all_top() const {
    for (const auto& a : atoms)
      if (!a.is_top) return false;
    return true;
  }

  // Index of the leftmost non-T atom, or -1.
  int first_pending() const {
    for (size_t i = 0; i < atoms.size(); ++i)
      if (!atoms[i].is_top) return static_cast<int>(i);
    return -1;
  }

  bool operator==(const GoalClause& o) const { return atoms == o.atoms; }
};

inline VarSet vars(const GoalClause& g) {
  VarSet vs;
  for (const auto& a : g.atoms) {
    if (a.is_top) continue;
    collect_vars(a.lhs, vs);
    collect_vars(a.rhs, vs);
  }
  return vs;
}

inline GoalClause apply(const Substitution& s, const GoalClause& g) {
  GoalClause r;
  r.atoms.reserve(g.atoms.size());
  for (const auto& a : g.atoms)
    r.atoms.push_back(a.is_top ? GoalAtom::top() : GoalAtom::pair(s.apply(a.lhs), s.apply(a.rhs)));
  return r;
}

inline std::string show(const GoalClause& g) {
  std::string r;
  for (size_t i = 0; i < g.atoms.size(); ++i) {
    if (i) r += " /\\ ";
    if (g.atoms[i].is_top)
      r += top_symbol().name;
    else
      r += show(g.atoms[i].lhs) + " -> " + show(g.atoms[i].rhs);
  }
  return r;
}

// Validity in the sense required for narrowing: in each pair the left side
// is a constructor or basic term and the right side is a constructor term.
inline bool is_valid_goal_clause(const GoalClause& g, const Signature& sig) {
  if (g.atoms.empty()) return false;
  for (const auto& a : g.atoms) {
    if (a.is_top) continue;
    if (!is_constructor_term(a.lhs, sig) && !is_basic(a.lhs, sig)) return false;
    if (!is_constructor_term(a.rhs, sig)) return false;
  }
  return true;
}

// "s1 -> t1 /\ s2 -> t2 /\ T"
inline GoalClause parse_goal_clause(Lexer& lx, const TermContext& ctx) {
  GoalClause g;
  do {
    if (lx.at(Tok::ident) && lx.peek().text == top_symbol().name &&
        lx.peek(1).kind != Tok::arrow && lx.peek(1).kind != Tok::oper &&
        lx.peek(1).kind != Tok::lparen) {
      lx.next();
      g.atoms.push_back(GoalAtom::top());
      continue;
    }
    Term l = parse_term(lx, ctx);
    lx.expect(Tok::arrow, "'->'");
    Term r = parse_term(lx, ctx);
    g.atoms.push_back(GoalAtom::pair(std::move(l), std::move(r)));
  } while (lx.accept(Tok::conj));
  return g;
}

inline GoalClause parse_goal_clause(const std::string& text, const TermContext& ctx) {
  Lexer lx(text);
  GoalClause g = parse_goal_clause(lx, ctx);
  if (!lx.at(Tok::end)) lx.fail("trailing input after goal clause");
  return g;
}

}  // namespace ssgr
