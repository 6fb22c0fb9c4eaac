#pragma once

// Constructor-based conditional rewriting and innermost conditional
// narrowing on goal clauses. Both work on the leftmost non-T atom; within
// the atom every basic subterm is a candidate, which forces innermost
// evaluation because arguments of a basic term are already constructor
// terms. The implicit rule (x -> x) => T is built in.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssgr/ctrs.hpp"
#include "ssgr/goal.hpp"
#include "ssgr/subst.hpp"
#include "ssgr/unify.hpp"

namespace ssgr {

namespace detail {

// Is u basic, counting -> as a defined symbol (it heads the implicit rule)?
inline bool is_basic_or_arrow_redex(const Term& u, const Signature& sig) {
  if (u.is_var()) return false;
  if (u.sym() == arrow_symbol()) {
    for (const Term& a : u.args())
      if (!is_constructor_term(a, sig)) return false;
    return true;
  }
  return is_basic(u, sig);
}

struct RuleVariant {
  Term lhs, rhs;
  std::vector<std::pair<Term, Term>> conds;
  bool implicit = false;
};

inline Term rename_term(const Term& t, const std::map<Variable, Variable>& ren) {
  if (t.is_var()) {
    auto it = ren.find(t.var());
    return it == ren.end() ? t : Term::var(it->second);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(rename_term(a, ren));
  return Term::app(t.sym(), std::move(args));
}

inline RuleVariant fresh_variant(const CondRule& r, FreshState& fs) {
  std::map<Variable, Variable> ren;
  for (const Variable& v : rule_vars(r)) ren.emplace(v, fs.fresh_like(v));
  RuleVariant out;
  out.lhs = rename_term(r.lhs, ren);
  out.rhs = rename_term(r.rhs, ren);
  for (const auto& [s, t] : r.conds)
    out.conds.emplace_back(rename_term(s, ren), rename_term(t, ren));
  return out;
}

inline RuleVariant implicit_variant(FreshState& fs) {
  Term x = Term::var(fs.fresh("x"));
  RuleVariant out;
  out.lhs = Term::app(arrow_symbol(), {x, x});
  out.rhs = Term::app(top_symbol());
  out.implicit = true;
  return out;
}

inline std::vector<RuleVariant> all_variants(const Ctrs& R, FreshState& fs) {
  std::vector<RuleVariant> vs;
  for (const CondRule& r : R.rules) vs.push_back(fresh_variant(r, fs));
  vs.push_back(implicit_variant(fs));
  return vs;
}

// Builds the successor clause: prefix, instantiated conditions, rewritten
// atom (T when the whole atom was consumed by the implicit rule), suffix.
inline GoalClause build_successor(const GoalClause& g, int atom_index, const Term& new_atom_term,
                                  const std::vector<std::pair<Term, Term>>& new_conds,
                                  const Substitution& sigma, bool instantiate_rest) {
  GoalClause out;
  for (int i = 0; i < atom_index; ++i) out.atoms.push_back(g.atoms[i]);
  for (const auto& [s, t] : new_conds)
    out.atoms.push_back(GoalAtom::pair(sigma.apply(s), sigma.apply(t)));
  if (new_atom_term.sym() == top_symbol())
    out.atoms.push_back(GoalAtom::top());
  else
    out.atoms.push_back(GoalAtom::pair(sigma.apply(new_atom_term.args()[0]),
                                       sigma.apply(new_atom_term.args()[1])));
  for (size_t i = atom_index + 1; i < g.atoms.size(); ++i) {
    const GoalAtom& a = g.atoms[i];
    if (a.is_top || !instantiate_rest)
      out.atoms.push_back(a);
    else
      out.atoms.push_back(GoalAtom::pair(sigma.apply(a.lhs), sigma.apply(a.rhs)));
  }
  return out;
}

}  // namespace detail

// All one-step constructor-based rewrite successors of g.
inline std::vector<GoalClause> constructor_rewrite_step(const GoalClause& g, const Ctrs& R) {
  std::vector<GoalClause> out;
  int i = g.first_pending();
  if (i < 0) return out;
  Term atom = g.atoms[i].as_term();
  FreshState fs;  // variants only need distinct names within one match
  for (const Position& p : positions(atom)) {
    const Term& redex = subterm_at(atom, p);
    if (redex.is_var() || !detail::is_basic_or_arrow_redex(redex, R.sig)) continue;
    for (const detail::RuleVariant& rv : detail::all_variants(R, fs)) {
      auto sigma = match(rv.lhs, redex);
      if (!sigma) continue;
      if (!ranges_are_constructor(*sigma, R.sig)) continue;
      Term rewritten = replace_at(atom, p, sigma->apply(rv.rhs));
      // conditions are instantiated, the rest of the clause is untouched
      out.push_back(detail::build_successor(g, i, rewritten, rv.conds, *sigma, false));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const GoalClause& a, const GoalClause& b) { return show(a) < show(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct NarrowStep {
  Substitution step;  // restricted to the variables of the input clause
  GoalClause goal;
};

// All one-step innermost narrowing successors of g, with the narrowing
// substitution restricted to Var(g).
inline std::vector<NarrowStep> narrow_step(const GoalClause& g, const Ctrs& R, FreshState& fs) {
  std::vector<NarrowStep> out;
  int i = g.first_pending();
  if (i < 0) return out;
  Term atom = g.atoms[i].as_term();
  VarSet goal_vars = vars(g);
  for (const Position& p : positions(atom)) {
    const Term& redex = subterm_at(atom, p);
    if (redex.is_var() || !detail::is_basic_or_arrow_redex(redex, R.sig)) continue;
    VarSet redex_vars = vars(redex);
    for (const detail::RuleVariant& rv : detail::all_variants(R, fs)) {
      auto sigma = mgu(redex, rv.lhs, redex_vars);
      if (!sigma) continue;
      // the chosen mgu must be total on the redex variables; rename the
      // untouched ones to fresh variables (happens only with the
      // non-linear implicit rule)
      Substitution xi;
      for (const Variable& v : redex_vars)
        if (!sigma->in_domain(v)) xi.bind(v, Term::var(fs.fresh_like(v)));
      if (!xi.is_identity()) sigma = compose(xi, *sigma);
      if (!ranges_are_constructor(*sigma, R.sig)) continue;
      Substitution on_redex = restrict_to(*sigma, redex_vars);
      bool hygienic = true;
      for (const Variable& v : on_redex.vran())
        if (goal_vars.count(v)) hygienic = false;
      if (!hygienic) continue;
      Term rewritten = replace_at(atom, p, rv.rhs);
      NarrowStep st;
      st.step = restrict_to(*sigma, goal_vars);
      st.goal = detail::build_successor(g, i, rewritten, rv.conds, *sigma, true);
      out.push_back(std::move(st));
    }
  }
  std::sort(out.begin(), out.end(), [](const NarrowStep& a, const NarrowStep& b) {
    std::string ka = show(a.step) + "@" + show(a.goal);
    std::string kb = show(b.step) + "@" + show(b.goal);
    return ka < kb;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const NarrowStep& a, const NarrowStep& b) {
                          return a.step == b.step && a.goal == b.goal;
                        }),
            out.end());
  return out;
}

namespace detail {

// Joint canonical rendering of (accumulated substitution, goal) used to
// prune alpha-equivalent search states.
inline std::string state_key(const Substitution& acc, const GoalClause& g, const VarSet& fixed) {
  std::map<Variable, Variable> map;
  int next = 1;
  std::string key = "[";
  for (const auto& [v, t] : acc.bindings())
    key += v.str() + ":=" + show(canon_term(t, fixed, map, next)) + ";";
  key += "]";
  for (const GoalAtom& a : g.atoms) {
    if (a.is_top) {
      key += "T&";
    } else {
      key += show(canon_term(a.lhs, fixed, map, next)) + ">" +
             show(canon_term(a.rhs, fixed, map, next)) + "&";
    }
  }
  return key;
}

}  // namespace detail

struct NarrowDerivation {
  Substitution solution;
  std::vector<std::pair<Substitution, GoalClause>> steps;  // one witness derivation
};

// Bounded breadth-first enumeration of narrowing solutions: all composed
// substitutions of derivations of length <= depth that end in a clause over
// {T, /\}. Deduplicated up to renaming of variables outside Var(start).
inline std::vector<NarrowDerivation> narrow_search(const GoalClause& start, const Ctrs& R,
                                                   int depth) {
  FreshState fs;
  VarSet fixed = vars(start);
  std::vector<NarrowDerivation> found;
  std::set<std::string> seen_solutions;
  std::set<std::string> seen_states;

  struct Entry {
    GoalClause goal;
    Substitution acc;
    int parent;
    Substitution step;
  };
  std::vector<Entry> table;
  table.push_back({start, Substitution::identity(), -1, Substitution::identity()});
  std::deque<int> frontier{0};
  seen_states.insert(detail::state_key(Substitution::identity(), start, fixed));

  auto emit = [&](int idx) {
    const Entry& e = table[idx];
    Substitution canon = canon_ranges(e.acc, fixed);
    std::string key = show(canon);
    if (seen_solutions.count(key)) return;
    seen_solutions.insert(key);
    NarrowDerivation d;
    d.solution = e.acc;
    std::vector<int> path;
    for (int k = idx; k > 0; k = table[k].parent) path.push_back(k);
    for (auto it = path.rbegin(); it != path.rend(); ++it)
      d.steps.emplace_back(table[*it].step, table[*it].goal);
    found.push_back(std::move(d));
  };

  if (start.all_top()) emit(0);
  for (int d = 0; d < depth && !frontier.empty(); ++d) {
    std::deque<int> next_frontier;
    for (int idx : frontier) {
      GoalClause g = table[idx].goal;
      if (g.all_top()) continue;
      for (NarrowStep& st : narrow_step(g, R, fs)) {
        Substitution acc = restrict_to(compose(st.step, table[idx].acc), fixed);
        std::string key = detail::state_key(acc, st.goal, fixed);
        if (seen_states.count(key)) continue;
        seen_states.insert(key);
        table.push_back({st.goal, acc, idx, st.step});
        int nidx = static_cast<int>(table.size()) - 1;
        if (st.goal.all_top())
          emit(nidx);
        else
          next_frontier.push_back(nidx);
      }
    }
    frontier = std::move(next_frontier);
  }
  return found;
}

inline std::vector<Substitution> narrow_solutions(const GoalClause& start, const Ctrs& R,
                                                  int depth) {
  std::vector<Substitution> out;
  for (auto& d : narrow_search(start, R, depth)) out.push_back(d.solution);
  return out;
}

// Minimal number of constructor-rewriting steps from g to a clause over
// {T, /\}, searched up to `cap` steps; nullopt if unreachable within cap.
inline std::optional<int> min_rewrite_steps(const GoalClause& g, const Ctrs& R, int cap) {
  std::set<std::string> seen{show(g)};
  std::deque<GoalClause> frontier{g};
  if (g.all_top()) return 0;
  for (int d = 1; d <= cap && !frontier.empty(); ++d) {
    std::deque<GoalClause> next_frontier;
    for (const GoalClause& cur : frontier) {
      for (GoalClause& succ : constructor_rewrite_step(cur, R)) {
        if (succ.all_top()) return d;
        std::string key = show(succ);
        if (seen.count(key)) continue;
        seen.insert(key);
        next_frontier.push_back(std::move(succ));
      }
    }
    frontier = std::move(next_frontier);
  }
  return std::nullopt;
}

// All ground constructor terms of height <= maxHeight.
inline std::vector<Term> enumerate_ground_terms(const std::vector<Symbol>& ctors, int maxHeight) {
  std::vector<Term> cur;
  for (const Symbol& c : ctors)
    if (c.arity == 0) cur.push_back(Term::app(c));
  std::set<Term> all(cur.begin(), cur.end());
  for (int h = 1; h <= maxHeight; ++h) {
    std::vector<Term> prev(all.begin(), all.end());
    for (const Symbol& c : ctors) {
      if (c.arity == 0) continue;
      std::vector<size_t> idx(c.arity, 0);
      while (true) {
        std::vector<Term> args;
        for (int k = 0; k < c.arity; ++k) args.push_back(prev[idx[k]]);
        all.insert(Term::app(c, std::move(args)));
        int k = c.arity - 1;
        while (k >= 0 && ++idx[k] == prev.size()) idx[k--] = 0;
        if (k < 0) break;
      }
    }
  }
  std::vector<Term> out;
  for (const Term& t : all)
    if (height(t) <= maxHeight) out.push_back(t);
  return out;
}

}  // namespace ssgr
