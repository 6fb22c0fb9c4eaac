#pragma once

// Rule-based unification (Martelli/Montanari style) with occurs check, and
// parallel composition of idempotent substitutions on top of it.

#include <optional>
#include <utility>
#include <vector>

#include "ssgr/subst.hpp"
#include "ssgr/term.hpp"

namespace ssgr {

using Equation = std::pair<Term, Term>;

namespace detail {

// Binds x -> t on top of the solved substitution. t must already be
// s-applied and must not contain x.
inline void solve_bind(Substitution& s, const Variable& x, const Term& t) {
  Substitution step;
  step.bind(x, t);
  s = compose(step, s);
}

inline bool unify_rec(const Term& a0, const Term& b0, Substitution& s, const VarSet& prefer) {
  Term a = s.apply(a0);
  Term b = s.apply(b0);
  if (a == b) return true;
  if (a.is_var() && b.is_var()) {
    // Eliminate a preferred variable first so it ends up in the domain;
    // ties eliminate the left one.
    const Variable& x = a.var();
    const Variable& y = b.var();
    if (!prefer.count(x) && prefer.count(y))
      solve_bind(s, y, a);
    else
      solve_bind(s, x, b);
    return true;
  }
  if (a.is_var()) {
    if (contains_var(b, a.var())) return false;  // occurs check
    solve_bind(s, a.var(), b);
    return true;
  }
  if (b.is_var()) {
    if (contains_var(a, b.var())) return false;
    solve_bind(s, b.var(), a);
    return true;
  }
  if (a.sym() != b.sym()) return false;  // clash
  for (size_t i = 0; i < a.args().size(); ++i)
    if (!unify_rec(a.args()[i], b.args()[i], s, prefer)) return false;
  return true;
}

}  // namespace detail

// Most general unifier of a set of equations, or nullopt if not unifiable.
// The result is idempotent. When a variable-variable equation can be solved
// either way, a variable from `prefer` is eliminated first (i.e. kept in
// the domain of the result).
inline std::optional<Substitution> mgu(const std::vector<Equation>& eqs,
                                       const VarSet& prefer = {}) {
  Substitution s;
  for (const auto& [a, b] : eqs)
    if (!detail::unify_rec(a, b, s, prefer)) return std::nullopt;
  return s;
}

inline std::optional<Substitution> mgu(const Term& a, const Term& b, const VarSet& prefer = {}) {
  return mgu(std::vector<Equation>{{a, b}}, prefer);
}

// The equation form of a substitution: { x = s(x) | x in Dom(s) }.
inline std::vector<Equation> equation_form(const Substitution& s) {
  std::vector<Equation> eqs;
  for (const auto& [v, t] : s.bindings()) eqs.emplace_back(Term::var(v), t);
  return eqs;
}

// Parallel composition: mgu of the union of the two equation forms, solved
// so that Dom(t1) u Dom(t2) ends up inside the domain of the result.
// Fails on non-idempotent input or when the union is not unifiable.
inline std::optional<Substitution> parallel_compose(const Substitution& t1,
                                                    const Substitution& t2) {
  if (!t1.is_idempotent() || !t2.is_idempotent()) return std::nullopt;
  std::vector<Equation> eqs = equation_form(t1);
  for (auto& e : equation_form(t2)) eqs.push_back(std::move(e));
  VarSet prefer = set_union(t1.domain(), t2.domain());
  return mgu(eqs, prefer);
}

// One-way matching: finds s with s(pattern) == instance, binding only
// pattern variables.
inline bool match_rec(const Term& pattern, const Term& instance, Substitution& s) {
  if (pattern.is_var()) {
    const Term* bound = s.lookup(pattern.var());
    if (bound) return *bound == instance;
    if (instance.is_var() && instance.var() == pattern.var()) return true;
    s.bind(pattern.var(), instance);
    return true;
  }
  if (instance.is_var() || pattern.sym() != instance.sym()) return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match_rec(pattern.args()[i], instance.args()[i], s)) return false;
  return true;
}

inline std::optional<Substitution> match(const Term& pattern, const Term& instance) {
  Substitution s;
  if (!match_rec(pattern, instance, s)) return std::nullopt;
  return s;
}

}  // namespace ssgr
