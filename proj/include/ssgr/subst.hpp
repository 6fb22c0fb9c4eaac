#pragma once

// Substitutions as finite maps from variables to terms. Identity bindings
// are normalized away so that the domain is well defined and comparison is
// structural. All operations are pure; fresh names come from an explicitly
// threaded FreshState.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssgr/term.hpp"

namespace ssgr {

class Substitution {
  std::map<Variable, Term> b_;

 public:
  Substitution() = default;

  static Substitution identity() { return Substitution(); }

  static Substitution make(std::vector<std::pair<Variable, Term>> bindings) {
    Substitution s;
    for (auto& [v, t] : bindings) s.bind(v, t);
    return s;
  }

  // Inserts or overwrites a binding; x -> x is dropped.
  void bind(const Variable& v, const Term& t) {
    if (t.is_var() && t.var() == v) {
      b_.erase(v);
      return;
    }
    b_[v] = t;
  }

  bool is_identity() const { return b_.empty(); }
  size_t size() const { return b_.size(); }

  const std::map<Variable, Term>& bindings() const { return b_; }

  const Term* lookup(const Variable& v) const {
    auto it = b_.find(v);
    return it == b_.end() ? nullptr : &it->second;
  }

  bool in_domain(const Variable& v) const { return b_.count(v) > 0; }

  VarSet domain() const {
    VarSet d;
    for (const auto& [v, t] : b_) d.insert(v);
    return d;
  }

  // Variables occurring in the range.
  VarSet vran() const {
    VarSet r;
    for (const auto& [v, t] : b_) collect_vars(t, r);
    return r;
  }

  bool is_idempotent() const {
    VarSet r = vran();
    for (const auto& [v, t] : b_)
      if (r.count(v)) return false;
    return true;
  }

  Term operator()(const Variable& v) const {
    const Term* t = lookup(v);
    return t ? *t : Term::var(v);
  }

  Term apply(const Term& t) const {
    if (t.is_var()) {
      const Term* r = lookup(t.var());
      return r ? *r : t;
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term& a : t.args()) args.push_back(apply(a));
    return Term::app(t.sym(), std::move(args));
  }

  bool operator==(const Substitution& o) const { return b_ == o.b_; }
  bool operator!=(const Substitution& o) const { return !(*this == o); }
  bool operator<(const Substitution& o) const { return b_ < o.b_; }
};

inline std::string show(const Substitution& s) {
  std::string r = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    if (!first) r += ", ";
    first = false;
    r += v.str() + " -> " + show(t);
  }
  return r + "}";
}

// (outer . inner)(x) = outer(inner(x)); identity bindings drop out.
inline Substitution compose(const Substitution& outer, const Substitution& inner) {
  Substitution r;
  for (const auto& [v, t] : inner.bindings()) r.bind(v, outer.apply(t));
  for (const auto& [v, t] : outer.bindings())
    if (!inner.in_domain(v)) r.bind(v, t);
  return r;
}

inline Substitution restrict_to(const Substitution& s, const VarSet& vs) {
  Substitution r;
  for (const auto& [v, t] : s.bindings())
    if (vs.count(v)) r.bind(v, t);
  return r;
}

inline bool ranges_are_constructor(const Substitution& s, const Signature& sig) {
  for (const auto& [v, t] : s.bindings())
    if (!is_constructor_term(t, sig)) return false;
  return true;
}

// Deterministic fresh-variable source. Indices grow monotonically, so a
// generated variable can never collide with input variables (index 0) or
// with earlier generated ones.
struct FreshState {
  long counter = 0;

  Variable fresh(const std::string& base) { return Variable{base, static_cast<int>(++counter)}; }

  Variable fresh_like(const Variable& v) { return fresh(v.base); }
};

// Renames every range variable of s to a fresh one, consistently. The
// result (xi . s)|Dom(s) keeps the domain and has a range disjoint from
// avoid and from Dom(s).
inline Substitution freshen(const Substitution& s, const VarSet& avoid, FreshState& fs) {
  Substitution xi;
  VarSet dom = s.domain();
  for (const Variable& v : s.vran()) {
    Variable f = fs.fresh_like(v);
    while (avoid.count(f) || dom.count(f)) f = fs.fresh_like(v);
    xi.bind(v, Term::var(f));
  }
  return restrict_to(compose(xi, s), dom);
}

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet r = a;
  r.insert(b.begin(), b.end());
  return r;
}

inline VarSet dom_and_vran(const Substitution& s) { return set_union(s.domain(), s.vran()); }

// --- Alpha equivalence ------------------------------------------------------

// Canonically renames every variable of t that is not in `fixed`, assigning
// ~1, ~2, ... in depth-first order of first occurrence. `map` carries the
// renaming across calls so that several terms can be canonicalized jointly.
inline Term canon_term(const Term& t, const VarSet& fixed, std::map<Variable, Variable>& map,
                       int& next) {
  if (t.is_var()) {
    const Variable& v = t.var();
    if (fixed.count(v)) return t;
    auto it = map.find(v);
    if (it == map.end()) it = map.emplace(v, Variable{"~", next++}).first;
    return Term::var(it->second);
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(canon_term(a, fixed, map, next));
  return Term::app(t.sym(), std::move(args));
}

// Canonical form of a substitution whose domain is held fixed and whose
// range variables outside `fixed` are renamed in order of first occurrence.
inline Substitution canon_ranges(const Substitution& s, const VarSet& fixed) {
  std::map<Variable, Variable> map;
  int next = 1;
  Substitution r;
  for (const auto& [v, t] : s.bindings()) r.bind(v, canon_term(t, fixed, map, next));
  return r;
}

// s1 and s2 are equal up to a consistent renaming of range variables
// outside `fixed` (domains must coincide).
inline bool alpha_equal_ranges(const Substitution& s1, const Substitution& s2,
                               const VarSet& fixed) {
  return canon_ranges(s1, fixed) == canon_ranges(s2, fixed);
}

namespace detail {

// Tries to extend the bijection ren (and its inverse) so that
// ren(a) == b pointwise on variables outside `fixed`.
inline bool match_terms_bij(const Term& a, const Term& b, const VarSet& fixed,
                            std::map<Variable, Variable>& ren,
                            std::map<Variable, Variable>& inv) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    const Variable& x = a.var();
    const Variable& y = b.var();
    bool fx = fixed.count(x) > 0, fy = fixed.count(y) > 0;
    if (fx || fy) return fx && fy && x == y;
    auto it = ren.find(x);
    if (it != ren.end()) return it->second == y;
    if (inv.count(y)) return false;
    ren.emplace(x, y);
    inv.emplace(y, x);
    return true;
  }
  if (a.sym() != b.sym()) return false;
  for (size_t i = 0; i < a.args().size(); ++i)
    if (!match_terms_bij(a.args()[i], b.args()[i], fixed, ren, inv)) return false;
  return true;
}

inline bool alpha_equal_outside_rec(const std::vector<std::pair<Variable, Term>>& b1,
                                    const std::vector<std::pair<Variable, Term>>& b2,
                                    std::vector<bool>& used, const VarSet& fixed,
                                    std::map<Variable, Variable> ren,
                                    std::map<Variable, Variable> inv, size_t i) {
  if (i == b1.size()) return true;
  const auto& [x, t] = b1[i];
  for (size_t j = 0; j < b2.size(); ++j) {
    if (used[j]) continue;
    const auto& [y, u] = b2[j];
    auto ren2 = ren;
    auto inv2 = inv;
    // domain variables are renamed by the same bijection
    if (!match_terms_bij(Term::var(x), Term::var(y), fixed, ren2, inv2)) continue;
    if (!match_terms_bij(t, u, fixed, ren2, inv2)) continue;
    used[j] = true;
    if (alpha_equal_outside_rec(b1, b2, used, fixed, std::move(ren2), std::move(inv2), i + 1))
      return true;
    used[j] = false;
  }
  return false;
}

}  // namespace detail

// s2 == ren . s1 . ren^-1 for some bijective renaming ren that fixes every
// variable in `fixed` (domain and range variables may both be renamed).
inline bool alpha_equal_outside(const Substitution& s1, const Substitution& s2,
                                const VarSet& fixed) {
  if (s1.size() != s2.size()) return false;
  std::vector<std::pair<Variable, Term>> b1(s1.bindings().begin(), s1.bindings().end());
  std::vector<std::pair<Variable, Term>> b2(s2.bindings().begin(), s2.bindings().end());
  std::vector<bool> used(b2.size(), false);
  return detail::alpha_equal_outside_rec(b1, b2, used, fixed, {}, {}, 0);
}

}  // namespace ssgr
