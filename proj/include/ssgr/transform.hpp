#pragma once

// The range transformation: turns a substitution-set grammar satisfying a
// syntactic shape condition into a regular tree grammar over the paired
// signature that overapproximates the coded ranges of its substitutions
// with respect to two chosen variables.

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ssgr/coding.hpp"
#include "ssgr/rtg.hpp"
#include "ssgr/ssg.hpp"

namespace ssgr {

// The marker for "any ground constructor term" inside pattern terms. The
// name A is reserved; it never becomes an output alphabet symbol.
inline const Symbol& any_marker() {
  static const Symbol s{"A", 0, SymbolKind::constructor};
  return s;
}

inline bool is_any(const Term& t) { return !t.is_var() && t.sym() == any_marker(); }

inline Term abstract_vars(const Term& t) {
  if (t.is_var()) return Term::app(any_marker());
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(abstract_vars(a));
  return Term::app(t.sym(), std::move(args));
}

inline Term abstract_vars_outside(const Term& t, const VarSet& keep) {
  if (t.is_var()) return keep.count(t.var()) ? t : Term::app(any_marker());
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(abstract_vars_outside(a, keep));
  return Term::app(t.sym(), std::move(args));
}

// Pats: the subterm closure of all substitution ranges in the grammar,
// fully abstracted. Deliberately coarse; unused patterns are never
// materialized because nonterminals are generated on demand.
inline std::set<Term> pats(const Ssg& g) {
  std::set<Term> out;
  auto add_range_term = [&](const Term& s) {
    for (const Position& p : positions(s)) out.insert(abstract_vars(subterm_at(s, p)));
  };
  std::function<void(const SigmaExpr&)> walk = [&](const SigmaExpr& e) {
    switch (e.kind()) {
      case SigmaExpr::Kind::subst:
        for (const auto& [v, t] : e.as_subst().bindings()) add_range_term(t);
        break;
      case SigmaExpr::Kind::comp:
      case SigmaExpr::Kind::par:
        walk(e.left());
        walk(e.right());
        break;
      case SigmaExpr::Kind::rec:
        walk(e.rec_body());
        // renaming ranges are variables; their abstraction is just A
        if (!e.rec_delta().pairs.empty()) out.insert(Term::app(any_marker()));
        break;
      default:
        break;
    }
  };
  for (const auto& r : g.rules) walk(r.alt);
  return out;
}

// --- Rule normalization --------------------------------------------------------

// A rule alternative in the shape the transformation understands: either a
// substitution constant or rec(target, delta) . theta. A bare nonterminal
// or a nonterminal as left factor of a composition is read as a rec with
// the identity renaming on the target's goal variables.
struct NormalAlt {
  bool is_rec = false;
  Substitution theta;
  std::string target;
  RenamingPairs delta;
  bool theta_is_implicit_id = false;  // bare rec: exempt from Dom(theta) = Var(T')
  std::string origin;                 // rendered source alternative
};

struct AssumptionViolation {
  std::string rule;       // rendered rule
  std::string kind;       // "shape" or "position"
  std::string detail;     // human-readable clause
  // position violations only:
  Variable x, y;
  Position pos;
  Term left_term, right_term;  // theta(x), theta(y) as written in the rule
  Term left_sub, right_sub;    // their subterms at pos
};

struct AssumptionReport {
  bool ok = true;
  std::vector<AssumptionViolation> violations;
  std::vector<std::string> notes;  // dropped empty alternatives etc.
};

struct AssumptionError : std::runtime_error {
  AssumptionReport report;
  explicit AssumptionError(AssumptionReport r)
      : std::runtime_error("grammar violates the transformation assumption"),
        report(std::move(r)) {}
};

namespace detail {

inline void collect_expr_nonterms(const SigmaExpr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case SigmaExpr::Kind::nonterm:
      out.insert(e.nt_name());
      break;
    case SigmaExpr::Kind::comp:
    case SigmaExpr::Kind::par:
      collect_expr_nonterms(e.left(), out);
      collect_expr_nonterms(e.right(), out);
      break;
    case SigmaExpr::Kind::rec:
      collect_expr_nonterms(e.rec_body(), out);
      break;
    default:
      break;
  }
}

inline std::vector<SigmaExpr> flatten_comp(const SigmaExpr& e) {
  if (e.kind() != SigmaExpr::Kind::comp) return {e};
  std::vector<SigmaExpr> l = flatten_comp(e.left());
  for (auto& r : flatten_comp(e.right())) l.push_back(std::move(r));
  return l;
}

inline RenamingPairs identity_renaming(const std::vector<Variable>& vars) {
  RenamingPairs r;
  for (const Variable& v : vars) r.pairs.emplace_back(v, v);
  return r;
}

inline void collect_variable_bases(const SigmaExpr& e, std::set<std::string>& out) {
  auto from_subst = [&](const Substitution& s) {
    for (const auto& [v, t] : s.bindings()) {
      out.insert(v.base);
      for (const Variable& w : vars(t)) out.insert(w.base);
    }
  };
  switch (e.kind()) {
    case SigmaExpr::Kind::subst:
      from_subst(e.as_subst());
      break;
    case SigmaExpr::Kind::comp:
    case SigmaExpr::Kind::par:
      collect_variable_bases(e.left(), out);
      collect_variable_bases(e.right(), out);
      break;
    case SigmaExpr::Kind::rec:
      collect_variable_bases(e.rec_body(), out);
      for (const auto& [a, b] : e.rec_delta().pairs) {
        out.insert(a.base);
        out.insert(b.base);
      }
      break;
    default:
      break;
  }
}

inline std::set<std::string> all_variable_bases(const Ssg& g) {
  std::set<std::string> out;
  for (const auto& nt : g.nts)
    for (const Variable& v : nt.goal_vars) out.insert(v.base);
  for (const auto& r : g.rules) collect_variable_bases(r.alt, out);
  return out;
}

}  // namespace detail

// Collects the reachable nonterminals of the grammar, starting from `from`.
inline std::set<std::string> reachable_ssg_nts(const Ssg& g, const std::string& from) {
  std::set<std::string> seen{from};
  std::deque<std::string> work{from};
  while (!work.empty()) {
    std::string cur = work.front();
    work.pop_front();
    for (const auto& r : g.rules) {
      if (r.lhs != cur) continue;
      std::set<std::string> mentioned;
      detail::collect_expr_nonterms(r.alt, mentioned);
      for (const std::string& n : mentioned)
        if (seen.insert(n).second) work.push_back(n);
    }
  }
  return seen;
}

// Normalizes one alternative. Returns nullopt with `drop` set when the
// alternative contains the empty set (it contributes no substitutions).
inline std::optional<NormalAlt> normalize_alt(const Ssg& g, const std::string& lhs,
                                              const SigmaExpr& e, bool& drop,
                                              std::string& error) {
  drop = false;
  std::string origin = lhs + " -> " + show(e);
  if (contains_empty(e)) {
    drop = true;
    return std::nullopt;
  }
  auto fail = [&](const std::string& msg) {
    error = "rule " + origin + ": " + msg;
    return std::nullopt;
  };

  std::vector<SigmaExpr> parts = detail::flatten_comp(e);
  // trailing components after the head must all be substitution constants
  Substitution theta;
  bool have_theta = false;
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].kind() != SigmaExpr::Kind::subst)
      return fail("composition tail must consist of substitution constants");
    theta = have_theta ? compose(theta, parts[i].as_subst()) : parts[i].as_subst();
    have_theta = true;
  }

  const SigmaExpr& head = parts[0];
  NormalAlt out;
  out.origin = origin;
  out.theta = theta;
  out.theta_is_implicit_id = !have_theta;
  switch (head.kind()) {
    case SigmaExpr::Kind::subst:
      if (have_theta) {
        out.theta = compose(head.as_subst(), theta);
      } else {
        out.theta = head.as_subst();
        out.theta_is_implicit_id = false;
      }
      out.is_rec = false;
      return out;
    case SigmaExpr::Kind::rec: {
      if (head.rec_body().kind() != SigmaExpr::Kind::nonterm)
        return fail("rec body must be a nonterminal");
      out.is_rec = true;
      out.target = head.rec_body().nt_name();
      out.delta = head.rec_delta();
      return out;
    }
    case SigmaExpr::Kind::nonterm: {
      // A nonterminal as the whole alternative or as the left factor of a
      // composition is read as rec. A bare nonterminal gets the identity
      // renaming; a composition tail gets a synthesized indirection so
      // that the trailing substitution becomes idempotent: G . {x -> s(x)}
      // turns into rec(G, {x' -> x}) . {x -> s(x')}.
      const SsgNonterminal* target = g.find_nt(head.nt_name());
      if (!target) return fail("unknown nonterminal " + head.nt_name());
      out.is_rec = true;
      out.target = head.nt_name();
      if (!have_theta) {
        out.delta = detail::identity_renaming(target->goal_vars);
        return out;
      }
      std::set<std::string> used = detail::all_variable_bases(g);
      Substitution rho;
      RenamingPairs delta;
      for (const Variable& v : target->goal_vars) {
        std::string base = v.base + "'";
        while (used.count(base)) base += "'";
        used.insert(base);
        Variable pv{base, 0};
        delta.pairs.emplace_back(pv, v);
        rho.bind(v, Term::var(pv));
      }
      out.delta = std::move(delta);
      out.theta = restrict_to(compose(rho, theta), theta.domain());
      out.theta_is_implicit_id = false;
      return out;
    }
    default:
      return fail("alternative is not a substitution or rec(...) composition");
  }
}

// Checks the shape and the position condition for every rule reachable
// from `from`. The position condition: for every rec alternative with
// target T'', every pair of goal variables x, y of the rule head, and
// every common position p of delta(theta(x)) and delta(theta(y)): when one
// side is a variable of T'', the other must be a T'' variable as well or a
// constructor term without T'' variables.
inline AssumptionReport check_assumption(const Ssg& g, const std::string& from,
                                         std::map<std::string, std::vector<NormalAlt>>* out_alts =
                                             nullptr) {
  AssumptionReport rep;
  const SsgNonterminal* start = g.find_nt(from);
  if (!start) {
    rep.ok = false;
    rep.violations.push_back({from, "shape", "unknown nonterminal " + from, {}, {}, {}, {}, {},
                              {}, {}});
    return rep;
  }
  for (const std::string& nt_name : reachable_ssg_nts(g, from)) {
    const SsgNonterminal* decl = g.find_nt(nt_name);
    if (!decl) {
      rep.ok = false;
      rep.violations.push_back({nt_name, "shape", "undeclared nonterminal " + nt_name, {}, {},
                                {}, {}, {}, {}, {}});
      continue;
    }
    VarSet head_vars = decl->goal_var_set();
    std::vector<NormalAlt> alts;
    for (const SigmaExpr& alt : g.alternatives(nt_name)) {
      bool drop = false;
      std::string error;
      auto norm = normalize_alt(g, nt_name, alt, drop, error);
      if (drop) {
        rep.notes.push_back("dropped alternative with empty: " + nt_name + " -> " + show(alt));
        continue;
      }
      if (!norm) {
        rep.ok = false;
        rep.violations.push_back({nt_name + " -> " + show(alt), "shape", error, {}, {}, {}, {},
                                  {}, {}, {}});
        continue;
      }
      // domain and range side conditions
      if (!norm->theta_is_implicit_id || !norm->is_rec) {
        if (!norm->theta.is_idempotent()) {
          rep.ok = false;
          rep.violations.push_back({norm->origin, "shape",
                                    "substitution " + show(norm->theta) + " is not idempotent",
                                    {}, {}, {}, {}, {}, {}, {}});
        }
        if (norm->theta.domain() != head_vars) {
          rep.ok = false;
          rep.violations.push_back(
              {norm->origin, "shape",
               "Dom(" + show(norm->theta) + ") must equal the goal variables of " + nt_name,
               {}, {}, {}, {}, {}, {}, {}});
        }
      }
      if (norm->is_rec) {
        const SsgNonterminal* target = g.find_nt(norm->target);
        if (!target) {
          rep.ok = false;
          rep.violations.push_back({norm->origin, "shape",
                                    "unknown rec target " + norm->target, {}, {}, {}, {}, {},
                                    {}, {}});
          continue;
        }
        if (norm->delta.vran() != target->goal_var_set()) {
          rep.ok = false;
          rep.violations.push_back(
              {norm->origin, "shape",
               "VRan(" + show(norm->delta) + ") must equal the goal variables of " +
                   norm->target,
               {}, {}, {}, {}, {}, {}, {}});
          continue;
        }
        // position condition over all pairs of head variables
        VarSet target_vars = target->goal_var_set();
        auto in_target = [&](const Term& t) {
          return t.is_var() && target_vars.count(t.var()) > 0;
        };
        auto constructor_without_target_vars = [&](const Term& t) {
          if (t.is_var()) return target_vars.count(t.var()) == 0;
          for (const Variable& v : vars(t))
            if (target_vars.count(v)) return false;
          return true;
        };
        std::vector<Variable> hv(decl->goal_vars);
        for (size_t i = 0; i < hv.size(); ++i) {
          for (size_t j = i + 1; j < hv.size(); ++j) {
            Term tx = norm->theta.apply(Term::var(hv[i]));
            Term ty = norm->theta.apply(Term::var(hv[j]));
            Term dx = norm->delta.apply(tx);
            Term dy = norm->delta.apply(ty);
            for (const Position& p : positions(dx)) {
              bool in_both = true;
              try {
                subterm_at(dy, p);
              } catch (const std::out_of_range&) {
                in_both = false;
              }
              if (!in_both) continue;
              const Term& ax = subterm_at(dx, p);
              const Term& ay = subterm_at(dy, p);
              auto record = [&](const Variable& vx, const Variable& vy,
                                const std::string& which) {
                rep.ok = false;
                AssumptionViolation v;
                v.rule = norm->origin;
                v.kind = "position";
                v.x = vx;
                v.y = vy;
                v.pos = p;
                v.left_term = norm->theta.apply(Term::var(vx));
                v.right_term = norm->theta.apply(Term::var(vy));
                v.left_sub = subterm_at(v.left_term, p);
                v.right_sub = subterm_at(v.right_term, p);
                v.detail = "pair (" + vx.str() + "," + vy.str() + ") at position " + show(p) +
                           ": " + which + " side " + show(which == "left" ? v.left_sub : v.right_sub) +
                           " is a variable of the rec target, but " + show(which == "left" ? v.right_sub : v.left_sub) +
                           " mixes constructors with rec-target variables";
                rep.violations.push_back(std::move(v));
              };
              if (in_target(ax) && !in_target(ay) && !constructor_without_target_vars(ay))
                record(hv[i], hv[j], "left");
              if (in_target(ay) && !in_target(ax) && !constructor_without_target_vars(ax))
                record(hv[i], hv[j], "right");
            }
          }
        }
      }
      alts.push_back(std::move(*norm));
    }
    if (out_alts) (*out_alts)[nt_name] = std::move(alts);
  }
  return rep;
}

// --- CodingNT and Ran ------------------------------------------------------------

// A nonterminal component: a variable, a pattern term (over C u {A}), or
// bot. Patterns and variables are distinguished by Term::is_var.
using NtComponent = std::optional<Term>;  // nullopt = bot

inline std::string show_component(const NtComponent& c) {
  if (!c) return bot_name();
  return show(*c);
}

enum class PatternMode {
  asymmetric,  // <t,y> abstracts the left pattern to A
  symmetric,  // <t,y> keeps the pattern, mirroring <x,t>
};

namespace detail {

struct RangeNtInfo {
  enum class Kind { gamma, a_a, a_bot, bot_a } kind;
  std::string ssg_nt;  // gamma only
  NtComponent c1, c2;  // gamma only
};

struct RanBuilder {
  const Ssg& g;
  const std::map<std::string, std::vector<NormalAlt>>& alts;
  std::set<Term> pattern_set;
  PatternMode mode;

  std::map<std::string, RangeNtInfo> registry;
  std::deque<std::string> pending;
  Rtg out;

  RanBuilder(const Ssg& g_, const std::map<std::string, std::vector<NormalAlt>>& alts_,
             PatternMode mode_)
      : g(g_), alts(alts_), pattern_set(pats(g_)), mode(mode_) {}

  std::string demand_gamma(const std::string& ssg_nt, NtComponent c1, NtComponent c2) {
    std::string name =
        ssg_nt + "^(" + show_component(c1) + "," + show_component(c2) + ")";
    if (!registry.count(name)) {
      registry.emplace(name, RangeNtInfo{RangeNtInfo::Kind::gamma, ssg_nt, c1, c2});
      pending.push_back(name);
    }
    return name;
  }

  std::string demand_na(RangeNtInfo::Kind kind) {
    std::string name = kind == RangeNtInfo::Kind::a_a     ? "A_A"
                       : kind == RangeNtInfo::Kind::a_bot ? "A_bot"
                                                          : "bot_A";
    if (!registry.count(name)) {
      registry.emplace(name, RangeNtInfo{kind, "", std::nullopt, std::nullopt});
      pending.push_back(name);
    }
    return name;
  }

  bool is_pattern(const Term& t) const { return pattern_set.count(t) > 0; }

  // The recursive coding of two component terms into grammar right-hand
  // sides. `target` is the rec target whose variables remain in the terms;
  // nullopt in the plain/base cases where no variables can occur.
  std::vector<RtgRhs> coding_nt(const NtComponent& a, const NtComponent& b,
                                const std::optional<std::string>& target) {
    auto gamma_ref = [&](NtComponent c1, NtComponent c2) {
      if (!target)
        throw std::logic_error("coding reached a variable without a rec target");
      return RtgRhs::ref(demand_gamma(*target, std::move(c1), std::move(c2)));
    };
    auto paired = [&](const std::optional<Symbol>& l, const std::optional<Symbol>& r) {
      return PairedSymbol{l, r}.as_symbol();
    };
    auto cartesian = [&](const Symbol& head, const std::vector<std::vector<RtgRhs>>& kids) {
      std::vector<RtgRhs> out_terms;
      std::vector<size_t> idx(kids.size(), 0);
      for (const auto& k : kids)
        if (k.empty()) return out_terms;
      while (true) {
        std::vector<RtgRhs> args;
        for (size_t i = 0; i < kids.size(); ++i) args.push_back(kids[i][idx[i]]);
        out_terms.push_back(RtgRhs::app(head, std::move(args)));
        int i = static_cast<int>(kids.size()) - 1;
        while (i >= 0 && ++idx[i] == kids[i].size()) idx[i--] = 0;
        if (i < 0) break;
      }
      return out_terms;
    };

    if (!a && !b) throw std::logic_error("coding of (bot, bot)");

    // one side bot
    if (!a) {
      const Term& t = *b;
      if (t.is_var()) return {gamma_ref(std::nullopt, t)};
      if (is_any(t)) return {RtgRhs::ref(demand_na(RangeNtInfo::Kind::bot_a))};
      std::vector<std::vector<RtgRhs>> kids;
      for (const Term& ti : t.args()) kids.push_back(coding_nt(std::nullopt, ti, target));
      return cartesian(paired(std::nullopt, t.sym()), kids);
    }
    if (!b) {
      const Term& t = *a;
      if (t.is_var()) return {gamma_ref(t, std::nullopt)};
      if (is_any(t)) return {RtgRhs::ref(demand_na(RangeNtInfo::Kind::a_bot))};
      std::vector<std::vector<RtgRhs>> kids;
      for (const Term& ti : t.args()) kids.push_back(coding_nt(ti, std::nullopt, target));
      return cartesian(paired(t.sym(), std::nullopt), kids);
    }

    const Term& s = *a;
    const Term& t = *b;
    if (s.is_var() && t.is_var()) return {gamma_ref(s, t)};
    if (s.is_var()) {
      if (!is_pattern(t))
        throw std::logic_error("coding: right argument " + show(t) +
                               " is not a pattern of the grammar");
      return {gamma_ref(s, t)};
    }
    if (t.is_var()) {
      if (!is_pattern(s))
        throw std::logic_error("coding: left argument " + show(s) +
                               " is not a pattern of the grammar");
      if (mode == PatternMode::asymmetric) return {gamma_ref(Term::app(any_marker()), t)};
      return {gamma_ref(s, t)};
    }

    bool sa = is_any(s), ta = is_any(t);
    if (sa && ta) return {RtgRhs::ref(demand_na(RangeNtInfo::Kind::a_a))};
    if (sa) {
      // expand A against g(t1..tn): any constructor head on the left
      std::vector<RtgRhs> out_terms;
      int n = t.sym().arity;
      for (const Symbol& f : g.constructors) {
        int m = f.arity;
        std::vector<std::vector<RtgRhs>> kids;
        for (int i = 0; i < std::min(m, n); ++i)
          kids.push_back(coding_nt(Term::app(any_marker()), t.args()[i], target));
        for (int i = m; i < n; ++i) kids.push_back(coding_nt(std::nullopt, t.args()[i], target));
        for (int i = n; i < m; ++i)
          kids.push_back(coding_nt(Term::app(any_marker()), std::nullopt, target));
        for (RtgRhs& r : cartesian(paired(f, t.sym()), kids)) out_terms.push_back(std::move(r));
      }
      return out_terms;
    }
    if (ta) {
      std::vector<RtgRhs> out_terms;
      int m = s.sym().arity;
      for (const Symbol& gg : g.constructors) {
        int n = gg.arity;
        std::vector<std::vector<RtgRhs>> kids;
        for (int i = 0; i < std::min(m, n); ++i)
          kids.push_back(coding_nt(s.args()[i], Term::app(any_marker()), target));
        for (int i = m; i < n; ++i)
          kids.push_back(coding_nt(std::nullopt, Term::app(any_marker()), target));
        for (int i = n; i < m; ++i) kids.push_back(coding_nt(s.args()[i], std::nullopt, target));
        for (RtgRhs& r : cartesian(paired(s.sym(), gg), kids)) out_terms.push_back(std::move(r));
      }
      return out_terms;
    }

    // both constructor-rooted
    int m = s.sym().arity, n = t.sym().arity;
    std::vector<std::vector<RtgRhs>> kids;
    for (int i = 0; i < std::min(m, n); ++i)
      kids.push_back(coding_nt(s.args()[i], t.args()[i], target));
    for (int i = m; i < n; ++i) kids.push_back(coding_nt(std::nullopt, t.args()[i], target));
    for (int i = n; i < m; ++i) kids.push_back(coding_nt(s.args()[i], std::nullopt, target));
    return cartesian(paired(s.sym(), t.sym()), kids);
  }

  // theta applied to a component (patterns and bot are unaffected).
  static NtComponent apply_subst_component(const Substitution& theta, const NtComponent& c) {
    if (!c) return c;
    if (c->is_var()) return theta.apply(*c);
    return c;
  }
  static NtComponent apply_delta_component(const RenamingPairs& delta, const NtComponent& c) {
    if (!c) return c;
    return delta.apply(*c);
  }

  void generate_rules_for(const std::string& name) {
    const RangeNtInfo& info = registry.at(name);
    std::vector<RtgRhs> rhss;
    if (info.kind == RangeNtInfo::Kind::gamma) {
      auto it = alts.find(info.ssg_nt);
      if (it == alts.end()) return;
      for (const NormalAlt& alt : it->second) {
        if (!alt.is_rec) {
          NtComponent c1 = apply_subst_component(alt.theta, info.c1);
          NtComponent c2 = apply_subst_component(alt.theta, info.c2);
          if (c1) c1 = abstract_vars(*c1);
          if (c2) c2 = abstract_vars(*c2);
          for (RtgRhs& r : coding_nt(c1, c2, std::nullopt)) rhss.push_back(std::move(r));
        } else {
          const SsgNonterminal* target = g.find_nt(alt.target);
          VarSet keep = target->goal_var_set();
          NtComponent c1 = apply_delta_component(
              alt.delta, apply_subst_component(alt.theta, info.c1));
          NtComponent c2 = apply_delta_component(
              alt.delta, apply_subst_component(alt.theta, info.c2));
          if (c1) c1 = abstract_vars_outside(*c1, keep);
          if (c2) c2 = abstract_vars_outside(*c2, keep);
          for (RtgRhs& r : coding_nt(c1, c2, alt.target)) rhss.push_back(std::move(r));
        }
      }
    } else {
      Term A = Term::app(any_marker());
      auto expand = [&](const Symbol& f) {
        std::vector<Term> as(f.arity, A);
        return Term::app(f, std::move(as));
      };
      if (info.kind == RangeNtInfo::Kind::a_a) {
        for (const Symbol& f : g.constructors)
          for (const Symbol& gg : g.constructors)
            for (RtgRhs& r : coding_nt(expand(f), expand(gg), std::nullopt))
              rhss.push_back(std::move(r));
      } else if (info.kind == RangeNtInfo::Kind::a_bot) {
        for (const Symbol& f : g.constructors)
          for (RtgRhs& r : coding_nt(expand(f), std::nullopt, std::nullopt))
            rhss.push_back(std::move(r));
      } else {
        for (const Symbol& gg : g.constructors)
          for (RtgRhs& r : coding_nt(std::nullopt, expand(gg), std::nullopt))
            rhss.push_back(std::move(r));
      }
    }
    std::set<std::string> seen;
    for (RtgRhs& r : rhss) {
      if (!seen.insert(show(r)).second) continue;
      out.rules.push_back({name, std::move(r)});
    }
  }

  Rtg build(const std::string& ssg_nt, const Variable& x1, const Variable& x2) {
    out.initial = demand_gamma(ssg_nt, Term::var(x1), Term::var(x2));
    while (!pending.empty()) {
      std::string name = pending.front();
      pending.pop_front();
      generate_rules_for(name);
    }
    for (const auto& [name, info] : registry) out.add_nt(name);
    std::set<Symbol> used;
    for (const RtgRule& r : out.rules) collect_rhs_symbols(r.rhs, used);
    for (const Symbol& f : used) out.add_symbol(f);
    std::sort(out.rules.begin(), out.rules.end(), [](const RtgRule& a, const RtgRule& b) {
      if (a.lhs != b.lhs) return a.lhs < b.lhs;
      return show(a.rhs) < show(b.rhs);
    });
    return prune_reachable(out, out.initial);
  }
};

}  // namespace detail

// The coding of two component terms (variable, pattern over C u {A}, or
// bot = nullopt) in the context of grammar g, rendered. Exposed for
// inspection and tests; `target` names the rec target whose variables may
// occur in the components.
inline std::vector<std::string> coding_nt(const Ssg& g, const NtComponent& a,
                                          const NtComponent& b,
                                          const std::optional<std::string>& target,
                                          PatternMode mode = PatternMode::asymmetric) {
  std::map<std::string, std::vector<NormalAlt>> alts;
  detail::RanBuilder builder(g, alts, mode);
  std::vector<std::string> out;
  for (const RtgRhs& r : builder.coding_nt(a, b, target)) out.push_back(show(r));
  std::sort(out.begin(), out.end());
  return out;
}

// The transformed grammar for nonterminal `nt` and variables (x1, x2).
// Throws AssumptionError when the grammar shape does not admit the
// transformation, std::invalid_argument on bad arguments.
inline Rtg ran(const Ssg& g, const std::string& nt, const Variable& x1, const Variable& x2,
               PatternMode mode = PatternMode::asymmetric) {
  const SsgNonterminal* decl = g.find_nt(nt);
  if (!decl) throw std::invalid_argument("unknown nonterminal " + nt);
  VarSet gv = decl->goal_var_set();
  if (!gv.count(x1) || !gv.count(x2))
    throw std::invalid_argument("variables " + x1.str() + "," + x2.str() +
                                " must be goal variables of " + nt);
  if (x1 == x2) throw std::invalid_argument("the two variables must be distinct");
  std::map<std::string, std::vector<NormalAlt>> alts;
  AssumptionReport rep = check_assumption(g, nt, &alts);
  if (!rep.ok) throw AssumptionError(std::move(rep));
  detail::RanBuilder builder(g, alts, mode);
  return builder.build(nt, x1, x2);
}

// Merges two transformed grammars over the same paired signature (shared
// nonterminals get the union of their rules). The initial of `a` is kept.
inline Rtg merge_rtgs(const Rtg& a, const Rtg& b) {
  Rtg out = a;
  for (const Nt& n : b.nonterminals) out.add_nt(n);
  for (const Symbol& f : b.alphabet) out.add_symbol(f);
  std::set<std::string> seen;
  for (const RtgRule& r : out.rules) seen.insert(r.lhs + " -> " + show(r.rhs));
  for (const RtgRule& r : b.rules)
    if (seen.insert(r.lhs + " -> " + show(r.rhs)).second) out.rules.push_back(r);
  std::sort(out.rules.begin(), out.rules.end(), [](const RtgRule& x, const RtgRule& y) {
    if (x.lhs != y.lhs) return x.lhs < y.lhs;
    return show(x.rhs) < show(y.rhs);
  });
  return out;
}

}  // namespace ssgr
