#pragma once

// End-to-end checks: transform two nonterminals over a shared variable
// pair, intersect the range languages, and decide emptiness. An empty
// intersection proves that no substitution satisfies both conditions; a
// nonempty one proves nothing, because the range languages
// overapproximate.

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "ssgr/narrowing.hpp"
#include "ssgr/rtg.hpp"
#include "ssgr/ssg.hpp"
#include "ssgr/transform.hpp"

namespace ssgr {

enum class VerdictStatus { infeasible_proved, unknown, assumption_violated };

struct Verdict {
  VerdictStatus status = VerdictStatus::unknown;
  std::vector<std::string> evidence;
  double elapsed_ms = 0.0;
};

inline const char* show(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::infeasible_proved:
      return "infeasible-proved";
    case VerdictStatus::unknown:
      return "unknown";
    case VerdictStatus::assumption_violated:
      return "assumption-violated";
  }
  return "?";
}

// A nonterminal whose every derivable expression contains `empty` denotes
// the empty substitution set. Least fixpoint of "has an empty-free
// alternative whose nonterminals are all viable".
inline bool ssg_certainly_empty(const Ssg& g, const std::string& nt) {
  std::set<std::string> viable;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules) {
      if (viable.count(r.lhs) || contains_empty(r.alt)) continue;
      std::set<std::string> mentioned;
      detail::collect_expr_nonterms(r.alt, mentioned);
      bool ok = true;
      for (const std::string& n : mentioned)
        if (!viable.count(n)) ok = false;
      if (ok) {
        viable.insert(r.lhs);
        changed = true;
      }
    }
  }
  return viable.count(nt) == 0;
}

struct CheckResult {
  Verdict verdict;
  std::optional<Rtg> left, right, product;
};

// Decides the intersection of the two range languages over (x1, x2).
// When either side's substitution-set grammar provably generates nothing,
// the verdict is reached without transforming.
inline CheckResult run_check(const Ssg& g, const std::string& nt_a, const std::string& nt_b,
                             const Variable& x1, const Variable& x2,
                             PatternMode mode = PatternMode::asymmetric) {
  auto t0 = std::chrono::steady_clock::now();
  CheckResult res;
  auto finish = [&](VerdictStatus st) -> CheckResult& {
    res.verdict.status = st;
    res.verdict.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
  };

  for (const std::string& nt : {nt_a, nt_b}) {
    if (!g.find_nt(nt)) throw std::invalid_argument("unknown nonterminal " + nt);
    if (ssg_certainly_empty(g, nt)) {
      res.verdict.evidence.push_back("substitution-set grammar generates no expressions from " +
                                     nt + " (every derivation reaches empty)");
      return finish(VerdictStatus::infeasible_proved);
    }
  }

  try {
    res.left = ran(g, nt_a, x1, x2, mode);
    res.right = ran(g, nt_b, x1, x2, mode);
  } catch (const AssumptionError& e) {
    for (const auto& v : e.report.violations)
      res.verdict.evidence.push_back("violation in " + v.rule + ": " + v.detail);
    return finish(VerdictStatus::assumption_violated);
  }

  res.product = intersect(*res.left, res.left->initial, *res.right, res.right->initial);
  bool empty = is_empty(*res.product, res.product->initial);
  res.verdict.evidence.push_back(
      "product grammar: " + std::to_string(res.product->nonterminals.size()) +
      " nonterminals, " + std::to_string(res.product->rules.size()) + " rules");
  if (empty) {
    res.verdict.evidence.push_back("unproductive nonterminal: " + res.product->initial);
    return finish(VerdictStatus::infeasible_proved);
  }
  res.verdict.evidence.push_back("intersection is nonempty; overapproximation proves nothing");
  return finish(VerdictStatus::unknown);
}

// Alphabet of symbols reachable from the initial nonterminal.
inline std::vector<Symbol> reachable_alphabet(const Rtg& g) {
  Rtg pruned = prune_reachable(g, g.initial);
  std::vector<Symbol> out = pruned.alphabet;
  std::sort(out.begin(), out.end());
  return out;
}

struct OracleReport {
  int substitutions = 0;
  int instances = 0;
  std::vector<std::string> counterexamples;
};

// Desk-scale overapproximation check: every coded ground instance of every
// generated substitution must be a member of the transformed language.
inline OracleReport oracle_membership(const Ssg& g, const std::string& nt, const Variable& x1,
                                      const Variable& x2, int expr_bound, int ground_depth,
                                      PatternMode mode = PatternMode::asymmetric) {
  OracleReport rep;
  Rtg rtg = ran(g, nt, x1, x2, mode);
  FreshState fs;
  for (const Substitution& theta : subst_set(g, nt, expr_bound, fs)) {
    ++rep.substitutions;
    Term t1 = theta.apply(Term::var(x1));
    Term t2 = theta.apply(Term::var(x2));
    VarSet open = set_union(vars(t1), vars(t2));
    std::vector<Variable> open_list(open.begin(), open.end());
    std::vector<Term> ground = enumerate_ground_terms(g.constructors, ground_depth);
    if (open_list.empty()) {
      ++rep.instances;
      Term u = code(t1, t2);
      if (!member(rtg, rtg.initial, u))
        rep.counterexamples.push_back(show(theta) + " : " + show(u));
      continue;
    }
    std::vector<size_t> idx(open_list.size(), 0);
    while (true) {
      Substitution xi;
      for (size_t i = 0; i < open_list.size(); ++i) xi.bind(open_list[i], ground[idx[i]]);
      ++rep.instances;
      Term u = code(xi.apply(t1), xi.apply(t2));
      if (!member(rtg, rtg.initial, u))
        rep.counterexamples.push_back(show(theta) + " with " + show(xi) + " : " + show(u));
      int i = static_cast<int>(open_list.size()) - 1;
      while (i >= 0 && ++idx[i] == ground.size()) idx[i--] = 0;
      if (i < 0) break;
    }
  }
  return rep;
}

}  // namespace ssgr
