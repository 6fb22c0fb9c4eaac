#pragma once

// Regular tree grammars over arbitrary signatures (including the paired
// signature produced by the range transformation): normalization,
// emptiness, membership, product intersection, bounded enumeration, and a
// line-oriented file format.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ssgr/term.hpp"

namespace ssgr {

using Nt = std::string;

struct RtgRhs {
  bool is_nt = false;
  Nt nt;                     // when is_nt
  Symbol sym;                // otherwise
  std::vector<RtgRhs> args;  // otherwise

  static RtgRhs ref(Nt n) {
    RtgRhs r;
    r.is_nt = true;
    r.nt = std::move(n);
    return r;
  }
  static RtgRhs app(Symbol f, std::vector<RtgRhs> as = {}) {
    if (static_cast<int>(as.size()) != f.arity)
      throw std::invalid_argument("rtg rhs arity mismatch for " + f.name);
    RtgRhs r;
    r.sym = std::move(f);
    r.args = std::move(as);
    return r;
  }
  static RtgRhs term(const Term& t) {
    if (t.is_var()) throw std::invalid_argument("rtg rhs must be ground");
    std::vector<RtgRhs> as;
    for (const Term& a : t.args()) as.push_back(term(a));
    return app(t.sym(), std::move(as));
  }
};

inline std::string show(const RtgRhs& r) {
  if (r.is_nt) return r.nt;
  if (r.args.empty()) return r.sym.name;
  std::string s = r.sym.name + "(";
  for (size_t i = 0; i < r.args.size(); ++i) {
    if (i) s += ",";
    s += show(r.args[i]);
  }
  return s + ")";
}

struct RtgRule {
  Nt lhs;
  RtgRhs rhs;
};

struct Rtg {
  Nt initial;
  std::vector<Nt> nonterminals;
  std::vector<Symbol> alphabet;
  std::vector<RtgRule> rules;

  bool has_nt(const Nt& n) const {
    return std::find(nonterminals.begin(), nonterminals.end(), n) != nonterminals.end();
  }
  void add_nt(const Nt& n) {
    if (!has_nt(n)) nonterminals.push_back(n);
  }
  void add_symbol(const Symbol& f) {
    for (const Symbol& g : alphabet)
      if (g == f) return;
    alphabet.push_back(f);
  }
};

namespace detail {

inline void collect_rhs_nts(const RtgRhs& r, std::set<Nt>& out) {
  if (r.is_nt) {
    out.insert(r.nt);
    return;
  }
  for (const RtgRhs& a : r.args) collect_rhs_nts(a, out);
}

inline void collect_rhs_symbols(const RtgRhs& r, std::set<Symbol>& out) {
  if (r.is_nt) return;
  out.insert(r.sym);
  for (const RtgRhs& a : r.args) collect_rhs_symbols(a, out);
}

}  // namespace detail

inline std::set<Nt> reachable_nts(const Rtg& g, const Nt& from) {
  std::set<Nt> seen{from};
  std::deque<Nt> work{from};
  while (!work.empty()) {
    Nt cur = work.front();
    work.pop_front();
    for (const RtgRule& r : g.rules) {
      if (r.lhs != cur) continue;
      std::set<Nt> mentioned;
      detail::collect_rhs_nts(r.rhs, mentioned);
      for (const Nt& n : mentioned)
        if (seen.insert(n).second) work.push_back(n);
    }
  }
  return seen;
}

// Keeps only rules and nonterminals reachable from `from` (which is kept
// even if it has no rules). Alphabet shrinks to the symbols still used.
inline Rtg prune_reachable(const Rtg& g, const Nt& from) {
  std::set<Nt> keep = reachable_nts(g, from);
  Rtg out;
  out.initial = from;
  for (const Nt& n : g.nonterminals)
    if (keep.count(n)) out.nonterminals.push_back(n);
  if (!out.has_nt(from)) out.nonterminals.push_back(from);
  std::set<Symbol> used;
  for (const RtgRule& r : g.rules) {
    if (!keep.count(r.lhs)) continue;
    out.rules.push_back(r);
    detail::collect_rhs_symbols(r.rhs, used);
  }
  for (const Symbol& f : used) out.alphabet.push_back(f);
  return out;
}

// Least fixpoint of productive nonterminals: N is productive iff some rule
// for N only uses productive nonterminals.
inline std::set<Nt> productive_nts(const Rtg& g) {
  std::set<Nt> prod;
  bool changed = true;
  auto rhs_ok = [&](const RtgRhs& r) {
    std::set<Nt> mentioned;
    detail::collect_rhs_nts(r, mentioned);
    for (const Nt& n : mentioned)
      if (!prod.count(n)) return false;
    return true;
  };
  while (changed) {
    changed = false;
    for (const RtgRule& r : g.rules) {
      if (prod.count(r.lhs)) continue;
      if (rhs_ok(r.rhs)) {
        prod.insert(r.lhs);
        changed = true;
      }
    }
  }
  return prod;
}

inline bool is_empty(const Rtg& g, const Nt& n) { return productive_nts(g).count(n) == 0; }

// --- Normal form --------------------------------------------------------------

// Normal rules have either a single nonterminal on the right or a symbol
// applied to nonterminals only. Auxiliary nonterminals are named
// lhs%counter, deterministically.
inline Rtg normalize(const Rtg& g) {
  Rtg out;
  out.initial = g.initial;
  out.nonterminals = g.nonterminals;
  out.alphabet = g.alphabet;
  int counter = 0;

  std::function<Nt(const RtgRhs&, const Nt&)> as_nt;
  std::function<void(const Nt&, const RtgRhs&)> emit = [&](const Nt& lhs, const RtgRhs& rhs) {
    if (rhs.is_nt) {
      out.rules.push_back({lhs, rhs});
      return;
    }
    std::vector<RtgRhs> kids;
    for (const RtgRhs& a : rhs.args) kids.push_back(RtgRhs::ref(as_nt(a, lhs)));
    out.rules.push_back({lhs, RtgRhs::app(rhs.sym, std::move(kids))});
  };
  as_nt = [&](const RtgRhs& r, const Nt& base) -> Nt {
    if (r.is_nt) return r.nt;
    Nt aux = base + "%" + std::to_string(++counter);
    out.nonterminals.push_back(aux);
    emit(aux, r);
    return aux;
  };
  for (const RtgRule& r : g.rules) emit(r.lhs, r.rhs);
  return out;
}

namespace detail {

// Unit-closed view of a normalized grammar: for each nonterminal, the
// symbol rules of everything reachable through unit rules.
struct NormalView {
  struct SymRule {
    Symbol sym;
    std::vector<Nt> kids;
  };
  std::map<Nt, std::vector<SymRule>> eff;

  explicit NormalView(const Rtg& normalized) {
    std::map<Nt, std::set<Nt>> unit_next;
    std::map<Nt, std::vector<SymRule>> direct;
    for (const RtgRule& r : normalized.rules) {
      if (r.rhs.is_nt) {
        unit_next[r.lhs].insert(r.rhs.nt);
      } else {
        SymRule sr;
        sr.sym = r.rhs.sym;
        for (const RtgRhs& a : r.rhs.args) sr.kids.push_back(a.nt);
        direct[r.lhs].push_back(std::move(sr));
      }
    }
    for (const Nt& n : normalized.nonterminals) {
      std::set<Nt> reach{n};
      std::deque<Nt> work{n};
      while (!work.empty()) {
        Nt cur = work.front();
        work.pop_front();
        for (const Nt& m : unit_next[cur])
          if (reach.insert(m).second) work.push_back(m);
      }
      std::vector<SymRule>& rules = eff[n];
      for (const Nt& m : reach)
        for (const SymRule& sr : direct[m]) rules.push_back(sr);
    }
  }
};

}  // namespace detail

// Bottom-up membership test.
inline bool member(const Rtg& g, const Nt& n, const Term& t) {
  Rtg norm = normalize(g);
  detail::NormalView view(norm);
  std::function<std::set<Nt>(const Term&)> states = [&](const Term& u) -> std::set<Nt> {
    if (u.is_var()) return {};
    std::vector<std::set<Nt>> kid_states;
    for (const Term& a : u.args()) kid_states.push_back(states(a));
    std::set<Nt> out;
    for (const auto& [lhs, rules] : view.eff) {
      for (const auto& sr : rules) {
        if (!(sr.sym == u.sym())) continue;
        bool ok = true;
        for (size_t i = 0; i < sr.kids.size(); ++i)
          if (!kid_states[i].count(sr.kids[i])) {
            ok = false;
            break;
          }
        if (ok) {
          out.insert(lhs);
          break;
        }
      }
    }
    return out;
  };
  return states(t).count(n) > 0;
}

// All terms of height <= depth generated from n.
inline std::vector<Term> enumerate_terms(const Rtg& g, const Nt& n, int depth) {
  Rtg norm = normalize(g);
  detail::NormalView view(norm);
  std::map<Nt, std::set<Term>> cur;
  for (int d = 0; d <= depth; ++d) {
    std::map<Nt, std::set<Term>> next = cur;
    for (const auto& [lhs, rules] : view.eff) {
      for (const auto& sr : rules) {
        if (sr.kids.empty()) {
          next[lhs].insert(Term::app(sr.sym));
          continue;
        }
        if (d == 0) continue;
        std::vector<std::vector<Term>> choices;
        bool any_empty = false;
        for (const Nt& k : sr.kids) {
          auto it = cur.find(k);
          if (it == cur.end() || it->second.empty()) {
            any_empty = true;
            break;
          }
          choices.emplace_back(it->second.begin(), it->second.end());
        }
        if (any_empty) continue;
        std::vector<size_t> idx(choices.size(), 0);
        while (true) {
          std::vector<Term> args;
          for (size_t k = 0; k < choices.size(); ++k) args.push_back(choices[k][idx[k]]);
          next[lhs].insert(Term::app(sr.sym, std::move(args)));
          int k = static_cast<int>(choices.size()) - 1;
          while (k >= 0 && ++idx[k] == choices[k].size()) idx[k--] = 0;
          if (k < 0) break;
        }
      }
    }
    cur = std::move(next);
  }
  std::vector<Term> out;
  for (const Term& t : cur[n])
    if (height(t) <= depth) out.push_back(t);
  return out;
}

// Product grammar recognizing the intersection of the two languages,
// restricted to pairs reachable from (n1,n2) and pruned to productive
// nonterminals. The start pair is kept either way.
inline Rtg intersect(const Rtg& g1, const Nt& n1, const Rtg& g2, const Nt& n2) {
  detail::NormalView v1(normalize(g1));
  detail::NormalView v2(normalize(g2));
  auto pair_name = [](const Nt& a, const Nt& b) { return a + "*" + b; };

  Rtg prod;
  prod.initial = pair_name(n1, n2);
  std::set<std::pair<Nt, Nt>> seen{{n1, n2}};
  std::deque<std::pair<Nt, Nt>> work{{n1, n2}};
  prod.nonterminals.push_back(prod.initial);
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop_front();
    auto ita = v1.eff.find(a);
    auto itb = v2.eff.find(b);
    if (ita == v1.eff.end() || itb == v2.eff.end()) continue;
    for (const auto& ra : ita->second) {
      for (const auto& rb : itb->second) {
        if (!(ra.sym == rb.sym)) continue;
        std::vector<RtgRhs> kids;
        for (size_t i = 0; i < ra.kids.size(); ++i) {
          std::pair<Nt, Nt> kid{ra.kids[i], rb.kids[i]};
          if (seen.insert(kid).second) {
            work.push_back(kid);
            prod.nonterminals.push_back(pair_name(kid.first, kid.second));
          }
          kids.push_back(RtgRhs::ref(pair_name(kid.first, kid.second)));
        }
        prod.rules.push_back({pair_name(a, b), RtgRhs::app(ra.sym, std::move(kids))});
        prod.add_symbol(ra.sym);
      }
    }
  }
  // prune to productive pairs; the initial nonterminal stays
  std::set<Nt> prodset = productive_nts(prod);
  Rtg out;
  out.initial = prod.initial;
  for (const Nt& n : prod.nonterminals)
    if (prodset.count(n) || n == prod.initial) out.nonterminals.push_back(n);
  std::set<Symbol> used;
  for (const RtgRule& r : prod.rules) {
    if (!prodset.count(r.lhs)) continue;
    std::set<Nt> mentioned;
    detail::collect_rhs_nts(r.rhs, mentioned);
    bool ok = true;
    for (const Nt& n : mentioned)
      if (!prodset.count(n)) ok = false;
    if (!ok) continue;
    out.rules.push_back(r);
    detail::collect_rhs_symbols(r.rhs, used);
  }
  for (const Symbol& f : used) out.alphabet.push_back(f);
  return out;
}

// --- File format ---------------------------------------------------------------
//
// (ALPHABET <0,s>/1 <_|_,0>/0 ...)
// (NONTERMINALS G_lt^(x,y) bot_A)
// (INITIAL G_lt^(x,y))
// (RULE G_lt^(x,y) -> <0,s>(bot_A) | <s,s>(G_lt^(x,y)))

inline std::string show(const Rtg& g) {
  std::ostringstream os;
  std::vector<Symbol> alpha = g.alphabet;
  std::sort(alpha.begin(), alpha.end());
  os << "(ALPHABET";
  for (const Symbol& f : alpha) os << " " << f.name << "/" << f.arity;
  os << ")\n";
  std::vector<Nt> nts = g.nonterminals;
  std::sort(nts.begin(), nts.end());
  os << "(NONTERMINALS";
  for (const Nt& n : nts) os << " " << n;
  os << ")\n";
  os << "(INITIAL " << g.initial << ")\n";
  std::vector<std::pair<std::string, std::string>> lines;
  for (const RtgRule& r : g.rules) lines.emplace_back(r.lhs, show(r.rhs));
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  for (const auto& [lhs, rhs] : lines) os << "(RULE " << lhs << " -> " << rhs << ")\n";
  return os.str();
}

namespace detail {

// Dedicated tokenizer: paired symbols <f,g> and nonterminal names with
// ^(...) component groups are single tokens.
struct RtgTok {
  enum Kind { lp, rp, comma, arrow, pipe, slash, name, end } kind;
  std::string text;
};

inline std::vector<RtgTok> rtg_tokens(const std::string& src) {
  std::vector<RtgTok> out;
  size_t i = 0;
  auto name_char = [](char c) { return is_identifier_char(c) || c == '*' || c == '%'; };
  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (c == ';') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '(') {
      out.push_back({RtgTok::lp, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({RtgTok::rp, ")"});
      ++i;
    } else if (c == ',') {
      out.push_back({RtgTok::comma, ","});
      ++i;
    } else if (c == '/') {
      out.push_back({RtgTok::slash, "/"});
      ++i;
    } else if (c == '|') {
      out.push_back({RtgTok::pipe, "|"});
      ++i;
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      out.push_back({RtgTok::arrow, "->"});
      i += 2;
    } else if (c == '<') {
      size_t j = src.find('>', i);
      if (j == std::string::npos) throw std::runtime_error("unterminated paired symbol");
      out.push_back({RtgTok::name, src.substr(i, j - i + 1)});
      i = j + 1;
    } else if (name_char(c)) {
      size_t j = i;
      while (j < src.size() && name_char(src[j])) ++j;
      // component groups: G_lt^(x,y) or products thereof
      while (j < src.size() && src[j] == '^' && j + 1 < src.size() && src[j + 1] == '(') {
        int depth = 0;
        j += 1;
        do {
          if (src[j] == '(') ++depth;
          if (src[j] == ')') --depth;
          ++j;
          if (j > src.size()) throw std::runtime_error("unterminated nonterminal name");
        } while (depth > 0);
        while (j < src.size() && name_char(src[j])) ++j;
      }
      out.push_back({RtgTok::name, src.substr(i, j - i)});
      i = j;
    } else {
      throw std::runtime_error(std::string("unexpected character in grammar file: ") + c);
    }
  }
  out.push_back({RtgTok::end, ""});
  return out;
}

}  // namespace detail

inline Rtg parse_rtg(const std::string& src) {
  auto toks = detail::rtg_tokens(src);
  size_t pos = 0;
  auto peek = [&]() -> const detail::RtgTok& { return toks[pos]; };
  auto next = [&]() -> const detail::RtgTok& { return toks[pos++]; };
  auto expect = [&](detail::RtgTok::Kind k, const std::string& what) -> const detail::RtgTok& {
    if (peek().kind != k) throw std::runtime_error("expected " + what + " near '" + peek().text + "'");
    return next();
  };

  Rtg g;
  std::map<std::string, Symbol> alpha;
  std::set<Nt> nts;

  std::function<RtgRhs()> rhs = [&]() -> RtgRhs {
    std::string n = expect(detail::RtgTok::name, "name").text;
    if (peek().kind == detail::RtgTok::lp) {
      next();
      std::vector<RtgRhs> args;
      if (peek().kind != detail::RtgTok::rp) {
        args.push_back(rhs());
        while (peek().kind == detail::RtgTok::comma) {
          next();
          args.push_back(rhs());
        }
      }
      expect(detail::RtgTok::rp, "')'");
      auto it = alpha.find(n);
      if (it == alpha.end()) throw std::runtime_error("unknown alphabet symbol " + n);
      return RtgRhs::app(it->second, std::move(args));
    }
    if (nts.count(n)) return RtgRhs::ref(n);
    auto it = alpha.find(n);
    if (it == alpha.end())
      throw std::runtime_error("name '" + n + "' is neither a nonterminal nor a symbol");
    return RtgRhs::app(it->second, {});
  };

  while (peek().kind != detail::RtgTok::end) {
    expect(detail::RtgTok::lp, "'('");
    std::string kw = expect(detail::RtgTok::name, "section keyword").text;
    if (kw == "ALPHABET") {
      while (peek().kind == detail::RtgTok::name) {
        std::string n = next().text;
        expect(detail::RtgTok::slash, "'/'");
        std::string a = expect(detail::RtgTok::name, "arity").text;
        Symbol f{n, std::stoi(a), SymbolKind::constructor};
        alpha.emplace(n, f);
        g.add_symbol(f);
      }
      expect(detail::RtgTok::rp, "')'");
    } else if (kw == "NONTERMINALS") {
      while (peek().kind == detail::RtgTok::name) {
        Nt n = next().text;
        nts.insert(n);
        g.add_nt(n);
      }
      expect(detail::RtgTok::rp, "')'");
    } else if (kw == "INITIAL") {
      g.initial = expect(detail::RtgTok::name, "nonterminal").text;
      expect(detail::RtgTok::rp, "')'");
    } else if (kw == "RULE") {
      Nt lhs = expect(detail::RtgTok::name, "nonterminal").text;
      if (!nts.count(lhs)) throw std::runtime_error("rule for undeclared nonterminal " + lhs);
      expect(detail::RtgTok::arrow, "'->'");
      g.rules.push_back({lhs, rhs()});
      while (peek().kind == detail::RtgTok::pipe) {
        next();
        g.rules.push_back({lhs, rhs()});
      }
      expect(detail::RtgTok::rp, "')'");
    } else {
      throw std::runtime_error("unknown grammar section " + kw);
    }
  }
  return g;
}

}  // namespace ssgr
