#pragma once

// Coding of pairs of ground constructor terms into single terms over the
// squared signature (C u {bot})^2 \ {(bot,bot)}: the two trees are overlaid
// symbol by symbol and the shorter side is padded with bot.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssgr/term.hpp"

namespace ssgr {

inline const std::string& bot_name() {
  static const std::string n = "_|_";
  return n;
}

struct PairedSymbol {
  std::optional<Symbol> left, right;  // nullopt = bot; never both

  int arity() const {
    int l = left ? left->arity : 0;
    int r = right ? right->arity : 0;
    return l > r ? l : r;
  }

  std::string name() const {
    return "<" + (left ? left->name : bot_name()) + "," + (right ? right->name : bot_name()) +
           ">";
  }

  Symbol as_symbol() const { return Symbol{name(), arity(), SymbolKind::constructor}; }

  bool operator<(const PairedSymbol& o) const { return name() < o.name(); }
  bool operator==(const PairedSymbol& o) const { return name() == o.name(); }
};

// All pairs over C u {bot} except (bot,bot), with the max-arity rule.
inline std::vector<PairedSymbol> paired_signature(const std::vector<Symbol>& ctors) {
  std::vector<PairedSymbol> out;
  for (const Symbol& f : ctors)
    for (const Symbol& g : ctors) out.push_back(PairedSymbol{f, g});
  for (const Symbol& f : ctors) {
    out.push_back(PairedSymbol{f, std::nullopt});
    out.push_back(PairedSymbol{std::nullopt, f});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Name-indexed view of a paired signature, used to decode.
class PairedSignature {
  std::map<std::string, PairedSymbol> by_name_;

 public:
  explicit PairedSignature(const std::vector<Symbol>& ctors) {
    for (const PairedSymbol& p : paired_signature(ctors)) by_name_.emplace(p.name(), p);
  }
  const PairedSymbol* find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &it->second;
  }
};

struct CodingError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require_ground_constructor(const Term& t) {
  if (t.is_var()) throw CodingError("coding requires ground terms, got variable " + t.var().str());
  if (t.sym().kind != SymbolKind::constructor)
    throw CodingError("coding requires constructor terms, got symbol " + t.sym().name);
  for (const Term& a : t.args()) require_ground_constructor(a);
}

}  // namespace detail

// The coding <t1,t2>; one side may be absent (bot) but not both.
inline Term code(const std::optional<Term>& t1, const std::optional<Term>& t2) {
  if (!t1 && !t2) throw CodingError("cannot code (bot, bot)");
  if (t1) detail::require_ground_constructor(*t1);
  if (t2) detail::require_ground_constructor(*t2);
  PairedSymbol head{t1 ? std::optional<Symbol>(t1->sym()) : std::nullopt,
                    t2 ? std::optional<Symbol>(t2->sym()) : std::nullopt};
  int m = t1 ? t1->sym().arity : 0;
  int n = t2 ? t2->sym().arity : 0;
  std::vector<Term> kids;
  for (int i = 0; i < std::max(m, n); ++i) {
    std::optional<Term> l = i < m ? std::optional<Term>(t1->args()[i]) : std::nullopt;
    std::optional<Term> r = i < n ? std::optional<Term>(t2->args()[i]) : std::nullopt;
    kids.push_back(code(l, r));
  }
  return Term::app(head.as_symbol(), std::move(kids));
}

// Inverse of code. Rejects terms that are not a valid coding (unknown
// paired symbol, wrong child count, or a present side below a bot side).
inline std::pair<std::optional<Term>, std::optional<Term>> decode(const Term& u,
                                                                  const PairedSignature& psig) {
  if (u.is_var()) throw CodingError("coded terms are ground");
  const PairedSymbol* p = psig.find(u.sym().name);
  if (!p) throw CodingError("not a paired symbol: " + u.sym().name);
  if (static_cast<int>(u.args().size()) != p->arity())
    throw CodingError("arity mismatch in coded term at " + u.sym().name);
  std::vector<std::optional<Term>> lefts, rights;
  for (const Term& k : u.args()) {
    auto [l, r] = decode(k, psig);
    lefts.push_back(std::move(l));
    rights.push_back(std::move(r));
  }
  auto build = [&](const std::optional<Symbol>& side,
                   std::vector<std::optional<Term>>& kids) -> std::optional<Term> {
    if (!side) {
      for (const auto& k : kids)
        if (k) throw CodingError("non-bot child under a bot side at " + u.sym().name);
      return std::nullopt;
    }
    std::vector<Term> args;
    for (int i = 0; i < side->arity; ++i) {
      if (!kids[i]) throw CodingError("missing child " + std::to_string(i + 1) + " under " +
                                      side->name);
      args.push_back(std::move(*kids[i]));
    }
    for (size_t i = side->arity; i < kids.size(); ++i)
      if (kids[i]) throw CodingError("padding child must be bot under " + side->name);
    return Term::app(*side, std::move(args));
  };
  auto l = build(p->left, lefts);
  auto r = build(p->right, rights);
  return {std::move(l), std::move(r)};
}

}  // namespace ssgr
