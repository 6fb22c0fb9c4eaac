#pragma once

// First-order terms over a signature split into constructors, defined
// symbols, and the three builtins used by goal clauses (T, /\, ->).

#include <algorithm>
#include <cassert>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssgr {

struct Variable {
  std::string base;
  int index = 0;  // 0 for variables read from input, >0 for generated ones

  bool operator==(const Variable& o) const { return base == o.base && index == o.index; }
  bool operator!=(const Variable& o) const { return !(*this == o); }
  bool operator<(const Variable& o) const {
    if (base != o.base) return base < o.base;
    return index < o.index;
  }

  std::string str() const { return index == 0 ? base : base + "#" + std::to_string(index); }
};

using VarSet = std::set<Variable>;

enum class SymbolKind { constructor, defined, builtin };

struct Symbol {
  std::string name;
  int arity = 0;
  SymbolKind kind = SymbolKind::constructor;

  bool operator==(const Symbol& o) const { return name == o.name && arity == o.arity; }
  bool operator!=(const Symbol& o) const { return !(*this == o); }
  bool operator<(const Symbol& o) const {
    if (name != o.name) return name < o.name;
    return arity < o.arity;
  }
};

// Builtins of goal clauses. None of them may occur in substitution ranges.
inline const Symbol& top_symbol() {
  static const Symbol s{"T", 0, SymbolKind::builtin};
  return s;
}
inline const Symbol& conj_symbol() {
  static const Symbol s{"/\\", 2, SymbolKind::builtin};
  return s;
}
inline const Symbol& arrow_symbol() {
  static const Symbol s{"->", 2, SymbolKind::builtin};
  return s;
}

// A symbol whose name does not start with an identifier character is
// rendered infix when binary (e.g. "x < y").
inline bool is_identifier_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '\'';
}
inline bool is_symbolic_name(const std::string& name) {
  return !name.empty() && !is_identifier_char(name[0]);
}

// Paired symbols <f,g> are symbolic but always print prefix.
inline bool is_paired_symbol_name(const std::string& name) {
  return name.size() >= 2 && name.front() == '<' && name.back() == '>' &&
         name.find(',') != std::string::npos;
}

inline bool prints_infix(const Symbol& f) {
  return f.arity == 2 && is_symbolic_name(f.name) && !is_paired_symbol_name(f.name);
}

class Term;
using Position = std::vector<int>;  // 1-based child indices; empty = root

class Term {
  struct Node {
    bool is_var;
    Variable var;
    Symbol sym;
    std::vector<Term> args;
  };
  std::shared_ptr<const Node> n_;

  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}

 public:
  Term() = default;  // empty handle; only used transiently

  static Term var(Variable v) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->var = std::move(v);
    return Term(std::move(n));
  }
  static Term var(const std::string& base, int index = 0) { return var(Variable{base, index}); }

  static Term app(Symbol f, std::vector<Term> args = {}) {
    if (static_cast<int>(args.size()) != f.arity)
      throw std::invalid_argument("arity mismatch for symbol " + f.name);
    auto n = std::make_shared<Node>();
    n->is_var = false;
    n->sym = std::move(f);
    n->args = std::move(args);
    return Term(std::move(n));
  }

  bool empty() const { return n_ == nullptr; }
  bool is_var() const { return n_->is_var; }
  const Variable& var() const {
    assert(n_->is_var);
    return n_->var;
  }
  const Symbol& sym() const {
    assert(!n_->is_var);
    return n_->sym;
  }
  const std::vector<Term>& args() const {
    assert(!n_->is_var);
    return n_->args;
  }

  bool operator==(const Term& o) const {
    if (n_ == o.n_) return true;
    if (n_->is_var != o.n_->is_var) return false;
    if (n_->is_var) return n_->var == o.n_->var;
    if (n_->sym != o.n_->sym) return false;
    for (size_t i = 0; i < n_->args.size(); ++i)
      if (!(n_->args[i] == o.n_->args[i])) return false;
    return true;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }

  // Total order for use in std::set/map; structural.
  bool operator<(const Term& o) const {
    if (n_ == o.n_) return false;
    if (n_->is_var != o.n_->is_var) return n_->is_var;  // variables first
    if (n_->is_var) return n_->var < o.n_->var;
    if (n_->sym != o.n_->sym) return n_->sym < o.n_->sym;
    for (size_t i = 0; i < n_->args.size(); ++i) {
      if (n_->args[i] < o.n_->args[i]) return true;
      if (o.n_->args[i] < n_->args[i]) return false;
    }
    return false;
  }
};

inline void collect_vars(const Term& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.var());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

inline VarSet vars(const Term& t) {
  VarSet out;
  collect_vars(t, out);
  return out;
}

inline bool is_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const Term& a : t.args())
    if (!is_ground(a)) return false;
  return true;
}

inline bool contains_var(const Term& t, const Variable& v) {
  if (t.is_var()) return t.var() == v;
  for (const Term& a : t.args())
    if (contains_var(a, v)) return true;
  return false;
}

inline void collect_positions(const Term& t, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  if (t.is_var()) return;
  for (size_t i = 0; i < t.args().size(); ++i) {
    cur.push_back(static_cast<int>(i) + 1);
    collect_positions(t.args()[i], cur, out);
    cur.pop_back();
  }
}

inline std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  Position cur;
  collect_positions(t, cur, out);
  return out;
}

inline const Term& subterm_at(const Term& t, const Position& p, size_t from = 0) {
  if (from == p.size()) return t;
  int i = p[from];
  if (t.is_var() || i < 1 || i > static_cast<int>(t.args().size()))
    throw std::out_of_range("position not in term");
  return subterm_at(t.args()[i - 1], p, from + 1);
}

inline Term replace_at(const Term& t, const Position& p, const Term& u, size_t from = 0) {
  if (from == p.size()) return u;
  int i = p[from];
  if (t.is_var() || i < 1 || i > static_cast<int>(t.args().size()))
    throw std::out_of_range("position not in term");
  std::vector<Term> args = t.args();
  args[i - 1] = replace_at(args[i - 1], p, u, from + 1);
  return Term::app(t.sym(), std::move(args));
}

inline int height(const Term& t) {
  if (t.is_var() || t.args().empty()) return 0;
  int h = 0;
  for (const Term& a : t.args()) h = std::max(h, height(a));
  return h + 1;
}

inline std::string show(const Term& t) {
  if (t.is_var()) return t.var().str();
  const Symbol& f = t.sym();
  if (prints_infix(f)) {
    auto wrap = [](const Term& s) {
      std::string r = show(s);
      if (!s.is_var() && prints_infix(s.sym())) return "(" + r + ")";
      return r;
    };
    return wrap(t.args()[0]) + " " + f.name + " " + wrap(t.args()[1]);
  }
  if (f.arity == 0) return f.name;
  std::string r = f.name + "(";
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (i) r += ",";
    r += show(t.args()[i]);
  }
  return r + ")";
}

inline std::string show(const Position& p) {
  if (p.empty()) return "e";
  std::string r;
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) r += ".";
    r += std::to_string(p[i]);
  }
  return r;
}

// A signature. Constructor/defined sets are disjoint; the goal-clause
// builtins are always present implicitly.
class Signature {
  std::vector<Symbol> constructors_;
  std::vector<Symbol> defined_;

 public:
  Signature() = default;
  Signature(std::vector<Symbol> constructors, std::vector<Symbol> defined)
      : constructors_(std::move(constructors)), defined_(std::move(defined)) {
    for (auto& c : constructors_) c.kind = SymbolKind::constructor;
    for (auto& d : defined_) d.kind = SymbolKind::defined;
    for (const auto& c : constructors_)
      for (const auto& d : defined_)
        if (c.name == d.name)
          throw std::invalid_argument("symbol is both constructor and defined: " + c.name);
  }

  const std::vector<Symbol>& constructors() const { return constructors_; }
  const std::vector<Symbol>& defined() const { return defined_; }

  std::optional<Symbol> find(const std::string& name) const {
    for (const auto& c : constructors_)
      if (c.name == name) return c;
    for (const auto& d : defined_)
      if (d.name == name) return d;
    return std::nullopt;
  }
  bool is_constructor(const Symbol& f) const {
    for (const auto& c : constructors_)
      if (c == f) return true;
    return false;
  }
  bool is_defined(const Symbol& f) const {
    for (const auto& d : defined_)
      if (d == f) return true;
    return false;
  }
};

// Constructor term: variables and constructors only.
inline bool is_constructor_term(const Term& t, const Signature& sig) {
  if (t.is_var()) return true;
  if (!sig.is_constructor(t.sym())) return false;
  for (const Term& a : t.args())
    if (!is_constructor_term(a, sig)) return false;
  return true;
}

// Basic term: a defined symbol applied to constructor terms.
inline bool is_basic(const Term& t, const Signature& sig) {
  if (t.is_var() || !sig.is_defined(t.sym())) return false;
  for (const Term& a : t.args())
    if (!is_constructor_term(a, sig)) return false;
  return true;
}

}  // namespace ssgr
