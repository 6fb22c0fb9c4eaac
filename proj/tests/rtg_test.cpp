#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace ssgr;

namespace {

// X generates even towers of s over 0, X' the odd ones.
Rtg even_odd() {
  return parse_rtg(
      "(ALPHABET 0/0 s/1)\n"
      "(NONTERMINALS X X')\n"
      "(INITIAL X)\n"
      "(RULE X -> 0 | s(X'))\n"
      "(RULE X' -> s(X))\n");
}

Term nat(int n) {
  Symbol z{"0", 0, SymbolKind::constructor};
  Symbol s{"s", 1, SymbolKind::constructor};
  Term t = Term::app(z);
  for (int i = 0; i < n; ++i) t = Term::app(s, {t});
  return t;
}

}  // namespace

TEST_CASE("file format roundtrip", "[rtg]") {
  Rtg g = even_odd();
  CHECK(g.nonterminals.size() == 2);
  CHECK(g.rules.size() == 3);
  Rtg g2 = parse_rtg(show(g));
  CHECK(show(g2) == show(g));
}

TEST_CASE("membership in the even/odd grammar", "[rtg]") {
  Rtg g = even_odd();
  CHECK(member(g, "X", nat(0)));
  CHECK(member(g, "X", nat(2)));
  CHECK(!member(g, "X", nat(1)));
  CHECK(member(g, "X'", nat(1)));
  CHECK(member(g, "X'", nat(3)));
  CHECK(!member(g, "X'", nat(2)));
}

TEST_CASE("emptiness", "[rtg]") {
  Rtg g = even_odd();
  CHECK(!is_empty(g, "X"));
  CHECK(!is_empty(g, "X'"));
  CHECK(is_empty(g, "Y"));  // no rules at all

  Rtg loop = parse_rtg(
      "(ALPHABET f/1)\n(NONTERMINALS N)\n(INITIAL N)\n(RULE N -> f(N))\n");
  CHECK(is_empty(loop, "N"));
}

TEST_CASE("bounded enumeration", "[rtg]") {
  Rtg g = even_odd();
  auto ts = enumerate_terms(g, "X", 2);
  REQUIRE(ts.size() == 2);
  CHECK((ts[0] == nat(0) || ts[1] == nat(0)));
  CHECK((ts[0] == nat(2) || ts[1] == nat(2)));
  auto ts0 = enumerate_terms(g, "X", 0);
  REQUIRE(ts0.size() == 1);
  CHECK(ts0[0] == nat(0));
}

TEST_CASE("normalization splits deep right-hand sides", "[rtg]") {
  Rtg g = parse_rtg("(ALPHABET 0/0 s/1)\n(NONTERMINALS X)\n(INITIAL X)\n(RULE X -> s(s(X)) | 0)\n");
  Rtg n = normalize(g);
  for (const auto& r : n.rules) {
    if (r.rhs.is_nt) continue;
    for (const auto& a : r.rhs.args) CHECK(a.is_nt);
  }
  // language preserved on a depth slice
  auto before = enumerate_terms(g, "X", 4);
  auto after = enumerate_terms(n, "X", 4);
  CHECK(before == after);
  // already-normal grammars are untouched up to aux naming
  Rtg eo = even_odd();
  CHECK(normalize(eo).rules.size() == eo.rules.size());
}

TEST_CASE("intersection of even and odd is empty", "[rtg]") {
  Rtg g = even_odd();
  Rtg p = intersect(g, "X", g, "X'");
  CHECK(is_empty(p, p.initial));
  Rtg q = intersect(g, "X", g, "X");
  CHECK(!is_empty(q, q.initial));
  CHECK(member(q, q.initial, nat(2)));
  CHECK(!member(q, q.initial, nat(1)));
}

TEST_CASE("unit rules are followed", "[rtg]") {
  Rtg g = parse_rtg(
      "(ALPHABET 0/0 s/1)\n"
      "(NONTERMINALS A B)\n"
      "(INITIAL A)\n"
      "(RULE A -> B)\n"
      "(RULE B -> 0 | s(A))\n");
  CHECK(member(g, "A", nat(0)));
  CHECK(member(g, "A", nat(2)));
  CHECK(!is_empty(g, "A"));
  Rtg p = intersect(g, "A", g, "B");
  CHECK(member(p, p.initial, nat(1)));
}

TEST_CASE("random grammars: emptiness, membership, intersection vs enumeration",
          "[rtg][property]") {
  auto rng = testutil::make_rng();
  for (int i = 0; i < 25; ++i) {
    Rtg g1 = testutil::random_rtg(rng);
    Rtg g2 = testutil::random_rtg(rng);
    for (const Nt& n : g1.nonterminals) {
      auto ts = enumerate_terms(g1, n, 4);
      // emptiness agrees with the bounded enumeration on small grammars
      // (the pumping depth of these grammars stays below the bound)
      CHECK(is_empty(g1, n) == ts.empty());
      for (const Term& t : ts) CHECK(member(g1, n, t));
      // membership agrees with enumeration on random ground terms
      for (int k = 0; k < 5; ++k) {
        Term t = testutil::random_ground_term(rng, testutil::small_ctors(), 3);
        bool in_list = std::find(ts.begin(), ts.end(), t) != ts.end();
        if (height(t) <= 4) CHECK(member(g1, n, t) == in_list);
      }
    }
    // product language = intersection of languages, on a depth slice
    const Nt& n1 = g1.nonterminals[0];
    const Nt& n2 = g2.nonterminals[0];
    Rtg p = intersect(g1, n1, g2, n2);
    auto l1 = enumerate_terms(g1, n1, 3);
    auto l2 = enumerate_terms(g2, n2, 3);
    auto lp = enumerate_terms(p, p.initial, 3);
    std::set<Term> s1(l1.begin(), l1.end());
    std::set<Term> s2(l2.begin(), l2.end());
    std::set<Term> want;
    for (const Term& t : s1)
      if (s2.count(t)) want.insert(t);
    CHECK(std::set<Term>(lp.begin(), lp.end()) == want);
    for (const Term& t : want) CHECK(member(p, p.initial, t));
  }
}

TEST_CASE("normalization preserves membership on random grammars", "[rtg][property]") {
  auto rng = testutil::make_rng();
  for (int i = 0; i < 15; ++i) {
    Rtg g = testutil::random_rtg(rng);
    Rtg n = normalize(g);
    for (const Nt& nt : g.nonterminals)
      for (const Term& t : enumerate_terms(g, nt, 3)) CHECK(member(n, nt, t));
  }
}

TEST_CASE("normalization preserves the language of deep right-hand sides",
          "[rtg][property]") {
  // unary alphabet keeps enumeration linear while the nested right-hand
  // sides force real splitting
  auto rng = testutil::make_rng();
  Symbol z{"n", 0, SymbolKind::constructor};
  Symbol f{"f", 1, SymbolKind::constructor};
  for (int i = 0; i < 50; ++i) {
    Rtg g;
    int nts = testutil::uniform(rng, 1, 3);
    for (int k = 0; k < nts; ++k) g.nonterminals.push_back("M" + std::to_string(k));
    g.initial = g.nonterminals[0];
    g.add_symbol(z);
    g.add_symbol(f);
    std::function<RtgRhs(int)> deep = [&](int depth) -> RtgRhs {
      if (depth == 0) {
        if (testutil::uniform(rng, 0, 1) == 0)
          return RtgRhs::ref(testutil::pick(rng, g.nonterminals));
        return RtgRhs::app(z);
      }
      return RtgRhs::app(f, {deep(depth - 1)});
    };
    int rules = testutil::uniform(rng, nts, 6);
    for (int k = 0; k < rules; ++k)
      g.rules.push_back({testutil::pick(rng, g.nonterminals), deep(testutil::uniform(rng, 0, 3))});
    Rtg n = normalize(g);
    for (const Nt& nt : g.nonterminals) {
      auto a = enumerate_terms(g, nt, 5);
      auto b = enumerate_terms(n, nt, 5);
      CHECK(a == b);
    }
  }
}

TEST_CASE("pruning keeps the reachable part", "[rtg]") {
  Rtg g = parse_rtg(
      "(ALPHABET 0/0)\n"
      "(NONTERMINALS A B C)\n"
      "(INITIAL A)\n"
      "(RULE A -> B)\n"
      "(RULE B -> 0)\n"
      "(RULE C -> 0)\n");
  Rtg p = prune_reachable(g, "A");
  CHECK(p.nonterminals.size() == 2);
  CHECK(p.rules.size() == 2);
  CHECK(member(p, "A", Term::app(Symbol{"0", 0, SymbolKind::constructor})));
}
