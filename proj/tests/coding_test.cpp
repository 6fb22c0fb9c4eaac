#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace ssgr;

namespace {
std::vector<Symbol> fig_ctors() {
  return {{"f", 2, SymbolKind::constructor},
          {"g", 1, SymbolKind::constructor},
          {"a", 0, SymbolKind::constructor}};
}
Term t(const Signature& sig, const std::string& text) {
  TermContext ctx{&sig, {}, false};
  return parse_term(text, ctx);
}
}  // namespace

TEST_CASE("paired signature enumeration", "[coding]") {
  std::vector<Symbol> nat = {{"0", 0, SymbolKind::constructor},
                             {"s", 1, SymbolKind::constructor}};
  auto ps = paired_signature(nat);
  CHECK(ps.size() == 8);  // 2*2 pairs + 2 left-bot + 2 right-bot
  std::set<std::string> names;
  for (const auto& p : ps) names.insert(p.name());
  CHECK(names.count("<0,0>"));
  CHECK(names.count("<0,s>"));
  CHECK(names.count("<s,_|_>"));
  CHECK(names.count("<_|_,0>"));
  CHECK(!names.count("<_|_,_|_>"));

  // the arity is the maximum of the two sides
  PairedSymbol gf{Symbol{"g", 1, SymbolKind::constructor},
                  Symbol{"f", 2, SymbolKind::constructor}};
  CHECK(gf.arity() == 2);
  PairedSymbol abot{Symbol{"a", 0, SymbolKind::constructor}, std::nullopt};
  CHECK(abot.arity() == 0);
}

TEST_CASE("coding of the two example trees", "[coding]") {
  Signature sig(fig_ctors(), {});
  Term left = t(sig, "f(g(a),g(a))");
  Term right = t(sig, "f(f(a,a),a)");
  Term coded = code(left, right);
  CHECK(show(coded) == "<f,f>(<g,f>(<a,a>,<_|_,a>),<g,a>(<a,_|_>))");

  PairedSignature ps(fig_ctors());
  auto [l, r] = decode(coded, ps);
  REQUIRE(l);
  REQUIRE(r);
  CHECK(*l == left);
  CHECK(*r == right);
}

TEST_CASE("coding edge cases", "[coding]") {
  Signature sig({{"0", 0}, {"s", 1}, {"a", 0}}, {});
  CHECK(show(code(t(sig, "a"), t(sig, "a"))) == "<a,a>");
  CHECK(show(code(std::nullopt, t(sig, "s(0)"))) == "<_|_,s>(<_|_,0>)");
  CHECK(show(code(t(sig, "s(0)"), std::nullopt)) == "<s,_|_>(<0,_|_>)");
  CHECK_THROWS_AS(code(std::nullopt, std::nullopt), CodingError);
  TermContext ctx{&sig, {}, true};
  CHECK_THROWS_AS(code(parse_term("s(x)", ctx), t(sig, "0")), CodingError);
}

TEST_CASE("decode rejects ill-formed codings", "[coding]") {
  std::vector<Symbol> cs = {{"0", 0, SymbolKind::constructor},
                            {"s", 1, SymbolKind::constructor}};
  PairedSignature ps(cs);
  Symbol sbot{"<s,_|_>", 1, SymbolKind::constructor};
  Symbol bots{"<_|_,s>", 1, SymbolKind::constructor};
  Symbol zz{"<0,0>", 0, SymbolKind::constructor};
  // a present right side below a bot right side
  Term bad = Term::app(sbot, {Term::app(bots, {Term::app(zz)})});
  CHECK_THROWS_AS(decode(bad, ps), CodingError);
  Symbol unknown{"<s,s,s>", 1, SymbolKind::constructor};
  CHECK_THROWS_AS(decode(Term::app(unknown, {Term::app(zz)}), ps), CodingError);
}

TEST_CASE("coding positions, roundtrip, injectivity", "[coding][property]") {
  auto rng = testutil::make_rng();
  PairedSignature ps(testutil::small_ctors());
  std::vector<std::pair<Term, Term>> seen;
  for (int i = 0; i < 300; ++i) {
    Term a = testutil::random_ground_term(rng, testutil::small_ctors(), 3);
    Term b = testutil::random_ground_term(rng, testutil::small_ctors(), 3);
    Term u = code(a, b);

    // positions of the coding are the union of the positions
    std::set<Position> pu, pa, pb;
    for (auto& p : positions(u)) pu.insert(p);
    for (auto& p : positions(a)) pa.insert(p);
    for (auto& p : positions(b)) pb.insert(p);
    std::set<Position> un = pa;
    un.insert(pb.begin(), pb.end());
    CHECK(pu == un);

    // roundtrip
    auto [l, r] = decode(u, ps);
    REQUIRE(l);
    REQUIRE(r);
    CHECK(*l == a);
    CHECK(*r == b);

    // injectivity against everything seen so far
    for (auto& [pa2, pb2] : seen)
      if (code(pa2, pb2) == u) CHECK((pa2 == a && pb2 == b));
    seen.emplace_back(a, b);
  }
}
