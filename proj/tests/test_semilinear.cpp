#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "gen.hpp"
#include "presburger/semilinear.hpp"

using namespace presburger;
using pbtest::FormulaGen;

namespace {

// Points of [0,bound]^m satisfying phi, lexicographically sorted.
std::vector<Vec> brutePoints(const FormulaPtr& phi, const std::vector<std::string>& vars,
                             long bound) {
  std::vector<Vec> out;
  Vec v(vars.size(), 0);
  for (;;) {
    Assignment s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = v[i];
    if (evaluate(phi, s)) out.push_back(v);
    std::size_t i = 0;
    while (i < vars.size() && ++v[i] > bound) v[i++] = 0;
    if (i == vars.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

SemilinearSet asSet(const DisjointFundamentalDecomposition& D) {
  return SemilinearSet{D.arity, D.pieces};
}

} // namespace

TEST_CASE("member") {
  Lattice evens = Lattice::make({0}, {{2}});
  CHECK(member(evens, {6}));
  CHECK_FALSE(member(evens, {3}));
  Lattice diag = Lattice::make({0, 0}, {{1, 2}});
  CHECK(member(diag, {3, 6}));
  CHECK_FALSE(member(diag, {3, 5}));
  CHECK_THROWS_AS(member(diag, {1}), DomainError);
  Lattice pt = Lattice::make({4, 7}, {});
  CHECK(member(pt, {4, 7}));
  CHECK_FALSE(member(pt, {4, 8}));
}

TEST_CASE("lattice construction checks") {
  CHECK_THROWS_AS(Lattice::make({1}, {{2, 3}}), DomainError);
  CHECK_THROWS_AS(Lattice::make({0}, {{-1}}), DomainError);
  CHECK(Lattice::make({0}, {{-1}}, false).arity == 1);
  CHECK(Lattice::make({0, 0}, {{1, 0}, {0, 1}}).fundamental());
  CHECK_FALSE(Lattice::make({0, 0}, {{1, 1}, {2, 2}}).fundamental());
  CHECK_FALSE(Lattice::make({0, 0}, {{1, 0}, {0, 1}, {1, 1}}).fundamental());
}

TEST_CASE("fromFormula spec examples") {
  SemilinearSet evens = fromFormula(parse("x == 0 mod 2"), {"x"});
  CHECK(enumerate(evens, 5) == std::vector<Vec>{{0}, {2}, {4}});

  SemilinearSet diag = fromFormula(parse("y = 2*x"), {"x", "y"});
  CHECK(enumerate(diag, 4) == std::vector<Vec>{{0, 0}, {1, 2}, {2, 4}});

  SemilinearSet small = fromFormula(parse("x < 3"), {"x"});
  CHECK(enumerate(small, 50) == std::vector<Vec>{{0}, {1}, {2}});

  SemilinearSet none = fromFormula(parse("x < x"), {"x"});
  CHECK(enumerate(none, 10).empty());
}

TEST_CASE("itoDecompose spec examples") {
  SUBCASE("already fundamental") {
    SemilinearSet S{1, {Lattice::make({0}, {{2}})}};
    auto D = itoDecompose(S);
    CHECK(enumerate(asSet(D), 100) == enumerate(S, 100));
    for (const auto& p : D.pieces) CHECK(p.fundamental());
  }
  SUBCASE("union of 2N and 3N") {
    SemilinearSet S{1, {Lattice::make({0}, {{2}}), Lattice::make({0}, {{3}})}};
    auto D = itoDecompose(S);
    CHECK(enumerate(asSet(D), 100) == enumerate(S, 100));
    // disjoint: no point in two pieces
    for (long x = 0; x <= 100; ++x) {
      int hits = 0;
      for (const auto& p : D.pieces)
        if (member(p, {x})) ++hits;
      CHECK(hits <= 1);
    }
  }
  SUBCASE("non-fundamental periods 2 and 3") {
    SemilinearSet S{1, {Lattice::make({0}, {{2}, {3}})}};
    auto D = itoDecompose(S);
    std::vector<Vec> want;
    for (long x = 0; x <= 100; ++x)
      if (x == 0 || x == 2 || x >= 3) want.push_back({x});
    CHECK(enumerate(asSet(D), 100) == want);
    for (const auto& p : D.pieces) CHECK(p.fundamental());
  }
}

TEST_CASE("dimension spec examples") {
  CHECK(dimension(itoDecompose(fromFormula(parse("0 = 0"), {"x", "y"}))) == 2);
  CHECK(dimension(itoDecompose(fromFormula(parse("y = 2*x"), {"x", "y"}))) == 1);
  CHECK(dimension(itoDecompose(fromFormula(parse("x = 5 & y = 7"), {"x", "y"}))) == 0);
  auto empty = itoDecompose(fromFormula(parse("x < x"), {"x"}));
  CHECK(isEmpty(empty));
  CHECK(dimension(empty) == 0);
}

TEST_CASE("dimension of the full space") {
  std::vector<std::string> vars;
  for (std::size_t k = 1; k <= 3; ++k) {
    vars.push_back("x" + std::to_string(k));
    CHECK(dimension(itoDecompose(fromFormula(parse("0 = 0"), vars))) == k);
  }
}

TEST_CASE("isFinite") {
  CHECK(isFinite(SemilinearSet{1, {Lattice::make({0}, {}), Lattice::make({1}, {})}}));
  CHECK_FALSE(isFinite(fromFormula(parse("x == 0 mod 2"), {"x"})));
  SemilinearSet box = fromFormula(parse("x < 10 & y < 10"), {"x", "y"});
  CHECK(isFinite(box));
  CHECK(enumerate(box, 30).size() == 100);
}

TEST_CASE("fromFormula matches brute force on random formulas") {
  FormulaGen gen(1618);
  gen.vars = {"x", "y"};
  for (int i = 0; i < 40; ++i) {
    FormulaPtr phi = gen.qf(2);
    SemilinearSet S = fromFormula(phi, {"x", "y"});
    CHECK(enumerate(S, 40) == brutePoints(phi, {"x", "y"}, 40));
  }
  gen.vars = {"x", "y", "z"};
  for (int i = 0; i < 6; ++i) {
    FormulaPtr phi = gen.qf(1);
    SemilinearSet S = fromFormula(phi, {"x", "y", "z"});
    CHECK(enumerate(S, 15) == brutePoints(phi, {"x", "y", "z"}, 15));
  }
}

TEST_CASE("itoDecompose fidelity on random formulas") {
  FormulaGen gen(2718);
  gen.vars = {"x", "y"};
  const long B = 40;
  for (int i = 0; i < 15; ++i) {
    FormulaPtr phi = gen.qf(2);
    SemilinearSet S = fromFormula(phi, {"x", "y"});
    auto D = itoDecompose(S);
    CHECK(enumerate(asSet(D), B) == enumerate(S, B));
    for (const auto& p : D.pieces) CHECK(p.fundamental());
    Vec v(2, 0);
    for (;;) {
      int hits = 0;
      for (const auto& p : D.pieces)
        if (member(p, v)) ++hits;
      CHECK(hits <= 1);
      std::size_t k = 0;
      while (k < 2 && ++v[k] > B) v[k++] = 0;
      if (k == 2) break;
    }
  }
}

TEST_CASE("dimension stable under lattice reordering") {
  FormulaGen gen(141);
  gen.vars = {"x", "y"};
  for (int i = 0; i < 10; ++i) {
    SemilinearSet S = fromFormula(gen.qf(2), {"x", "y"});
    if (S.lattices.size() < 2) continue;
    SemilinearSet R = S;
    std::reverse(R.lattices.begin(), R.lattices.end());
    CHECK(dimension(itoDecompose(S)) == dimension(itoDecompose(R)));
  }
}

TEST_CASE("fromFormula input checking") {
  CHECK_THROWS_AS(fromFormula(parse("exists x. x = y"), {"y"}), DomainError);
  CHECK_THROWS_AS(fromFormula(parse("x = y"), {"x"}), DomainError);
}

TEST_CASE("piece budget surfaces as BudgetError") {
  Limits tiny;
  tiny.pieces = 1;
  SemilinearSet S{1, {Lattice::make({0}, {{2}}), Lattice::make({0}, {{3}})}};
  CHECK_THROWS_AS(itoDecompose(S, tiny), BudgetError);
}
