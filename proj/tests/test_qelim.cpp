#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gen.hpp"
#include "presburger/errors.hpp"
#include "presburger/qelim.hpp"

using namespace presburger;
using pbtest::FormulaGen;

namespace {

// Semantic equivalence of two formulas in the listed free variables,
// checked pointwise on a box.
bool equivOnBox(const FormulaPtr& a, const FormulaPtr& b,
                const std::vector<std::string>& vars, long bound) {
  Assignment s;
  std::vector<long> v(vars.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = v[i];
    if (evaluate(a, s) != evaluate(b, s)) return false;
    std::size_t i = 0;
    while (i < vars.size() && ++v[i] > bound) v[i++] = 0;
    if (i == vars.size()) return true;
    if (vars.empty()) return true;
  }
}

} // namespace

TEST_CASE("eliminate: spec examples") {
  FormulaPtr e1 = eliminate(parse("exists u. x = u + u"));
  CHECK(isQuantifierFree(e1));
  CHECK(equivOnBox(e1, parse("x == 0 mod 2"), {"x"}, 30));

  FormulaPtr e2 = eliminate(parse("exists z. y = x + z + 1"));
  CHECK(equivOnBox(e2, parse("x + 1 <= y"), {"x", "y"}, 15));

  FormulaPtr e3 = eliminate(parse("exists u. (t = 3*u + s | s = 3*u + t)"));
  CHECK(equivOnBox(e3, parse("t == s mod 3"), {"s", "t"}, 15));
}

TEST_CASE("decide: spec examples") {
  CHECK(decide(parse("forall x. exists y. y = x + x")));
  CHECK_FALSE(decide(parse("exists x. x + 1 = 0")));
  CHECK(decide(parse("forall x. (x == 0 mod 2 | x == 1 mod 2)")));
  CHECK_THROWS_AS(decide(parse("x = 0")), DomainError);
}

TEST_CASE("decide: assorted sentences") {
  CHECK(decide(parse("forall x. forall y. (x < y -> (exists z. (x < z & z < y + 1)))")));
  CHECK(decide(parse("exists x. (x == 2 mod 3 & x == 1 mod 4 & x > 10)")));
  CHECK_FALSE(decide(parse("exists x. (x == 1 mod 2 & x == 2 mod 4)")));
  CHECK(decide(parse("forall x. exists y. (y > x & y == 0 mod 5)")));
  CHECK_FALSE(decide(parse("forall x. exists y. x = y + y")));
  CHECK(decide(parse("forall x. forall y. (x + y >= x)")));
}

TEST_CASE("simplify") {
  CHECK(structuralEq(simplify(parse("0 = 0 & x < 3")), parse("x <= 2")));
  FormulaPtr f = simplify(parse("x < x"));
  Assignment s{{"x", 0}};
  CHECK_FALSE(evaluate(f, s));
  CHECK(evaluate(simplify(parse("x == 2 mod 1")), s));
  CHECK_THROWS_AS(simplify(parse("exists x. x = 0")), DomainError);
}

TEST_CASE("budget limit surfaces as BudgetError") {
  QelimOptions tiny;
  tiny.nodeBudget = 50;
  CHECK_THROWS_AS(
      eliminate(parse("exists x. exists y. (5*x + 4*y = z & 3*x + 5*y < w & x == 1 mod 6)"), tiny),
      BudgetError);
}

TEST_CASE("one-sided witness soundness against bounded brute force") {
  FormulaGen gen(2024);
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    FormulaPtr phi = gen.quantified(gen.pick(2));
    FormulaPtr elim = eliminate(phi);
    CHECK(isQuantifierFree(elim));
    auto fv = freeVars(phi);
    for (int trial = 0; trial < 3; ++trial) {
      Assignment sigma;
      for (const auto& v : fv) sigma[v] = gen.pick(25);
      auto oracle = pbtest::boundedEval(phi, sigma, 200);
      if (!oracle) continue;
      ++checked;
      CHECK(evaluate(elim, sigma) == *oracle);
    }
  }
  CHECK(checked > 100); // the oracle must actually bite
}

TEST_CASE("self-consistency: decide(phi or not phi)") {
  FormulaGen gen(777);
  for (int i = 0; i < 60; ++i) {
    FormulaPtr body = gen.qf(2);
    FormulaPtr phi = body;
    for (const auto& v : freeVars(body)) phi = Formula::forall(v, phi);
    CHECK(decide(Formula::disj(phi, Formula::negation(phi))));
    CHECK_FALSE(decide(Formula::conj(phi, Formula::negation(phi))));
  }
}

TEST_CASE("idempotence and free-variable preservation") {
  FormulaGen gen(31337);
  for (int i = 0; i < 60; ++i) {
    FormulaPtr phi = gen.quantified(gen.pick(2));
    FormulaPtr once = eliminate(phi);
    FormulaPtr twice = eliminate(once);
    auto fv = freeVars(phi);
    auto fvOnce = freeVars(once);
    for (const auto& v : fvOnce) CHECK(fv.count(v) == 1);
    // decide-checked biconditional between the two eliminations
    FormulaPtr bicond = Formula::conj(Formula::implies(once, twice), Formula::implies(twice, once));
    for (const auto& v : freeVars(bicond)) bicond = Formula::forall(v, bicond);
    CHECK(decide(bicond));
  }
}
