#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "presburger/errors.hpp"
#include "presburger/interp.hpp"
#include "presburger/qelim.hpp"

using namespace presburger;

namespace {

Interpretation lexN2() {
  return Interpretation::make("lex2", 2, parse("0 = 0"),
                              parse("x1 < y1 | (x1 = y1 & x2 < y2)"));
}

Interpretation omegaPlusOmegaStar() {
  // evens ascend, then odds descend
  return Interpretation::make(
      "omega_plus_omega_star", 1, parse("0 = 0"),
      parse("(x1 == 0 mod 2 & y1 == 0 mod 2 & x1 < y1)"
            " | (x1 == 0 mod 2 & y1 == 1 mod 2)"
            " | (x1 == 1 mod 2 & y1 == 1 mod 2 & y1 < x1)"));
}

FormulaPtr atPoints(const Interpretation& I, FormulaPtr f, const Vec& a,
                    const Vec* b = nullptr) {
  for (std::size_t i = 0; i < I.m; ++i)
    f = substitute(f, "x" + std::to_string(i + 1), a[i]);
  if (b)
    for (std::size_t i = 0; i < I.m; ++i)
      f = substitute(f, "y" + std::to_string(i + 1), (*b)[i]);
  return f;
}

} // namespace

TEST_CASE("construction enforces the variable conventions") {
  CHECK_THROWS_AS(Interpretation::make("bad", 0, parse("0 = 0"), parse("x1 < y1")),
                  DomainError);
  CHECK_THROWS_AS(Interpretation::make("bad", 1, parse("x2 = 0"), parse("x1 < y1")),
                  DomainError);
  CHECK_THROWS_AS(Interpretation::make("bad", 1, parse("0 = 0"), parse("x1 < z1")),
                  DomainError);
  CHECK_THROWS_AS(Interpretation::make("bad", 1, parse("y1 = 0"), parse("x1 < y1")),
                  DomainError);
  CHECK_THROWS_AS(
      Interpretation::make("bad", 1, parse("0 = 0"), parse("x1 < y1"), parse("z9 = 0")),
      DomainError);
  CHECK_NOTHROW(lexN2());
}

TEST_CASE("json round trip") {
  std::string text = R"itp({"name":"lex2","dim":2,"domain":"0 = 0",
                         "less":"x1 < y1 | (x1 = y1 & x2 < y2)"})itp";
  Interpretation I = parseInterpretation(text);
  CHECK(I.name == "lex2");
  CHECK(I.m == 2);
  CHECK(!I.equality);

  Interpretation J = parseInterpretation(interpretationToJson(I));
  CHECK(J.name == I.name);
  CHECK(J.m == I.m);
  CHECK(structuralEq(J.domain, I.domain));
  CHECK(structuralEq(J.less, I.less));

  Interpretation K = parseInterpretation(
      R"({"name":"k","dim":1,"domain":"0 = 0","less":"x1 < y1","equality":"x1 = y1"})");
  CHECK(K.equality);
  Interpretation K2 = parseInterpretation(interpretationToJson(K));
  CHECK(structuralEq(K2.equality, K.equality));

  CHECK_THROWS_AS(parseInterpretation("not json at all"), ParseError);
  CHECK_THROWS_AS(parseInterpretation(R"({"name":"x","dim":1})"), ParseError);
  CHECK_THROWS_AS(parseInterpretation(R"({"name":3,"dim":1,"domain":"0=0","less":"0=0"})"),
                  ParseError);
}

TEST_CASE("validate accepts lex order on N^2") {
  ValidationReport rep = validate(lexN2());
  CHECK(rep.ok);
  CHECK(rep.axioms.size() == 7);
  for (const auto& a : rep.axioms) CHECK(a.holds);
}

TEST_CASE("validate rejects a reflexive comparison") {
  Interpretation I = Interpretation::make("eq-as-less", 1, parse("0 = 0"),
                                          parse("x1 = y1"));
  ValidationReport rep = validate(I);
  CHECK(!rep.ok);
  bool sawIrreflexive = false;
  for (const auto& a : rep.axioms)
    if (a.axiom == "irreflexive") {
      sawIrreflexive = true;
      CHECK(!a.holds);
    }
  CHECK(sawIrreflexive);
}

TEST_CASE("validate with a nontrivial equality relation") {
  // two classes mod 2, evens-class below odds-class: a congruence
  Interpretation good = Interpretation::make(
      "parity", 1, parse("0 = 0"), parse("x1 == 0 mod 2 & y1 == 1 mod 2"),
      parse("x1 + y1 == 0 mod 2"));
  ValidationReport rep = validate(good);
  CHECK(rep.ok);

  // same equality but the usual order: not a congruence (0 ~ 2 yet 0 < 1 < 2)
  Interpretation bad = Interpretation::make("parity-bad", 1, parse("0 = 0"),
                                            parse("x1 < y1"),
                                            parse("x1 + y1 == 0 mod 2"));
  ValidationReport rep2 = validate(bad);
  CHECK(!rep2.ok);
  for (const auto& a : rep2.axioms)
    if (a.axiom == "comparison respects equality") CHECK(!a.holds);
}

TEST_CASE("validate accepts omega_plus_omega_star") {
  ValidationReport rep = validate(omegaPlusOmegaStar());
  CHECK(rep.ok);
}

TEST_CASE("internalLess on spec points") {
  Interpretation I = lexN2();
  CHECK(internalLess(I, {0, 5}, {1, 0}));
  CHECK(!internalLess(I, {1, 0}, {0, 5}));
  CHECK(!internalLess(I, {1, 0}, {1, 0}));

  Interpretation O = omegaPlusOmegaStar();
  CHECK(internalLess(O, {3}, {1}));  // odds descend
  CHECK(!internalLess(O, {1}, {3}));
  CHECK(internalLess(O, {0}, {2}));
  CHECK(internalLess(O, {4}, {1}));  // every even below every odd

  Interpretation half = Interpretation::make("half", 1, parse("x1 < 5"),
                                             parse("x1 < y1"));
  CHECK_THROWS_AS(internalLess(half, {7}, {1}), DomainError);
  CHECK_THROWS_AS(inDomain(half, {1, 2}), DomainError);
  CHECK(inDomain(half, {4}));
  CHECK(!inDomain(half, {5}));
}

TEST_CASE("enumerateAscending") {
  AscendingPrefix p = enumerateAscending(lexN2(), 4, 10);
  CHECK(!p.truncated);
  CHECK(p.points == std::vector<Vec>{{0, 0}, {0, 1}, {0, 2}, {0, 3}});

  AscendingPrefix q = enumerateAscending(omegaPlusOmegaStar(), 3, 10);
  CHECK(!q.truncated);
  CHECK(q.points == std::vector<Vec>{{0}, {2}, {4}});

  Interpretation empty = Interpretation::make("void", 1, parse("0 < 0"),
                                              parse("x1 < y1"));
  AscendingPrefix r = enumerateAscending(empty, 2, 5);
  CHECK(r.truncated);
  CHECK(r.points.empty());
}

TEST_CASE("sameGalaxyFormula on lex N^2 and omega_plus_omega_star") {
  Interpretation I = lexN2();
  FormulaPtr T = sameGalaxyFormula(I);
  Vec b{0, 9};
  CHECK(decide(atPoints(I, T, {0, 1}, &b)));
  Vec c{1, 0};
  CHECK(!decide(atPoints(I, T, {0, 3}, &c)));
  Vec a{4, 7};
  CHECK(decide(atPoints(I, T, {4, 7}, &a)));

  Interpretation O = omegaPlusOmegaStar();
  FormulaPtr TO = sameGalaxyFormula(O);
  Vec e2{6};
  CHECK(decide(atPoints(O, TO, {0}, &e2)));   // both in the even galaxy
  Vec o1{1};
  CHECK(!decide(atPoints(O, TO, {0}, &o1)));  // infinitely many evens between
  Vec o2{9};
  CHECK(decide(atPoints(O, TO, {3}, &o2)));   // both in the odd galaxy
}

TEST_CASE("lexMinRepresentativeFormula picks galaxy minima") {
  Interpretation I = lexN2();
  FormulaPtr Dp = lexMinRepresentativeFormula(I);
  CHECK(decide(atPoints(I, Dp, {3, 0})));
  CHECK(!decide(atPoints(I, Dp, {3, 1})));
  CHECK(decide(atPoints(I, Dp, {0, 0})));

  Interpretation triv = Interpretation::make("omega", 1, parse("0 = 0"),
                                             parse("x1 < y1"));
  FormulaPtr Dt = lexMinRepresentativeFormula(triv);
  CHECK(decide(atPoints(triv, Dt, {0})));
  for (long k = 1; k <= 5; ++k) CHECK(!decide(atPoints(triv, Dt, {Int(k)})));

  Interpretation O = omegaPlusOmegaStar();
  FormulaPtr Do = lexMinRepresentativeFormula(O);
  CHECK(decide(atPoints(O, Do, {0})));
  CHECK(decide(atPoints(O, Do, {1})));
  CHECK(!decide(atPoints(O, Do, {2})));
  CHECK(!decide(atPoints(O, Do, {3})));
}

TEST_CASE("internal order is a strict total order on a box") {
  for (Interpretation I : {lexN2(), omegaPlusOmegaStar()}) {
    long B = I.m == 2 ? 8 : 12;
    FormulaPtr domQf = simplify(eliminate(I.domain));
    FormulaPtr lessQf = simplify(eliminate(I.less));
    std::vector<Vec> pts;
    Vec v(I.m, 0);
    for (;;) {
      Assignment s;
      for (std::size_t i = 0; i < I.m; ++i) s["x" + std::to_string(i + 1)] = v[i];
      if (evaluate(domQf, s)) pts.push_back(v);
      std::size_t i = 0;
      while (i < I.m && ++v[i] > B) v[i++] = 0;
      if (i == I.m) break;
    }
    auto lt = [&](const Vec& a, const Vec& b) {
      Assignment s;
      for (std::size_t i = 0; i < I.m; ++i) {
        s["x" + std::to_string(i + 1)] = a[i];
        s["y" + std::to_string(i + 1)] = b[i];
      }
      return evaluate(lessQf, s);
    };
    for (const auto& a : pts)
      for (const auto& b : pts) {
        if (a == b) {
          CHECK(!lt(a, b));
        } else {
          CHECK(lt(a, b) != lt(b, a)); // asymmetry + totality
        }
      }
    // transitivity on a thinned sample to keep the triple count modest
    std::vector<Vec> sub;
    for (std::size_t i = 0; i < pts.size(); i += 4) sub.push_back(pts[i]);
    for (const auto& a : sub)
      for (const auto& b : sub)
        for (const auto& c : sub)
          if (lt(a, b) && lt(b, c)) CHECK(lt(a, c));
  }
}

TEST_CASE("same-galaxy relation is an equivalence on samples") {
  for (Interpretation I : {lexN2(), omegaPlusOmegaStar()}) {
    long B = I.m == 2 ? 6 : 12;
    FormulaPtr Tqf = simplify(eliminate(sameGalaxyFormula(I)));
    auto T = [&](const Vec& a, const Vec& b) {
      Assignment s;
      for (std::size_t i = 0; i < I.m; ++i) {
        s["x" + std::to_string(i + 1)] = a[i];
        s["y" + std::to_string(i + 1)] = b[i];
      }
      return evaluate(Tqf, s);
    };
    std::vector<Vec> pts = enumerateAscending(I, 12, B).points;
    for (const auto& a : pts) CHECK(T(a, a));
    for (const auto& a : pts)
      for (const auto& b : pts) CHECK(T(a, b) == T(b, a));
    for (const auto& a : pts)
      for (const auto& b : pts)
        for (const auto& c : pts)
          if (T(a, b) && T(b, c)) CHECK(T(a, c));
  }
}

TEST_CASE("lex-least representative exists and is unique per galaxy") {
  for (Interpretation I : {lexN2(), omegaPlusOmegaStar()}) {
    long B = I.m == 2 ? 6 : 12;
    FormulaPtr Tqf = simplify(eliminate(sameGalaxyFormula(I)));
    FormulaPtr Dpqf = simplify(eliminate(lexMinRepresentativeFormula(I)));
    auto evalAt = [&](const FormulaPtr& f, const Vec& a, const Vec* b) {
      Assignment s;
      for (std::size_t i = 0; i < I.m; ++i) {
        s["x" + std::to_string(i + 1)] = a[i];
        if (b) s["y" + std::to_string(i + 1)] = (*b)[i];
      }
      return evaluate(f, s);
    };
    std::vector<Vec> pts = enumerateAscending(I, 10, B).points;
    for (const auto& a : pts) {
      // some representative shares a's galaxy
      FormulaPtr probe = Formula::conj(Dpqf, Tqf);
      for (std::size_t i = 0; i < I.m; ++i)
        probe = substitute(probe, "y" + std::to_string(i + 1), a[i]);
      for (std::size_t i = I.m; i-- > 0;)
        probe = Formula::exists("x" + std::to_string(i + 1), probe);
      CHECK(decide(probe));
    }
    std::vector<Vec> reps;
    for (const auto& a : pts)
      if (evalAt(Dpqf, a, nullptr)) reps.push_back(a);
    for (const auto& r : reps)
      for (const auto& s : reps)
        if (r != s) CHECK(!evalAt(Tqf, r, &s));
  }
}

TEST_CASE("enumerateAscending output strictly increases") {
  for (Interpretation I : {lexN2(), omegaPlusOmegaStar()}) {
    AscendingPrefix p = enumerateAscending(I, 15, 5);
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
      CHECK(internalLess(I, p.points[i], p.points[i + 1]));
      CHECK(!internalLess(I, p.points[i + 1], p.points[i]));
    }
  }
}
