#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "presburger/errors.hpp"
#include "presburger/lexrep.hpp"

using namespace presburger;

namespace {

Polynomial mono(unsigned deg, Rat c) {
  Polynomial p = Polynomial::zero(1);
  p.coef[{deg}] = std::move(c);
  return p;
}

Rat at(const PiecewisePolynomial& pp, long k) { return evalPiecewise(pp, {Int(k)}); }

std::size_t countAtSpine(const LexRepresentation& R, long k, long bound) {
  SemilinearSet SS{R.r, R.S.pieces};
  std::size_t n = 0;
  for (const auto& p : enumerate(SS, bound))
    if (p[0] == k) ++n;
  return n;
}

} // namespace

TEST_CASE("quadratic factoring") {
  SUBCASE("k^2 + 3k + 2 = (k+1)(k+2)") {
    Polynomial f = mono(2, 1) + mono(1, 3) + mono(0, 2);
    auto fac = factorQuadratic(f);
    REQUIRE(fac.has_value());
    auto [g, h] = *fac;
    Polynomial gp = mono(1, g.first) + mono(0, g.second);
    Polynomial hp = mono(1, h.first) + mono(0, h.second);
    CHECK(gp * hp == f);
  }
  SUBCASE("triangle numbers (k^2 + k) / 2 split") {
    Polynomial f = mono(2, Rat(1, 2)) + mono(1, Rat(1, 2));
    auto fac = factorQuadratic(f);
    REQUIRE(fac.has_value());
    auto [g, h] = *fac;
    Polynomial gp = mono(1, g.first) + mono(0, g.second);
    Polynomial hp = mono(1, h.first) + mono(0, h.second);
    CHECK(gp * hp == f);
  }
  SUBCASE("k^2 + 1 has no rational roots") {
    CHECK_FALSE(factorQuadratic(mono(2, 1) + mono(0, 1)).has_value());
  }
  SUBCASE("non-quadratics rejected") {
    CHECK_FALSE(factorQuadratic(mono(1, 1)).has_value());
  }
}

TEST_CASE("spine synthesis") {
  SUBCASE("omega: a single galaxy, degenerate spine") {
    SpineMap s = synthesizeSpine(catalogEntry("omega"));
    CHECK(s.total);
    CHECK(s.samples.size() == 1);
  }
  SUBCASE("finite5: identity map on five elements") {
    SpineMap s = synthesizeSpine(catalogEntry("finite5"));
    CHECK(s.total);
    REQUIRE(s.samples.size() == 5);
    REQUIRE(s.coords.size() == 1);
    for (long k = 0; k < 5; ++k) CHECK(at(s.coords[0], k) == Rat(k));
  }
  SUBCASE("lex_omega2: representative of column k is (k, 0)") {
    SpineMap s = synthesizeSpine(catalogEntry("lex_omega2"));
    CHECK_FALSE(s.total);
    REQUIRE(s.samples.size() >= 8);
    REQUIRE(s.coords.size() == 2);
    for (long k = 0; k < 8; ++k) {
      CHECK(at(s.coords[0], k) == Rat(k));
      CHECK(at(s.coords[1], k) == Rat(0));
    }
    for (const auto& pp : s.coords) CHECK(pp.declaredDegree <= 1);
  }
  SUBCASE("growing_boxes: fitted map reproduces every sampled representative") {
    SpineMap s = synthesizeSpine(catalogEntry("growing_boxes"));
    CHECK_FALSE(s.total);
    REQUIRE(s.coords.size() == 2);
    for (std::size_t k = 0; k < s.samples.size(); ++k) {
      CHECK(at(s.coords[0], static_cast<long>(k)) == Rat(s.samples[k][0]));
      CHECK(at(s.coords[1], static_cast<long>(k)) == Rat(s.samples[k][1]));
    }
    // ascending in the internal order = ascending lexicographically here
    CHECK(std::is_sorted(s.samples.begin(), s.samples.end()));
  }
}

TEST_CASE("construction on the catalog") {
  SUBCASE("finite5 maps to an initial segment of N") {
    LexRepresentation R = constructLexRep(catalogEntry("finite5"));
    CHECK(R.r == 1);
    CHECK(R.S.pieces.size() == 5);
    CHECK(R.descending == std::vector<bool>{false});
    for (const auto& p : R.S.pieces) CHECK(p.periods.empty());
  }
  SUBCASE("omega maps to N itself") {
    LexRepresentation R = constructLexRep(catalogEntry("omega"));
    CHECK(R.r == 1);
    REQUIRE(R.S.pieces.size() == 1);
    CHECK(R.S.pieces[0].base == Vec{0});
    REQUIRE(R.S.pieces[0].periods.size() == 1);
    CHECK(R.S.pieces[0].periods[0] == Vec{1});
  }
  SUBCASE("lex_omega2 maps to N^2 under plain lex") {
    LexRepresentation R = constructLexRep(catalogEntry("lex_omega2"));
    CHECK(R.r == 2);
    CHECK(std::none_of(R.descending.begin(), R.descending.end(),
                       [](bool b) { return b; }));
    // the decomposition covers all of N^2: 9 * 9 points in the 8-box
    CHECK(countAtSpine(R, 3, 8) == 9);
    SemilinearSet SS{R.r, R.S.pieces};
    CHECK(enumerate(SS, 8).size() == 81);
  }
  SUBCASE("reverse_omega becomes one descending coordinate") {
    LexRepresentation R = constructLexRep(catalogEntry("reverse_omega"));
    CHECK(R.r == 1);
    CHECK(R.descending == std::vector<bool>{true});
  }
  SUBCASE("zeta becomes a descending and an ascending track") {
    LexRepresentation R = constructLexRep(catalogEntry("zeta"));
    CHECK(R.r == 3);
    CHECK(R.descending == std::vector<bool>{false, true, false});
  }
  SUBCASE("growing_boxes: one descending coordinate, linear boxes") {
    LexRepresentation R = constructLexRep(catalogEntry("growing_boxes"));
    CHECK(R.r == 4);
    CHECK(std::count(R.descending.begin(), R.descending.end(), true) == 1);
    // finite galaxies sit at odd spine indices with |G(k)| = (k+1)/2
    for (long k = 1; k <= 29; k += 2)
      CHECK(countAtSpine(R, k, 64) == static_cast<std::size_t>((k + 1) / 2));
    bool linearNoted = false;
    for (const auto& line : R.provenance)
      linearNoted = linearNoted || line.find("|G(k)|") != std::string::npos;
    CHECK(linearNoted);
  }
}

TEST_CASE("prefix verification") {
  SUBCASE("constructed representations verify") {
    for (const char* name : {"omega", "finite5", "lex_omega2"}) {
      CAPTURE(name);
      LexRepresentation R = constructLexRep(catalogEntry(name));
      VerificationReport v = verifyLexRep(catalogEntry(name), R, 200);
      CHECK(v.ok);
      CHECK_FALSE(v.truncated);
    }
  }
  SUBCASE("growing_boxes verifies at 200") {
    LexRepresentation R = constructLexRep(catalogEntry("growing_boxes"));
    VerificationReport v = verifyLexRep(catalogEntry("growing_boxes"), R, 200);
    CHECK(v.ok);
    CHECK(v.checked == 200);
  }
  SUBCASE("any omega-shaped set verifies against omega: the evens") {
    LexRepresentation evens;
    evens.r = 1;
    evens.S.arity = 1;
    evens.S.pieces.push_back(Lattice::make({0}, {{2}}, true));
    evens.descending = {false};
    VerificationReport v = verifyLexRep(catalogEntry("omega"), evens, 50);
    CHECK(v.ok);
    CHECK(v.checked == 50);
  }
  SUBCASE("length mismatch is reported with its position") {
    LexRepresentation three;
    three.r = 1;
    three.S.arity = 1;
    for (long k = 0; k < 3; ++k) three.S.pieces.push_back(Lattice::make({k}, {}, true));
    three.descending = {false};
    VerificationReport v = verifyLexRep(catalogEntry("finite5"), three, 200);
    CHECK_FALSE(v.ok);
    CHECK(v.mismatchIndex == 3);
  }
  SUBCASE("orders without a first element report truncation, not success") {
    Limits lim;
    lim.boxMax = 512; // keep the failing box growth cheap
    LexRepresentation R = constructLexRep(catalogEntry("reverse_omega"), lim);
    VerificationReport v = verifyLexRep(catalogEntry("reverse_omega"), R, 50, lim);
    CHECK_FALSE(v.ok);
    CHECK(v.truncated);
  }
}

TEST_CASE("json round trip") {
  LexRepresentation R = constructLexRep(catalogEntry("zeta"));
  LexRepresentation back = parseLexRep(lexRepToJson(R));
  CHECK(back.r == R.r);
  CHECK(back.descending == R.descending);
  REQUIRE(back.S.pieces.size() == R.S.pieces.size());
  for (std::size_t i = 0; i < R.S.pieces.size(); ++i) {
    CHECK(back.S.pieces[i].base == R.S.pieces[i].base);
    CHECK(back.S.pieces[i].periods == R.S.pieces[i].periods);
  }
  CHECK_THROWS_AS(parseLexRep("not json"), DomainError);
  CHECK_THROWS_AS(parseLexRep("{\"r\":0,\"pieces\":[]}"), DomainError);
}
