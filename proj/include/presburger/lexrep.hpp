#pragma once

#include <optional>
#include <string>
#include <vector>

#include "presburger/counting.hpp"
#include "presburger/interp.hpp"
#include "presburger/orderanalysis.hpp"

namespace presburger {

// Piecewise-linear ascending enumeration of the condensation: index k maps to
// the k-th galaxy representative, one degree-<=1 piecewise polynomial per
// coordinate of the representative.
struct SpineMap {
  std::vector<PiecewisePolynomial> coords;
  std::vector<Vec> samples; // enumerated representatives, ascending
  bool total = false;       // samples exhaust the order
};

// A definable set S in N^r whose lexicographic order is isomorphic to the
// source order. Coordinates flagged descending compare in reverse; they
// realize the descending halves (the -N blocks) over N.
struct LexRepresentation {
  std::size_t r = 0;
  DisjointFundamentalDecomposition S;
  std::vector<bool> descending;
  std::vector<std::string> provenance; // construction steps, human readable
};

struct VerificationReport {
  bool ok = false;
  std::size_t checked = 0; // prefix elements compared
  bool truncated = false;  // a prefix failed to stabilize within the box cap
  long long mismatchIndex = -1;
  std::string message;
};

// The comparison of R: lexicographic with the flagged coordinates reversed.
bool lexLess(const LexRepresentation& R, const Vec& a, const Vec& b);

SpineMap synthesizeSpine(const Interpretation& I, const Limits& limits = {});

// Build a lexicographic representation. Requires the condensation of I to be
// finite or an ascending chain; finite galaxies get box dimensions matching
// the fitted degree of their cardinality function.
LexRepresentation constructLexRep(const Interpretation& I, const Limits& limits = {});

// Prefix comparison: both orders are enumerated ascending inside auto-grown
// boxes until the prefix stabilizes, then matched element for element.
VerificationReport verifyLexRep(const Interpretation& I, const LexRepresentation& R,
                                std::size_t prefixLength = 200,
                                const Limits& limits = {});

std::string lexRepToJson(const LexRepresentation& R);
LexRepresentation parseLexRep(const std::string& jsonText);

// Split a degree-2 polynomial in one variable into two linear factors over Q;
// nullopt when the discriminant is not a rational square. Each factor is
// returned as (slope, intercept).
std::optional<std::pair<std::pair<Rat, Rat>, std::pair<Rat, Rat>>>
factorQuadratic(const Polynomial& f);

} // namespace presburger
