#pragma once

#include <string>
#include <vector>

#include "presburger/diophantine.hpp"
#include "presburger/formula.hpp"
#include "presburger/qelim.hpp"

namespace presburger {

// An m-dimensional interpretation of a linear ordering in (N, +): a definable
// domain D over x1..xm, a definable comparison over x1..xm (left point) and
// y1..ym (right point), and an optional definable equality over the same
// variables (absent means tuple coincidence).
struct Interpretation {
  std::string name;
  std::size_t m = 0;
  FormulaPtr domain;
  FormulaPtr less;
  FormulaPtr equality; // may be null

  static Interpretation make(std::string name, std::size_t m, FormulaPtr domain,
                             FormulaPtr less, FormulaPtr equality = nullptr);
};

Interpretation parseInterpretation(const std::string& jsonText);
std::string interpretationToJson(const Interpretation& I);

struct AxiomVerdict {
  std::string axiom;
  bool holds;
};

struct ValidationReport {
  std::vector<AxiomVerdict> axioms;
  bool ok = false;
};

// Decides the linear-order axioms of the comparison on the domain modulo the
// equality relation, each as a sentence.
ValidationReport validate(const Interpretation& I, const QelimOptions& opts = {});

bool inDomain(const Interpretation& I, const Vec& a);

// Truth of the comparison at two domain points (decided).
bool internalLess(const Interpretation& I, const Vec& a, const Vec& b);

struct AscendingPrefix {
  std::vector<Vec> points;
  bool truncated = false; // fewer than requested were found in the box
};

// First `count` domain points of [0, boxBound]^m in internal order.
AscendingPrefix enumerateAscending(const Interpretation& I, std::size_t count,
                                   long boxBound);

// T(x1..xm, y1..ym): both points lie in the domain and the internal interval
// between them (in whichever direction) is componentwise bounded.
FormulaPtr sameGalaxyFormula(const Interpretation& I);

// D'(x1..xm): x is the lexicographically least point of its galaxy.
FormulaPtr lexMinRepresentativeFormula(const Interpretation& I);

// The comparison with the left/right tuple variables renamed.
FormulaPtr lessBetween(const Interpretation& I, const std::string& leftPrefix,
                       const std::string& rightPrefix);

// Equality relation as a formula over the given tuple prefixes (tuple
// coincidence when no equality formula is present).
FormulaPtr equalityBetween(const Interpretation& I, const std::string& leftPrefix,
                           const std::string& rightPrefix);

FormulaPtr domainAt(const Interpretation& I, const std::string& prefix);

} // namespace presburger
