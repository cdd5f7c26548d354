#pragma once

#include "presburger/budget.hpp"
#include "presburger/linear.hpp"

namespace presburger {

struct QelimOptions {
  std::int64_t nodeBudget = 1'000'000;
};

// Quantifier elimination for Presburger arithmetic over N. The result has
// the same free variables and the same truth value as the input under every
// assignment over N.
FormulaPtr eliminate(const FormulaPtr& f, const QelimOptions& opts = {});

// Truth of a sentence in (N, +). Throws DomainError on free variables.
bool decide(const FormulaPtr& f, const QelimOptions& opts = {});

// Equivalence-preserving cleanup of a quantifier-free formula.
FormulaPtr simplify(const FormulaPtr& qf);

// IR-level entry points; they charge whatever budget is currently installed
// (see BudgetScope) and are what the other modules build on.
QfPtr eliminateToQf(const FormulaPtr& f);
bool decideQf(const FormulaPtr& f); // sentence decision via eliminateToQf

// One Cooper step: exists x over Z restricted to x >= 0, body in NNF.
QfPtr cooperExistsNat(const std::string& x, const QfPtr& body);

} // namespace presburger
