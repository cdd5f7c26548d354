#pragma once

// Shared random-formula generation and bounded three-valued evaluation used
// by the qelim and acceptance suites. The bounded evaluator is the
// independent oracle: it never consults the elimination path.

#include <optional>
#include <random>
#include <vector>

#include "presburger/formula.hpp"

namespace pbtest {

using namespace presburger;

struct FormulaGen {
  std::mt19937 rng;
  std::vector<std::string> vars{"x", "y", "z"};

  explicit FormulaGen(unsigned seed) : rng(seed) {}

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  std::string var() { return vars[pick(static_cast<int>(vars.size()))]; }

  TermPtr term(int depth) {
    switch (depth > 0 ? pick(4) : pick(3)) {
    case 0: return Term::var(var());
    case 1: return Term::num(pick(8));
    case 2: return Term::mul(pick(5) + 1, Term::var(var()));
    default: return Term::sum(term(depth - 1), term(depth - 1));
    }
  }

  FormulaPtr atom() {
    if (pick(4) == 0) return Formula::cong(term(1), term(1), pick(6) + 1);
    Rel rels[] = {Rel::Eq, Rel::Ne, Rel::Lt, Rel::Le, Rel::Gt, Rel::Ge};
    return Formula::atom(rels[pick(6)], term(1), term(1));
  }

  FormulaPtr qf(int depth) {
    if (depth == 0) return atom();
    switch (pick(5)) {
    case 0: return Formula::negation(qf(depth - 1));
    case 1: return Formula::conj(qf(depth - 1), qf(depth - 1));
    case 2: return Formula::disj(qf(depth - 1), qf(depth - 1));
    case 3: return Formula::implies(qf(depth - 1), qf(depth - 1));
    default: return atom();
    }
  }

  // Quantified formula with at most `alts` quantifier alternations.
  FormulaPtr quantified(int alts) {
    FormulaPtr body = qf(2);
    bool uni = pick(2) == 0;
    for (int i = 0; i <= alts; ++i) {
      std::string v = vars[i % vars.size()];
      body = uni ? Formula::forall(v, body) : Formula::exists(v, body);
      uni = !uni;
    }
    return body;
  }
};

// Kleene three-valued bounded evaluation: quantifiers range over [0, bound].
// Definite answers are sound for the full structure (N, +); nullopt means
// the bounded search was inconclusive.
inline std::optional<bool> boundedEval(const FormulaPtr& f, Assignment& sigma, long bound) {
  switch (f->kind) {
  case Formula::Kind::Atom:
    return evaluate(f, sigma);
  case Formula::Kind::Not: {
    auto v = boundedEval(f->a, sigma, bound);
    if (!v) return std::nullopt;
    return !*v;
  }
  case Formula::Kind::And: {
    auto l = boundedEval(f->a, sigma, bound);
    auto r = boundedEval(f->b, sigma, bound);
    if (l && !*l) return false;
    if (r && !*r) return false;
    if (l && r) return *l && *r;
    return std::nullopt;
  }
  case Formula::Kind::Or: {
    auto l = boundedEval(f->a, sigma, bound);
    auto r = boundedEval(f->b, sigma, bound);
    if (l && *l) return true;
    if (r && *r) return true;
    if (l && r) return *l || *r;
    return std::nullopt;
  }
  case Formula::Kind::Implies: {
    auto l = boundedEval(f->a, sigma, bound);
    auto r = boundedEval(f->b, sigma, bound);
    if (l && !*l) return true;
    if (r && *r) return true;
    if (l && r) return !*l || *r;
    return std::nullopt;
  }
  case Formula::Kind::Exists: {
    bool sawUnknown = false;
    auto saved = sigma.find(f->var) != sigma.end() ? std::optional<Int>(sigma[f->var]) : std::nullopt;
    for (long k = 0; k <= bound; ++k) {
      sigma[f->var] = k;
      auto v = boundedEval(f->a, sigma, bound);
      if (v && *v) {
        if (saved) sigma[f->var] = *saved; else sigma.erase(f->var);
        return true; // witness found
      }
      if (!v) sawUnknown = true;
    }
    if (saved) sigma[f->var] = *saved; else sigma.erase(f->var);
    (void)sawUnknown;
    return std::nullopt; // no witness below the bound proves nothing
  }
  case Formula::Kind::Forall: {
    auto saved = sigma.find(f->var) != sigma.end() ? std::optional<Int>(sigma[f->var]) : std::nullopt;
    for (long k = 0; k <= bound; ++k) {
      sigma[f->var] = k;
      auto v = boundedEval(f->a, sigma, bound);
      if (v && !*v) {
        if (saved) sigma[f->var] = *saved; else sigma.erase(f->var);
        return false; // counterexample found
      }
    }
    if (saved) sigma[f->var] = *saved; else sigma.erase(f->var);
    return std::nullopt;
  }
  }
  return std::nullopt;
}

} // namespace pbtest
