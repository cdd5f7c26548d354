#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace presburger {

using Int = mpz_class;

struct Term;
using TermPtr = std::shared_ptr<const Term>;

// Terms of the language {+, numerals, scalar multiples} over variables.
// Numerals and coefficients are non-negative; values live in N.
struct Term {
  enum class Kind { Var, Num, Sum, Mul };

  Kind kind;
  std::string name; // Var
  Int value;        // Num value, or Mul coefficient (>= 0)
  TermPtr lhs, rhs; // Sum children; Mul operand in lhs

  static TermPtr var(std::string name);
  static TermPtr num(Int value);
  static TermPtr sum(TermPtr l, TermPtr r);
  static TermPtr mul(Int coeff, TermPtr operand);
};

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge, Cong };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Atom, Not, And, Or, Implies, Exists, Forall };

  Kind kind;
  // Atom
  Rel rel = Rel::Eq;
  Int modulus; // Cong only, >= 1
  TermPtr tl, tr;
  // Connectives / quantifiers
  FormulaPtr a, b;
  std::string var;

  static FormulaPtr atom(Rel rel, TermPtr l, TermPtr r);
  static FormulaPtr cong(TermPtr l, TermPtr r, Int modulus);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr disj(FormulaPtr l, FormulaPtr r);
  static FormulaPtr implies(FormulaPtr l, FormulaPtr r);
  static FormulaPtr exists(std::string var, FormulaPtr body);
  static FormulaPtr forall(std::string var, FormulaPtr body);

  static FormulaPtr top();    // "0 = 0"
  static FormulaPtr bottom(); // "0 < 0"
};

// Total map from variable names to values in N.
using Assignment = std::map<std::string, Int>;

FormulaPtr parse(const std::string& text);
std::string print(const TermPtr& t);
std::string print(const FormulaPtr& f);

// Standard satisfaction over N. Requires a quantifier-free formula and an
// assignment total on its free variables.
bool evaluate(const FormulaPtr& f, const Assignment& sigma);

// Capture-avoiding substitution of a numeral for every free occurrence.
FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Int& value);

// Rename free occurrences of a variable; throws if the new name would be
// captured by a binder.
FormulaPtr renameVar(const FormulaPtr& f, const std::string& from, const std::string& to);

std::set<std::string> freeVars(const FormulaPtr& f);
bool isQuantifierFree(const FormulaPtr& f);
bool structuralEq(const FormulaPtr& x, const FormulaPtr& y);
bool structuralEq(const TermPtr& x, const TermPtr& y);

// Convenience builders for formula synthesis.
FormulaPtr conjoinAll(const std::vector<FormulaPtr>& fs); // empty -> top
FormulaPtr disjoinAll(const std::vector<FormulaPtr>& fs); // empty -> bottom

} // namespace presburger
