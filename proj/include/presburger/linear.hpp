#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "presburger/formula.hpp"

namespace presburger {

// Linear term c + sum(coef[v] * v) with integer coefficients.
struct LinTerm {
  Int c;
  std::map<std::string, Int> coef;

  LinTerm() : c(0) {}
  explicit LinTerm(Int k) : c(std::move(k)) {}
  static LinTerm variable(const std::string& v) {
    LinTerm t;
    t.coef[v] = 1;
    return t;
  }

  bool isConst() const { return coef.empty(); }
  Int coeffOf(const std::string& v) const {
    auto it = coef.find(v);
    return it == coef.end() ? Int(0) : it->second;
  }

  LinTerm& operator+=(const LinTerm& o);
  LinTerm& operator-=(const LinTerm& o);
  LinTerm& operator*=(const Int& k);
  friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
  friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
  friend LinTerm operator*(LinTerm a, const Int& k) { return a *= k; }
  friend bool operator==(const LinTerm&, const LinTerm&) = default;

  LinTerm substituted(const std::string& v, const LinTerm& by) const;
  Int eval(const Assignment& sigma) const; // throws on missing variable

  void normalize(); // drop zero coefficients
  std::string key() const; // canonical string, for hashing/dedup
};

// Quantifier-free formulas in negation normal form. Atoms:
//   Eq:   t = 0
//   Le:   t <= 0
//   Dvd:  mod | t        (mod >= 1)
//   Ndvd: not (mod | t)
struct Qf;
using QfPtr = std::shared_ptr<const Qf>;

struct Qf {
  enum class Kind { True, False, Atom, And, Or };
  enum class AtomKind { Eq, Le, Dvd, Ndvd };

  Kind kind;
  AtomKind atom = AtomKind::Eq;
  Int mod;
  LinTerm t;
  std::vector<QfPtr> kids;

  static QfPtr mkTrue();
  static QfPtr mkFalse();
  static QfPtr mkBool(bool b) { return b ? mkTrue() : mkFalse(); }
  // Atoms are normalized on construction (gcd division, ground folding).
  static QfPtr eq(LinTerm t);
  static QfPtr le(LinTerm t);
  static QfPtr dvd(Int mod, LinTerm t);
  static QfPtr ndvd(Int mod, LinTerm t);
  static QfPtr conj(std::vector<QfPtr> kids); // flattens, folds constants
  static QfPtr disj(std::vector<QfPtr> kids);

  std::string key() const;
};

QfPtr negateNNF(const QfPtr& f);
QfPtr substituteQf(const QfPtr& f, const std::string& v, const LinTerm& by);
bool evalQf(const QfPtr& f, const Assignment& sigma);
void collectVars(const QfPtr& f, std::set<std::string>& out);
std::int64_t countNodes(const QfPtr& f);

// Local equivalence-preserving cleanup: bound tightening, equality
// substitution, duplicate and subsumed-disjunct removal.
QfPtr simplifyQf(const QfPtr& f);

// Split on the residues of every variable carrying congruence atoms and
// rewrite each branch under its fixed residues; congruence-guarded clauses
// collapse branch by branch. Keeps the input when the split does not shrink
// the formula or would need more than 128 branches.
QfPtr caseSplitResidues(const QfPtr& f);

// Fold atoms decided by variable signs over N (e.g. x + 3 <= 0 is false,
// -x <= 0 is true). Only sound when every variable in f ranges over N; in
// particular not during a Cooper step, which keeps the active variable in Z
// behind an explicit guard atom.
QfPtr foldNatSigns(const QfPtr& f);

// Disjunctive normal form as a list of atom lists (True -> one empty
// conjunct; False -> no conjuncts).
std::vector<std::vector<QfPtr>> toDNF(const QfPtr& f);

// Expand Ndvd atoms into disjunctions of Dvd residue cases.
QfPtr expandNdvd(const QfPtr& f);

// Surface bridge. toSurface emits only {=, <=, == mod n} atoms plus the
// boolean structure; all coefficients are moved to whichever side keeps
// them non-negative.
QfPtr atomToQf(const Formula& atom); // the positive sense of one surface atom
FormulaPtr toSurface(const QfPtr& f);

} // namespace presburger
