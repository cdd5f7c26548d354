#pragma once

#include <string>
#include <vector>

#include "presburger/budget.hpp"
#include "presburger/diophantine.hpp"
#include "presburger/formula.hpp"

namespace presburger {

// Linear set c + N p1 + ... + N pk. When natValued, the base and each
// base+period are checked componentwise nonnegative on construction.
struct Lattice {
  std::size_t arity = 0;
  Vec base;
  std::vector<Vec> periods;
  bool natValued = true;

  static Lattice make(Vec base, std::vector<Vec> periods, bool natValued = true);
  // periods linearly independent over Q
  bool fundamental() const;
};

bool member(const Lattice& L, const Vec& v);

struct SemilinearSet {
  std::size_t arity = 0;
  std::vector<Lattice> lattices;
};

// Ito normal form: pairwise disjoint lattices with independent periods.
struct DisjointFundamentalDecomposition {
  std::size_t arity = 0;
  std::vector<Lattice> pieces;
};

// Exact semilinear representation of the quantifier-free formula's solution
// set in N^|vars|.
SemilinearSet fromFormula(const FormulaPtr& phi, const std::vector<std::string>& vars,
                          const Limits& limits = {});

DisjointFundamentalDecomposition itoDecompose(const SemilinearSet& S,
                                              const Limits& limits = {});

// Max period count over pieces; 0 for the empty decomposition (see isEmpty).
std::size_t dimension(const DisjointFundamentalDecomposition& D);
bool isEmpty(const DisjointFundamentalDecomposition& D);

// Members of S inside [0, bound]^m, lexicographically sorted, deduplicated.
std::vector<Vec> enumerate(const SemilinearSet& S, long bound);

bool isFinite(const SemilinearSet& S, const Limits& limits = {});

// Rational rank of a list of integer vectors.
std::size_t rankOf(const std::vector<Vec>& vecs);

} // namespace presburger
