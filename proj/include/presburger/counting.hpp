#pragma once

#include <optional>
#include <vector>

#include "presburger/budget.hpp"
#include "presburger/diophantine.hpp"
#include "presburger/polynomial.hpp"
#include "presburger/semilinear.hpp"

namespace presburger {

// phi_A(u) = |{ lambda in N^n : A lambda = u }| for an integer d x n matrix.
struct CountingInstance {
  Mat A;
  Vec u;

  static CountingInstance make(Mat A, Vec u); // shape check
  std::size_t rows() const { return A.size(); }
  std::size_t cols() const { return A.empty() ? 0 : A[0].size(); }
};

struct CountResult {
  bool finite = true;
  Int count = 0; // meaningful only when finite
};

// Exact count. Infinite iff some solution exists and the homogeneous system
// has a nonzero natural solution (decided as a Presburger sentence).
CountResult countSolutions(const CountingInstance& inst, const Limits& limits = {});

// One congruence-class/chamber piece of the counting function: the sample
// region it covers and the exact polynomial on it. Guards are half-plane
// conditions a.u + c >= 0 cutting the chamber out of the residue class.
struct PieceGuard {
  Vec a;
  Int c;
};

struct PiecewisePiece {
  Lattice region;                 // over Z^d (natValued = false)
  std::vector<PieceGuard> guards; // all must hold for the piece to apply
  Polynomial poly;                // in d variables
};

struct PiecewisePolynomial {
  std::size_t dim = 0; // d
  std::vector<PiecewisePiece> pieces;
  std::size_t declaredDegree = 0;
};

// Exact interpolation of phi_A on the given samples, partitioned by residue
// class (mod lcm of the entries of A) and refined until every piece fits a
// polynomial of degree <= n - rank(A) exactly. Throws DomainError when a
// sample has infinite count or no exact fit exists within the piece budget.
PiecewisePolynomial fitPiecewise(const Mat& A, const std::vector<Vec>& samples,
                                 const Limits& limits = {});

// Every piece obeys degree <= n - rank(A), rank computed over Q.
bool verifyDegreeBound(const Mat& A, const PiecewisePolynomial& pp);

// The piece covering u, if any.
const PiecewisePiece* pieceFor(const PiecewisePolynomial& pp, const Vec& u);

// Value of the fitted function at u; throws DomainError off every piece.
Rat evalPiecewise(const PiecewisePolynomial& pp, const Vec& u);

std::size_t matrixRank(const Mat& A);

} // namespace presburger
