#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

namespace presburger {

using Rat = mpq_class;

// Multivariate polynomial over Q, sparse monomial map keyed by exponent
// vectors of fixed length nvars.
struct Polynomial {
  std::size_t nvars = 0;
  std::map<std::vector<unsigned>, Rat> coef; // nonzero coefficients only

  static Polynomial zero(std::size_t nvars);
  static Polynomial constant(std::size_t nvars, Rat c);
  static Polynomial variable(std::size_t nvars, std::size_t i);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;

  Rat eval(const std::vector<Rat>& x) const;
  std::size_t totalDegree() const; // 0 for the zero polynomial
  bool isZero() const { return coef.empty(); }

  // "1/2*u1^2 + 3/2*u1 + 1" with variables u1..u<nvars>
  std::string str() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

// Gaussian elimination over Q for M x = rhs; free variables are set to 0.
// Returns false when the system is inconsistent.
bool solveLinear(std::vector<std::vector<Rat>> M, std::vector<Rat> rhs,
                 std::vector<Rat>& out);

std::size_t ratRank(std::vector<std::vector<Rat>> M);

// All exponent vectors over `nvars` variables with total degree <= deg,
// graded lexicographic order.
std::vector<std::vector<unsigned>> monomialsUpTo(std::size_t nvars, std::size_t deg);

} // namespace presburger
