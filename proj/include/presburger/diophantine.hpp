#pragma once

#include <vector>

#include "presburger/formula.hpp"

namespace presburger {

using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;

// Minimal solutions of A y = b over the naturals, plus the Hilbert basis of
// the associated homogeneous system A y = 0. Every solution of A y = b is a
// minimal solution plus a natural combination of basis elements. When the
// solution set is bounded, `basis` is empty and `minimal` lists every
// solution.
struct DiophSolutions {
  std::vector<Vec> minimal;
  std::vector<Vec> basis;
};

DiophSolutions solveSystem(const Mat& A, const Vec& b);

// Hilbert basis of A y = 0 over the naturals (nonzero minimal solutions).
std::vector<Vec> hilbertBasis(const Mat& A);

} // namespace presburger
