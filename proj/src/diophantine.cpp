// Contejean-Devie breadth-first search for minimal natural solutions of
// linear Diophantine systems. The inhomogeneous case is homogenized with an
// extra unknown multiplying -b; minimal solutions with that unknown equal to
// 1 are the minimal particular solutions, those with 0 form the Hilbert
// basis, and nodes where it exceeds 1 can never lead back down, so they are
// pruned.

#include "presburger/diophantine.hpp"

#include <map>

#include "presburger/budget.hpp"

namespace presburger {

namespace {

bool dominates(const Vec& small, const Vec& big) {
  for (std::size_t i = 0; i < small.size(); ++i)
    if (small[i] > big[i]) return false;
  return true;
}

bool isZero(const Vec& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

// All minimal nonzero solutions of A y = 0 over N, with component `zCol`
// (if >= 0) capped at 1.
std::vector<Vec> minimalHomogeneous(const Mat& A, int zCol) {
  std::size_t rows = A.size();
  std::size_t n = rows == 0 ? 0 : A[0].size();
  std::vector<Vec> found;
  if (n == 0) return found;

  // columns[i] = A e_i
  std::vector<Vec> columns(n, Vec(rows));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t i = 0; i < n; ++i) columns[i][r] = A[r][i];

  // frontier maps candidate y to its value A y
  std::map<Vec, Vec> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n, 0);
    e[i] = 1;
    frontier.emplace(std::move(e), columns[i]);
  }

  while (!frontier.empty()) {
    std::map<Vec, Vec> next;
    for (const auto& [t, v] : frontier) {
      if (isZero(v)) {
        bool dominated = false;
        for (const auto& m : found)
          if (dominates(m, t)) {
            dominated = true;
            break;
          }
        if (!dominated) found.push_back(t);
        continue;
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (zCol >= 0 && i == static_cast<std::size_t>(zCol) &&
            t[i] >= 1)
          continue;
        Int dot = 0;
        for (std::size_t r = 0; r < rows; ++r) dot += v[r] * columns[i][r];
        if (dot >= 0) continue; // Fortenbacher: only step toward zero
        Vec t2 = t;
        t2[i] += 1;
        bool dominated = false;
        for (const auto& m : found)
          if (dominates(m, t2)) {
            dominated = true;
            break;
          }
        if (dominated || next.count(t2)) continue;
        chargeBudget(1);
        Vec v2 = v;
        for (std::size_t r = 0; r < rows; ++r) v2[r] += columns[i][r];
        next.emplace(std::move(t2), std::move(v2));
      }
    }
    frontier = std::move(next);
  }
  return found;
}

} // namespace

std::vector<Vec> hilbertBasis(const Mat& A) { return minimalHomogeneous(A, -1); }

DiophSolutions solveSystem(const Mat& A, const Vec& b) {
  std::size_t rows = A.size();
  std::size_t n = rows == 0 ? 0 : A[0].size();
  DiophSolutions out;
  if (rows == 0) {
    // no constraints: minimal solution is 0, basis is the unit vectors
    out.minimal.push_back(Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      Vec e(n, 0);
      e[i] = 1;
      out.basis.push_back(std::move(e));
    }
    return out;
  }

  Mat H(rows, Vec(n + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < n; ++i) H[r][i] = A[r][i];
    H[r][n] = -b[r];
  }
  for (const auto& sol : minimalHomogeneous(H, static_cast<int>(n))) {
    Vec head(sol.begin(), sol.begin() + static_cast<long>(n));
    if (sol[n] == 0)
      out.basis.push_back(std::move(head));
    else
      out.minimal.push_back(std::move(head));
  }
  return out;
}

} // namespace presburger
