#include "presburger/polynomial.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "presburger/errors.hpp"

namespace presburger {

Polynomial Polynomial::zero(std::size_t nvars) {
  Polynomial p;
  p.nvars = nvars;
  return p;
}

Polynomial Polynomial::constant(std::size_t nvars, Rat c) {
  Polynomial p = zero(nvars);
  if (c != 0) p.coef[std::vector<unsigned>(nvars, 0)] = std::move(c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i) {
  if (i >= nvars) throw DomainError("variable index out of range");
  Polynomial p = zero(nvars);
  std::vector<unsigned> e(nvars, 0);
  e[i] = 1;
  p.coef[std::move(e)] = 1;
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (nvars != o.nvars) throw DomainError("polynomial arity mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.coef) {
    Rat& slot = r.coef[e];
    slot += c;
    if (slot == 0) r.coef.erase(e);
  }
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  if (nvars != o.nvars) throw DomainError("polynomial arity mismatch");
  Polynomial r = *this;
  for (const auto& [e, c] : o.coef) {
    Rat& slot = r.coef[e];
    slot -= c;
    if (slot == 0) r.coef.erase(e);
  }
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (nvars != o.nvars) throw DomainError("polynomial arity mismatch");
  Polynomial r = zero(nvars);
  for (const auto& [e1, c1] : coef)
    for (const auto& [e2, c2] : o.coef) {
      std::vector<unsigned> e(nvars);
      for (std::size_t i = 0; i < nvars; ++i) e[i] = e1[i] + e2[i];
      Rat& slot = r.coef[e];
      slot += c1 * c2;
      if (slot == 0) r.coef.erase(e);
    }
  return r;
}

Rat Polynomial::eval(const std::vector<Rat>& x) const {
  if (x.size() != nvars) throw DomainError("polynomial arity mismatch");
  Rat acc = 0;
  for (const auto& [e, c] : coef) {
    Rat term = c;
    for (std::size_t i = 0; i < nvars; ++i)
      for (unsigned k = 0; k < e[i]; ++k) term *= x[i];
    acc += term;
  }
  return acc;
}

std::size_t Polynomial::totalDegree() const {
  std::size_t d = 0;
  for (const auto& [e, c] : coef) {
    std::size_t t = 0;
    for (unsigned k : e) t += k;
    d = std::max(d, t);
  }
  return d;
}

std::string Polynomial::str() const {
  if (coef.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest-degree monomials first reads more naturally
  std::vector<std::pair<std::vector<unsigned>, Rat>> terms(coef.begin(), coef.end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    unsigned da = 0, db = 0;
    for (unsigned k : a.first) da += k;
    for (unsigned k : b.first) db += k;
    return da > db;
  });
  for (const auto& [e, c] : terms) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    Rat a = abs(c);
    bool unitCoef = a == 1;
    bool constTerm = true;
    for (unsigned k : e) constTerm = constTerm && k == 0;
    if (!unitCoef || constTerm) os << a.get_str();
    bool needStar = !unitCoef;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (needStar) os << "*";
      needStar = true;
      os << "u" << i + 1;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

bool solveLinear(std::vector<std::vector<Rat>> M, std::vector<Rat> rhs,
                 std::vector<Rat>& out) {
  std::size_t rows = M.size();
  std::size_t cols = rows ? M[0].size() : 0;
  std::vector<std::size_t> pivotCol;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    std::swap(rhs[p], rhs[r]);
    Rat inv = 1 / M[r][c];
    for (std::size_t j = c; j < cols; ++j) M[r][j] *= inv;
    rhs[r] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rat f = M[i][c];
      for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivotCol.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return false;
  out.assign(cols, Rat(0));
  for (std::size_t i = 0; i < pivotCol.size(); ++i) out[pivotCol[i]] = rhs[i];
  return true;
}

std::size_t ratRank(std::vector<std::vector<Rat>> M) {
  std::size_t rows = M.size();
  std::size_t cols = rows ? M[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (M[i][c] == 0) continue;
      Rat f = M[i][c] / M[r][c];
      for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
    }
    ++r;
  }
  return r;
}

std::vector<std::vector<unsigned>> monomialsUpTo(std::size_t nvars, std::size_t deg) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur(nvars, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i == nvars) {
      out.push_back(cur);
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      cur[i] = k;
      rec(i + 1, left - k);
    }
    cur[i] = 0;
  };
  rec(0, static_cast<unsigned>(deg));
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    unsigned da = 0, db = 0;
    for (unsigned k : a) da += k;
    for (unsigned k : b) db += k;
    return da < db;
  });
  return out;
}

} // namespace presburger
