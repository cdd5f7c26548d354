#include "presburger/counting.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "presburger/errors.hpp"
#include "presburger/qelim.hpp"

namespace presburger {

namespace {

std::string lv(std::size_t j) { return "l" + std::to_string(j + 1); }

// One row of A lambda = u as an atom with all coefficients moved to the
// non-negative side.
FormulaPtr rowEquation(const Vec& row, const Int& ui) {
  std::vector<TermPtr> lhs, rhs;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] > 0) lhs.push_back(Term::mul(row[j], Term::var(lv(j))));
    else if (row[j] < 0) rhs.push_back(Term::mul(-row[j], Term::var(lv(j))));
  }
  (ui >= 0 ? rhs : lhs).push_back(Term::num(ui >= 0 ? ui : -ui));
  auto fold = [](std::vector<TermPtr>& ts) {
    if (ts.empty()) return Term::num(0);
    TermPtr acc = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i) acc = Term::sum(acc, ts[i]);
    return acc;
  };
  return Formula::atom(Rel::Eq, fold(lhs), fold(rhs));
}

FormulaPtr existsAll(std::size_t n, FormulaPtr body) {
  for (std::size_t j = n; j-- > 0;) body = Formula::exists(lv(j), std::move(body));
  return body;
}

} // namespace

CountingInstance CountingInstance::make(Mat A, Vec u) {
  if (A.empty() || A[0].empty()) throw DomainError("counting: empty matrix");
  for (const auto& row : A)
    if (row.size() != A[0].size()) throw DomainError("counting: ragged matrix");
  if (u.size() != A.size()) throw DomainError("counting: u length != row count");
  return {std::move(A), std::move(u)};
}

CountResult countSolutions(const CountingInstance& inst, const Limits& limits) {
  std::size_t d = inst.rows(), n = inst.cols();
  QelimOptions qo;
  qo.nodeBudget = limits.nodes;

  std::vector<FormulaPtr> rows;
  for (std::size_t i = 0; i < d; ++i) rows.push_back(rowEquation(inst.A[i], inst.u[i]));
  bool solvable = decide(existsAll(n, conjoinAll(rows)), qo);
  if (!solvable) return {true, 0};

  std::vector<FormulaPtr> hom;
  for (std::size_t i = 0; i < d; ++i) hom.push_back(rowEquation(inst.A[i], 0));
  TermPtr sum = Term::var(lv(0));
  for (std::size_t j = 1; j < n; ++j) sum = Term::sum(sum, Term::var(lv(j)));
  hom.push_back(Formula::atom(Rel::Ge, sum, Term::num(1)));
  if (decide(existsAll(n, conjoinAll(hom)), qo)) return {false, 0};

  // trivial homogeneous kernel: the minimal solutions are all of them
  DiophSolutions sols = solveSystem(inst.A, inst.u);
  chargeBudget(static_cast<std::int64_t>(sols.minimal.size()));
  return {true, Int(sols.minimal.size())};
}

namespace {

Int entryLcm(const Mat& A) {
  Int m = 1;
  for (const auto& row : A)
    for (const Int& a : row)
      if (a != 0) m = lcm(m, abs(a));
  return m;
}

struct Group {
  std::vector<Vec> samples;
  std::vector<Int> counts;
  std::vector<PieceGuard> guards;
};

// Half-plane guards for the chamber containing u: sign of every coordinate
// and of every pairwise difference.
std::vector<PieceGuard> chamberGuards(const Vec& u) {
  std::size_t d = u.size();
  std::vector<PieceGuard> gs;
  for (std::size_t i = 0; i < d; ++i) {
    PieceGuard g{Vec(d, 0), 0};
    g.a[i] = u[i] >= 0 ? 1 : -1;
    g.c = u[i] >= 0 ? 0 : -1;
    gs.push_back(std::move(g));
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      bool ge = u[i] >= u[j];
      PieceGuard g{Vec(d, 0), ge ? 0 : -1};
      g.a[i] = ge ? 1 : -1;
      g.a[j] = ge ? -1 : 1;
      gs.push_back(std::move(g));
    }
  return gs;
}

bool holds(const PieceGuard& g, const Vec& u) {
  Int acc = g.c;
  for (std::size_t i = 0; i < u.size(); ++i) acc += g.a[i] * u[i];
  return acc >= 0;
}

bool fitGroup(const Group& g, std::size_t d, std::size_t deg, Polynomial& out) {
  auto mons = monomialsUpTo(d, deg);
  std::vector<std::vector<Rat>> M;
  std::vector<Rat> rhs;
  for (std::size_t s = 0; s < g.samples.size(); ++s) {
    std::vector<Rat> row;
    for (const auto& e : mons) {
      Rat v = 1;
      for (std::size_t i = 0; i < d; ++i)
        for (unsigned k = 0; k < e[i]; ++k) v *= Rat(g.samples[s][i]);
      row.push_back(std::move(v));
    }
    M.push_back(std::move(row));
    rhs.push_back(Rat(g.counts[s]));
  }
  std::vector<Rat> c;
  if (!solveLinear(std::move(M), std::move(rhs), c)) return false;
  out = Polynomial::zero(d);
  for (std::size_t i = 0; i < mons.size(); ++i)
    if (c[i] != 0) out.coef[mons[i]] = c[i];
  return true;
}

PiecewisePiece makePiece(const Group& g, std::size_t d, const Int& M, Polynomial poly) {
  Vec base = g.samples[0];
  for (const auto& s : g.samples)
    for (std::size_t i = 0; i < d; ++i) base[i] = std::min(base[i], s[i]);
  std::vector<Vec> periods;
  for (std::size_t i = 0; i < d; ++i) {
    bool spread = false;
    for (const auto& s : g.samples) spread = spread || s[i] != base[i];
    if (!spread) continue;
    Vec p(d, 0);
    p[i] = M;
    periods.push_back(std::move(p));
  }
  PiecewisePiece piece;
  piece.region = Lattice::make(std::move(base), std::move(periods), false);
  piece.guards = g.guards;
  piece.poly = std::move(poly);
  return piece;
}

} // namespace

PiecewisePolynomial fitPiecewise(const Mat& A, const std::vector<Vec>& samples,
                                 const Limits& limits) {
  if (A.empty() || A[0].empty()) throw DomainError("counting: empty matrix");
  std::size_t d = A.size(), n = A[0].size();
  std::size_t rk = matrixRank(A);
  std::size_t deg = n > rk ? n - rk : 0;
  Int M = entryLcm(A);

  // residue class of u mod M, refined by the chamber sign pattern
  std::map<std::string, Group> groups;
  for (const auto& u : samples) {
    if (u.size() != d) throw DomainError("counting: sample length != row count");
    CountResult r = countSolutions(CountingInstance::make(A, u), limits);
    if (!r.finite) throw DomainError("counting: infinite count at a sample");
    std::string key;
    for (const Int& ui : u) key += Int((ui % M + M) % M).get_str() + ",";
    std::vector<PieceGuard> gs = chamberGuards(u);
    for (const auto& g : gs) {
      for (const Int& a : g.a) key += a.get_str() + ".";
      key += ";";
    }
    Group& g = groups[key];
    if (g.samples.empty()) g.guards = std::move(gs);
    g.samples.push_back(u);
    g.counts.push_back(r.count);
  }

  PiecewisePolynomial pp;
  pp.dim = d;
  std::vector<Group> work;
  for (auto& [k, g] : groups) work.push_back(std::move(g));
  while (!work.empty()) {
    if (static_cast<std::int64_t>(pp.pieces.size() + work.size()) > limits.pieces)
      throw BudgetError("piece budget exceeded");
    Group g = std::move(work.back());
    work.pop_back();
    Polynomial poly = Polynomial::zero(d);
    if (fitGroup(g, d, deg, poly)) {
      pp.pieces.push_back(makePiece(g, d, M, std::move(poly)));
      continue;
    }
    // no exact fit within the degree bound: split along the widest
    // coordinate and retry each half
    std::size_t axis = 0;
    Int bestSpread = -1;
    for (std::size_t i = 0; i < d; ++i) {
      Int lo = g.samples[0][i], hi = g.samples[0][i];
      for (const auto& s : g.samples) {
        lo = std::min(lo, s[i]);
        hi = std::max(hi, s[i]);
      }
      if (hi - lo > bestSpread) {
        bestSpread = hi - lo;
        axis = i;
      }
    }
    if (bestSpread <= 0)
      throw DomainError("counting: exact fit impossible within the degree bound");
    Int lo = g.samples[0][axis], hi = g.samples[0][axis];
    for (const auto& s : g.samples) {
      lo = std::min(lo, s[axis]);
      hi = std::max(hi, s[axis]);
    }
    Int mid = lo + (hi - lo) / 2;
    Group low, high;
    low.guards = g.guards;
    high.guards = g.guards;
    PieceGuard below{Vec(d, 0), mid};
    below.a[axis] = -1;
    PieceGuard above{Vec(d, 0), -(mid + 1)};
    above.a[axis] = 1;
    low.guards.push_back(std::move(below));
    high.guards.push_back(std::move(above));
    for (std::size_t s = 0; s < g.samples.size(); ++s) {
      Group& dst = g.samples[s][axis] <= mid ? low : high;
      dst.samples.push_back(g.samples[s]);
      dst.counts.push_back(g.counts[s]);
    }
    work.push_back(std::move(low));
    work.push_back(std::move(high));
  }
  for (const auto& p : pp.pieces)
    pp.declaredDegree = std::max(pp.declaredDegree, p.poly.totalDegree());
  return pp;
}

bool verifyDegreeBound(const Mat& A, const PiecewisePolynomial& pp) {
  std::size_t n = A.empty() ? 0 : A[0].size();
  std::size_t rk = matrixRank(A);
  std::size_t bound = n > rk ? n - rk : 0;
  for (const auto& p : pp.pieces)
    if (p.poly.totalDegree() > bound) return false;
  return true;
}

const PiecewisePiece* pieceFor(const PiecewisePolynomial& pp, const Vec& u) {
  auto inLattice = [&](const Lattice& L) {
    if (L.arity != u.size()) return false;
    // base + N-combinations of the axis periods: componentwise residue and
    // direction check
    Vec rem = u;
    for (std::size_t i = 0; i < u.size(); ++i) rem[i] -= L.base[i];
    std::vector<bool> covered(u.size(), false);
    for (const auto& p : L.periods)
      for (std::size_t i = 0; i < u.size(); ++i)
        if (p[i] != 0) {
          if (rem[i] < 0 || rem[i] % p[i] != 0) return false;
          covered[i] = true;
        }
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!covered[i] && rem[i] != 0) return false;
    return true;
  };
  for (const auto& p : pp.pieces) {
    if (!inLattice(p.region)) continue;
    bool ok = true;
    for (const auto& g : p.guards) ok = ok && holds(g, u);
    if (ok) return &p;
  }
  return nullptr;
}

Rat evalPiecewise(const PiecewisePolynomial& pp, const Vec& u) {
  const PiecewisePiece* p = pieceFor(pp, u);
  if (!p) throw DomainError("counting: point not covered by any piece");
  std::vector<Rat> x;
  x.reserve(u.size());
  for (const Int& ui : u) x.emplace_back(ui);
  return p->poly.eval(x);
}

std::size_t matrixRank(const Mat& A) {
  std::vector<std::vector<Rat>> M;
  for (const auto& row : A) {
    std::vector<Rat> r;
    for (const Int& a : row) r.emplace_back(a);
    M.push_back(std::move(r));
  }
  return ratRank(std::move(M));
}

} // namespace presburger
