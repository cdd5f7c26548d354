// Semilinear sets over N^m: conversion from quantifier-free formulas via
// residue splitting plus minimal-solution enumeration, and Ito's disjoint
// fundamental normal form via a recursive fiber decomposition along
// recession directions.

#include "presburger/semilinear.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include <gmpxx.h>

#include "presburger/linear.hpp"
#include "presburger/qelim.hpp"

namespace presburger {

namespace {

using Rat = mpq_class;

Int lcmInt(const Int& a, const Int& b) {
  Int g, l;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  l = a / g * b;
  return l < 0 ? Int(-l) : l;
}

bool isZeroVec(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

// Conjunction of linear constraints over y in N^n.
struct LinSys {
  std::size_t n = 0;
  Mat eqA;
  Vec eqB; // eqA y = eqB
  Mat leA;
  Vec leB; // leA y <= leB
};

Int dot(const Vec& a, const Vec& b) {
  Int acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Int floorDiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceilDivInt(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Normalize, deduplicate, and bound-propagate a constraint system over N^n.
// Returns false when the system is infeasible. Dropped rows are implied by
// the remaining ones on the solution set, so the set (and with it its
// recession directions) is unchanged.
bool preprocess(LinSys& sys) {
  std::size_t n = sys.n;
  Vec lo(n, 0);
  std::vector<std::optional<Int>> hi(n);

  // row gcd normalization; all-zero rows folded away
  auto normEq = [&](Vec& a, Int& b) -> std::optional<bool> {
    Int g = 0;
    for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return b == 0; // constant row: verdict
    if (!mpz_divisible_p(b.get_mpz_t(), g.get_mpz_t())) return false;
    for (auto& x : a) x /= g;
    b /= g;
    return std::nullopt; // keep
  };
  auto normLe = [&](Vec& a, Int& b) -> std::optional<bool> {
    Int g = 0;
    for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return b >= 0;
    for (auto& x : a) x /= g;
    b = floorDiv(b, g);
    return std::nullopt;
  };

  {
    Mat eqA;
    Vec eqB;
    std::set<std::pair<Vec, Int>> seenEq;
    for (std::size_t r = 0; r < sys.eqA.size(); ++r) {
      Vec a = sys.eqA[r];
      Int b = sys.eqB[r];
      auto verdict = normEq(a, b);
      if (verdict.has_value()) {
        if (!*verdict) return false;
        continue;
      }
      if (!seenEq.insert({a, b}).second) continue;
      eqA.push_back(std::move(a));
      eqB.push_back(std::move(b));
    }
    sys.eqA = std::move(eqA);
    sys.eqB = std::move(eqB);

    std::map<Vec, Int> tightest; // lhs -> smallest rhs
    for (std::size_t r = 0; r < sys.leA.size(); ++r) {
      Vec a = sys.leA[r];
      Int b = sys.leB[r];
      auto verdict = normLe(a, b);
      if (verdict.has_value()) {
        if (!*verdict) return false;
        continue;
      }
      auto [it, fresh] = tightest.emplace(std::move(a), b);
      if (!fresh && b < it->second) it->second = b;
    }
    sys.leA.clear();
    sys.leB.clear();
    for (auto& [a, b] : tightest) {
      sys.leA.push_back(a);
      sys.leB.push_back(b);
    }
  }

  // interval propagation: every row (equalities as two inequalities)
  // tightens per-variable bounds
  struct Row {
    const Vec* a;
    Int b;
    int sign; // +1: a.y <= b, -1: -a.y <= -b
  };
  std::vector<Row> rows;
  for (std::size_t r = 0; r < sys.leA.size(); ++r)
    rows.push_back({&sys.leA[r], sys.leB[r], +1});
  for (std::size_t r = 0; r < sys.eqA.size(); ++r) {
    rows.push_back({&sys.eqA[r], sys.eqB[r], +1});
    rows.push_back({&sys.eqA[r], sys.eqB[r], -1});
  }
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    for (const Row& row : rows) {
      // minimum of each term given current bounds; unbounded terms noted
      Int minSum = 0;
      int unboundedTerms = 0;
      std::size_t unboundedVar = 0;
      for (std::size_t i = 0; i < n; ++i) {
        Int c = (*row.a)[i] * row.sign;
        if (c == 0) continue;
        if (c > 0) {
          minSum += c * lo[i];
        } else if (hi[i]) {
          minSum += c * *hi[i];
        } else {
          ++unboundedTerms;
          unboundedVar = i;
          if (unboundedTerms > 1) break;
        }
      }
      Int b = row.b * row.sign;
      if (unboundedTerms > 1) continue;
      if (unboundedTerms == 1) {
        // only the unbounded negative term can be constrained: it needs
        // c*y_i <= b - minSum, i.e. y_i >= ceil((minSum - b) / -c)
        Int c = (*row.a)[unboundedVar] * row.sign;
        Int newLo = ceilDivInt(minSum - b, -c);
        if (newLo > lo[unboundedVar]) {
          lo[unboundedVar] = newLo;
          changed = true;
        }
        continue;
      }
      if (minSum > b) return false;
      for (std::size_t i = 0; i < n; ++i) {
        Int c = (*row.a)[i] * row.sign;
        if (c == 0) continue;
        Int rest = minSum - (c > 0 ? c * lo[i] : c * *hi[i]);
        if (c > 0) {
          Int newHi = floorDiv(b - rest, c);
          if (newHi < lo[i]) return false;
          if (!hi[i] || newHi < *hi[i]) {
            hi[i] = newHi;
            changed = true;
          }
        } else {
          Int newLo = ceilDivInt(rest - b, -c);
          if (hi[i] && newLo > *hi[i]) return false;
          if (newLo > lo[i]) {
            lo[i] = newLo;
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }

  // materialize tightened bounds and drop rows made redundant by them
  Mat leA;
  Vec leB;
  for (std::size_t r = 0; r < sys.leA.size(); ++r) {
    bool redundant = true;
    Int maxSum = 0;
    for (std::size_t i = 0; i < n && redundant; ++i) {
      const Int& c = sys.leA[r][i];
      if (c == 0) continue;
      if (c > 0) {
        if (hi[i]) maxSum += c * *hi[i];
        else redundant = false;
      } else {
        maxSum += c * lo[i];
      }
    }
    if (redundant && maxSum <= sys.leB[r]) continue;
    leA.push_back(sys.leA[r]);
    leB.push_back(sys.leB[r]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (lo[i] > 0) {
      Vec a(n, 0);
      a[i] = -1;
      leA.push_back(std::move(a));
      leB.push_back(-lo[i]);
    }
    if (hi[i]) {
      Vec a(n, 0);
      a[i] = 1;
      leA.push_back(std::move(a));
      leB.push_back(*hi[i]);
    }
  }
  sys.leA = std::move(leA);
  sys.leB = std::move(leB);
  return true;
}

// Minimal solutions and recession generators of a constraint system,
// obtained by slack augmentation and the Diophantine solver.

DiophSolutions solveLinSys(LinSys sys) {
  if (!preprocess(sys)) return {};
  std::size_t rows = sys.eqA.size() + sys.leA.size();
  std::size_t cols = sys.n + sys.leA.size();
  Mat A(rows, Vec(cols, 0));
  Vec b(rows);
  for (std::size_t r = 0; r < sys.eqA.size(); ++r) {
    for (std::size_t i = 0; i < sys.n; ++i) A[r][i] = sys.eqA[r][i];
    b[r] = sys.eqB[r];
  }
  for (std::size_t r = 0; r < sys.leA.size(); ++r) {
    std::size_t rr = sys.eqA.size() + r;
    for (std::size_t i = 0; i < sys.n; ++i) A[rr][i] = sys.leA[r][i];
    A[rr][sys.n + r] = 1; // slack
    b[rr] = sys.leB[r];
  }
  DiophSolutions full = rows == 0 ? DiophSolutions{{Vec(cols, 0)}, {}}
                                  : solveSystem(A, b);
  // project away the slacks; heads stay distinct because slacks are
  // determined by the head
  DiophSolutions out;
  for (auto& s : full.minimal)
    out.minimal.emplace_back(s.begin(), s.begin() + static_cast<long>(sys.n));
  std::set<Vec> seen;
  for (auto& s : full.basis) {
    Vec head(s.begin(), s.begin() + static_cast<long>(sys.n));
    if (!isZeroVec(head) && seen.insert(head).second) out.basis.push_back(std::move(head));
  }
  if (rows == 0) {
    for (std::size_t i = 0; i < sys.n; ++i) {
      Vec e(sys.n, 0);
      e[i] = 1;
      out.basis.push_back(std::move(e));
    }
  }
  return out;
}

// One residue case of a conjunct: x_i = off[i] + scale[i] * y_i with the
// remaining constraints linear in y.
struct ResidueCase {
  Vec off;
  Vec scale;
  LinSys sys;
};

// Split one DNF conjunct (Eq/Le/Dvd atoms) into residue cases that are free
// of divisibility constraints. The cases partition the conjunct's solutions.
std::vector<ResidueCase> residueSplit(const std::vector<QfPtr>& atoms,
                                      const std::vector<std::string>& vars) {
  std::size_t m = vars.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index[vars[i]] = i;

  Vec scale(m, 1);
  for (const auto& a : atoms) {
    if (a->kind != Qf::Kind::Atom || a->atom != Qf::AtomKind::Dvd) continue;
    for (const auto& [v, c] : a->t.coef)
      if (c != 0) scale[index.at(v)] = lcmInt(scale[index.at(v)], a->mod);
  }

  std::vector<ResidueCase> out;
  Vec r(m, 0);
  for (;;) {
    chargeBudget();
    bool ok = true;
    LinSys sys;
    sys.n = m;
    for (const auto& a : atoms) {
      if (a->kind == Qf::Kind::True) continue;
      if (a->kind == Qf::Kind::False) {
        ok = false;
        break;
      }
      Vec row(m, 0);
      Int cst = a->t.c;
      for (const auto& [v, c] : a->t.coef) {
        std::size_t i = index.at(v);
        row[i] = c * scale[i];
        cst += c * r[i];
      }
      switch (a->atom) {
      case Qf::AtomKind::Eq:
        sys.eqA.push_back(std::move(row));
        sys.eqB.push_back(-cst);
        break;
      case Qf::AtomKind::Le:
        sys.leA.push_back(std::move(row));
        sys.leB.push_back(-cst);
        break;
      case Qf::AtomKind::Dvd:
        // row coefficients are multiples of the modulus by the lcm choice,
        // so the atom reduces to a test on the residues
        ok = ok && mpz_divisible_p(cst.get_mpz_t(), a->mod.get_mpz_t());
        break;
      case Qf::AtomKind::Ndvd:
        throw DomainError("unexpanded divisibility negation");
      }
      if (!ok) break;
    }
    if (ok) out.push_back(ResidueCase{r, scale, std::move(sys)});
    std::size_t i = 0;
    while (i < m && ++r[i] >= scale[i]) r[i++] = 0;
    if (i == m) break;
  }
  return out;
}

std::vector<std::vector<QfPtr>> conjunctsOf(const QfPtr& q) {
  return toDNF(simplifyQf(expandNdvd(q)));
}

// --- disjoint fundamental decomposition of one Dvd-free system -----------

struct RawPiece {
  Vec base;
  std::vector<Vec> periods;
};

void polyDecompose(LinSys sys, std::size_t depth, std::int64_t& pieceBudget,
                   std::vector<RawPiece>& out) {
  if (depth > sys.n + 2) throw DomainError("fiber decomposition failed to converge");
  if (!preprocess(sys)) return;
  DiophSolutions sols = solveLinSys(sys);
  if (sols.minimal.empty()) return;
  if (sols.basis.empty()) {
    // bounded: the minimal solutions are all solutions
    for (auto& s : sols.minimal) {
      if (--pieceBudget < 0) throw BudgetError("piece budget exceeded");
      out.push_back(RawPiece{std::move(s), {}});
    }
    return;
  }
  const Vec g = sols.basis.front();

  // The set splits into fibers w + N g over the bottoms w (those y in the
  // set with y - g outside it). Express the bottoms as disjoint systems via
  // the first condition that y - g violates, and recurse: g cannot recede in
  // any such system, so the new period stays independent.
  struct Check {
    bool coord;        // y_i >= g_i when coord, else row of leA shifted by g
    std::size_t idx;
  };
  std::vector<Check> checks;
  for (std::size_t i = 0; i < sys.n; ++i)
    if (g[i] > 0) checks.push_back({true, i});
  for (std::size_t rIdx = 0; rIdx < sys.leA.size(); ++rIdx)
    if (dot(sys.leA[rIdx], g) < 0) checks.push_back({false, rIdx});
  // equality rows satisfy eqA g = 0 and cannot be violated by the shift

  for (std::size_t fail = 0; fail < checks.size(); ++fail) {
    LinSys sub = sys;
    for (std::size_t pass = 0; pass < fail; ++pass) {
      const Check& ck = checks[pass];
      if (ck.coord) {
        Vec row(sys.n, 0);
        row[ck.idx] = -1;
        sub.leA.push_back(std::move(row));
        sub.leB.push_back(-g[ck.idx]);
      } else {
        sub.leA.push_back(sys.leA[ck.idx]);
        sub.leB.push_back(sys.leB[ck.idx] + dot(sys.leA[ck.idx], g));
      }
    }
    const Check& ck = checks[fail];
    if (ck.coord) {
      Vec row(sys.n, 0);
      row[ck.idx] = 1;
      sub.leA.push_back(std::move(row));
      sub.leB.push_back(g[ck.idx] - 1);
    } else {
      Vec row(sys.n);
      for (std::size_t i = 0; i < sys.n; ++i) row[i] = -sys.leA[ck.idx][i];
      sub.leA.push_back(std::move(row));
      sub.leB.push_back(-(sys.leB[ck.idx] + dot(sys.leA[ck.idx], g)) - 1);
    }

    std::vector<RawPiece> bottoms;
    polyDecompose(sub, depth + 1, pieceBudget, bottoms);
    for (auto& p : bottoms) {
      p.periods.push_back(g);
      out.push_back(std::move(p));
    }
  }
}

// Disjoint negation cases of a single atom (Eq/Le/Dvd).
std::vector<std::vector<QfPtr>> negCases(const QfPtr& a) {
  LinTerm t = a->t;
  switch (a->atom) {
  case Qf::AtomKind::Eq: {
    LinTerm up = t;
    up.c += 1; // t >= 1  <=>  -t + 1 <= 0
    LinTerm lo = t * Int(-1);
    lo.c += 1;
    return {{Qf::le(up)}, {Qf::le(lo)}};
  }
  case Qf::AtomKind::Le: {
    LinTerm s = t * Int(-1);
    s.c += 1; // t >= 1
    return {{Qf::le(s)}};
  }
  case Qf::AtomKind::Dvd: {
    std::vector<std::vector<QfPtr>> out;
    for (Int rr = 1; rr < a->mod; ++rr) {
      LinTerm s = t;
      s.c -= rr;
      out.push_back({Qf::dvd(a->mod, s)});
    }
    return out;
  }
  case Qf::AtomKind::Ndvd:
    break;
  }
  throw DomainError("unexpanded divisibility negation");
}

bool quickInfeasible(const std::vector<QfPtr>& atoms) {
  // pruning work is throwaway; meter it separately so it cannot drain the
  // operation budget
  Budget scratch(INT64_C(1) << 30);
  BudgetScope scope(scratch);
  QfPtr c = simplifyQf(Qf::conj(atoms));
  return c->kind == Qf::Kind::False;
}

// Refine the DNF conjuncts into pairwise disjoint ones: each conjunct is
// intersected with "some earlier conjunct fails", split by the first
// failing atom.
std::vector<std::vector<QfPtr>> disjointConjuncts(
    std::vector<std::vector<QfPtr>> dnf) {
  // drop duplicate conjuncts up front
  {
    std::set<std::set<std::string>> seen;
    std::vector<std::vector<QfPtr>> uniq;
    for (auto& c : dnf) {
      std::set<std::string> keys;
      for (const auto& a : c) keys.insert(a->key());
      if (seen.insert(std::move(keys)).second) uniq.push_back(std::move(c));
    }
    dnf = std::move(uniq);
  }
  std::vector<std::vector<QfPtr>> out;
  for (std::size_t j = 0; j < dnf.size(); ++j) {
    std::vector<std::vector<QfPtr>> cases{dnf[j]};
    for (std::size_t i = 0; i < j && !cases.empty(); ++i) {
      std::vector<std::vector<QfPtr>> next;
      for (const auto& base : cases) {
        for (std::size_t l = 0; l < dnf[i].size(); ++l) {
          for (const auto& neg : negCases(dnf[i][l])) {
            std::vector<QfPtr> cur = base;
            for (std::size_t p = 0; p < l; ++p) cur.push_back(dnf[i][p]);
            for (const auto& nAtom : neg) cur.push_back(nAtom);
            if (!quickInfeasible(cur)) next.push_back(std::move(cur));
          }
        }
      }
      cases = std::move(next);
    }
    for (auto& c : cases) out.push_back(std::move(c));
  }
  return out;
}

// Build a Dvd-free constraint system from a conjunct of Eq/Le atoms.
LinSys sysFromAtoms(const std::vector<QfPtr>& atoms,
                    const std::map<std::string, std::size_t>& index) {
  LinSys sys;
  sys.n = index.size();
  for (const auto& a : atoms) {
    if (a->kind == Qf::Kind::True) continue;
    if (a->kind != Qf::Kind::Atom ||
        (a->atom != Qf::AtomKind::Eq && a->atom != Qf::AtomKind::Le))
      throw DomainError("expected a polyhedral atom");
    Vec row(sys.n, 0);
    for (const auto& [v, c] : a->t.coef) row[index.at(v)] = c;
    if (a->atom == Qf::AtomKind::Eq) {
      sys.eqA.push_back(std::move(row));
      sys.eqB.push_back(-a->t.c);
    } else {
      sys.leA.push_back(std::move(row));
      sys.leB.push_back(-a->t.c);
    }
  }
  return sys;
}

std::vector<Lattice> decomposeQf(const QfPtr& q0, const std::vector<std::string>& vars,
                                 std::int64_t& pieceBudget) {
  std::size_t m = vars.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index[vars[i]] = i;

  QfPtr q = simplifyQf(expandNdvd(q0));
  std::vector<std::vector<QfPtr>> dnf = toDNF(q);

  // split all variables once by the lcm of every modulus that touches them;
  // inside a residue class each Dvd atom folds to a constant
  Vec scale(m, 1);
  for (const auto& conj : dnf)
    for (const auto& a : conj) {
      if (a->kind != Qf::Kind::Atom || a->atom != Qf::AtomKind::Dvd) continue;
      for (const auto& [v, c] : a->t.coef)
        if (c != 0) scale[index.at(v)] = lcmInt(scale[index.at(v)], a->mod);
    }

  std::vector<Lattice> out;
  Vec r(m, 0);
  for (;;) {
    chargeBudget();
    // substitute x_i := r_i + scale_i * x_i into every conjunct
    std::vector<QfPtr> parts;
    for (const auto& conj : dnf) {
      std::vector<QfPtr> atoms;
      for (const auto& a : conj) {
        LinTerm t;
        t.c = a->t.c;
        for (const auto& [v, c] : a->t.coef) {
          std::size_t i = index.at(v);
          t.c += c * r[i];
          t.coef[v] = c * scale[i];
        }
        t.normalize();
        switch (a->atom) {
        case Qf::AtomKind::Eq: atoms.push_back(Qf::eq(std::move(t))); break;
        case Qf::AtomKind::Le: atoms.push_back(Qf::le(std::move(t))); break;
        case Qf::AtomKind::Dvd: atoms.push_back(Qf::dvd(a->mod, std::move(t))); break;
        case Qf::AtomKind::Ndvd: throw DomainError("unexpanded divisibility negation");
        }
      }
      parts.push_back(Qf::conj(std::move(atoms)));
    }
    QfPtr cls = simplifyQf(Qf::disj(std::move(parts)));
    if (cls->kind != Qf::Kind::False) {
      for (const auto& conj : disjointConjuncts(toDNF(cls))) {
        std::vector<RawPiece> raw;
        polyDecompose(sysFromAtoms(conj, index), 0, pieceBudget, raw);
        for (auto& p : raw) {
          Vec base(m);
          for (std::size_t i = 0; i < m; ++i) base[i] = r[i] + scale[i] * p.base[i];
          std::vector<Vec> periods;
          for (const auto& pe : p.periods) {
            Vec per(m);
            for (std::size_t i = 0; i < m; ++i) per[i] = scale[i] * pe[i];
            periods.push_back(std::move(per));
          }
          out.push_back(Lattice::make(std::move(base), std::move(periods)));
        }
      }
    }
    std::size_t i = 0;
    while (i < m && ++r[i] >= scale[i]) r[i++] = 0;
    if (i == m) break;
    if (m == 0) break;
  }
  return out;
}

// Quantifier-free membership condition of one lattice over fresh variables.
QfPtr latticeMembershipQf(const Lattice& L, const std::vector<std::string>& vars) {
  std::vector<QfPtr> eqs;
  std::vector<std::string> ks;
  for (std::size_t j = 0; j < L.periods.size(); ++j)
    ks.push_back("k" + std::to_string(j + 1));
  for (std::size_t i = 0; i < L.arity; ++i) {
    LinTerm t = LinTerm::variable(vars[i]);
    t.c -= L.base[i];
    for (std::size_t j = 0; j < L.periods.size(); ++j) {
      LinTerm kj = LinTerm::variable(ks[j]);
      t -= kj * L.periods[j][i];
    }
    eqs.push_back(Qf::eq(std::move(t)));
  }
  QfPtr body = Qf::conj(std::move(eqs));
  for (auto it = ks.rbegin(); it != ks.rend(); ++it)
    body = simplifyQf(cooperExistsNat(*it, body));
  return body;
}

} // namespace

std::size_t rankOf(const std::vector<Vec>& vecs) {
  if (vecs.empty()) return 0;
  std::vector<std::vector<Rat>> M;
  for (const auto& v : vecs) {
    std::vector<Rat> row;
    for (const auto& x : v) row.emplace_back(x);
    M.push_back(std::move(row));
  }
  std::size_t rows = M.size(), cols = M[0].size(), rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && M[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[rank], M[piv]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (M[r][c] == 0) continue;
      Rat f = M[r][c] / M[rank][c];
      for (std::size_t cc = c; cc < cols; ++cc) M[r][cc] -= f * M[rank][cc];
    }
    ++rank;
  }
  return rank;
}

Lattice Lattice::make(Vec base, std::vector<Vec> periods, bool natValued) {
  Lattice L;
  L.arity = base.size();
  for (const auto& p : periods)
    if (p.size() != L.arity) throw DomainError("period arity mismatch");
  if (natValued) {
    for (const auto& x : base)
      if (x < 0) throw DomainError("negative base in a lattice over N");
    for (const auto& p : periods)
      for (std::size_t i = 0; i < p.size(); ++i)
        if (base[i] + p[i] < 0) throw DomainError("period leaves N from the base");
  }
  L.base = std::move(base);
  L.periods = std::move(periods);
  L.natValued = natValued;
  return L;
}

bool Lattice::fundamental() const { return rankOf(periods) == periods.size(); }

bool member(const Lattice& L, const Vec& v) {
  if (v.size() != L.arity) throw DomainError("point arity mismatch");
  Vec diff(L.arity);
  for (std::size_t i = 0; i < L.arity; ++i) diff[i] = v[i] - L.base[i];
  if (L.periods.empty()) return isZeroVec(diff);
  Mat A(L.arity, Vec(L.periods.size()));
  for (std::size_t i = 0; i < L.arity; ++i)
    for (std::size_t j = 0; j < L.periods.size(); ++j) A[i][j] = L.periods[j][i];
  return !solveSystem(A, diff).minimal.empty();
}

SemilinearSet fromFormula(const FormulaPtr& phi, const std::vector<std::string>& vars,
                          const Limits& limits) {
  if (!isQuantifierFree(phi)) throw DomainError("formula must be quantifier-free");
  std::set<std::string> declared(vars.begin(), vars.end());
  for (const auto& v : freeVars(phi))
    if (!declared.count(v)) throw DomainError("free variable not listed: " + v);

  Budget budget(limits.nodes);
  BudgetScope scope(budget);
  QfPtr q = eliminateToQf(phi);

  SemilinearSet S;
  S.arity = vars.size();
  for (const auto& conj : conjunctsOf(q)) {
    for (const auto& rc : residueSplit(conj, vars)) {
      DiophSolutions sols = solveLinSys(rc.sys);
      if (sols.minimal.empty()) continue;
      std::vector<Vec> periods;
      for (const auto& gHead : sols.basis) {
        Vec per(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) per[i] = rc.scale[i] * gHead[i];
        periods.push_back(std::move(per));
      }
      for (const auto& mu : sols.minimal) {
        Vec base(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i)
          base[i] = rc.off[i] + rc.scale[i] * mu[i];
        S.lattices.push_back(Lattice::make(std::move(base), periods));
      }
    }
  }
  return S;
}

DisjointFundamentalDecomposition itoDecompose(const SemilinearSet& S,
                                              const Limits& limits) {
  Budget budget(limits.nodes);
  BudgetScope scope(budget);
  std::int64_t pieceBudget = limits.pieces;

  std::vector<std::string> vars;
  for (std::size_t i = 0; i < S.arity; ++i) vars.push_back("x" + std::to_string(i + 1));

  std::vector<QfPtr> parts;
  for (const auto& L : S.lattices) {
    if (L.arity != S.arity) throw DomainError("lattice arity mismatch");
    parts.push_back(latticeMembershipQf(L, vars));
  }
  QfPtr q = simplifyQf(Qf::disj(std::move(parts)));

  DisjointFundamentalDecomposition D;
  D.arity = S.arity;
  D.pieces = decomposeQf(q, vars, pieceBudget);
  for (const auto& p : D.pieces)
    if (!p.fundamental()) throw DomainError("internal: dependent periods in a piece");
  return D;
}

std::size_t dimension(const DisjointFundamentalDecomposition& D) {
  std::size_t d = 0;
  for (const auto& p : D.pieces) d = std::max(d, p.periods.size());
  return d;
}

bool isEmpty(const DisjointFundamentalDecomposition& D) { return D.pieces.empty(); }

std::vector<Vec> enumerate(const SemilinearSet& S, long bound) {
  std::set<Vec> pts;
  for (const auto& L : S.lattices) {
    bool nonneg = std::all_of(L.base.begin(), L.base.end(),
                              [](const Int& x) { return x >= 0; });
    for (const auto& p : L.periods)
      nonneg = nonneg && std::all_of(p.begin(), p.end(),
                                     [](const Int& x) { return x >= 0; });
    auto inBox = [&](const Vec& v) {
      return std::all_of(v.begin(), v.end(), [&](const Int& x) {
        return x >= 0 && x <= bound;
      });
    };
    if (nonneg) {
      // grow from the base; periods only increase coordinates
      if (!inBox(L.base)) continue;
      std::set<Vec> seen{L.base};
      std::set<Vec> layer{L.base};
      while (!layer.empty()) {
        std::set<Vec> next;
        for (const auto& v : layer) {
          for (const auto& p : L.periods) {
            if (isZeroVec(p)) continue;
            Vec w(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] + p[i];
            if (inBox(w) && seen.insert(w).second) next.insert(std::move(w));
          }
        }
        layer = std::move(next);
      }
      pts.insert(seen.begin(), seen.end());
    } else {
      Vec v(S.arity, 0);
      for (;;) {
        if (member(L, v)) pts.insert(v);
        std::size_t i = 0;
        while (i < S.arity && ++v[i] > bound) v[i++] = 0;
        if (i == S.arity) break;
        if (S.arity == 0) break;
      }
    }
  }
  return std::vector<Vec>(pts.begin(), pts.end());
}

bool isFinite(const SemilinearSet& S, const Limits& limits) {
  DisjointFundamentalDecomposition D = itoDecompose(S, limits);
  return std::all_of(D.pieces.begin(), D.pieces.end(),
                     [](const Lattice& p) { return p.periods.empty(); });
}

} // namespace presburger
