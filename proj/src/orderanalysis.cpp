// Galaxy classification, condensation, VD*-rank, and the example catalog.

#include "presburger/orderanalysis.hpp"

#include <optional>

#include "presburger/errors.hpp"
#include "presburger/qelim.hpp"

namespace presburger {

namespace {

std::string tv(const std::string& prefix, std::size_t i) {
  return prefix + std::to_string(i + 1);
}

FormulaPtr renamePrefix(FormulaPtr f, std::size_t m, const std::string& from,
                        const std::string& to) {
  for (std::size_t i = 0; i < m; ++i) f = renameVar(f, tv(from, i), tv("ww", i));
  for (std::size_t i = 0; i < m; ++i) f = renameVar(f, tv("ww", i), tv(to, i));
  return f;
}

FormulaPtr substPrefix(FormulaPtr f, std::size_t m, const std::string& prefix,
                       const Vec& a) {
  for (std::size_t i = 0; i < m; ++i) f = substitute(f, tv(prefix, i), a[i]);
  return f;
}

FormulaPtr forallTuple(FormulaPtr body, std::size_t m, const std::string& prefix) {
  for (std::size_t i = m; i-- > 0;) body = Formula::forall(tv(prefix, i), body);
  return body;
}

FormulaPtr existsTuple(FormulaPtr body, std::size_t m, const std::string& prefix) {
  for (std::size_t i = m; i-- > 0;) body = Formula::exists(tv(prefix, i), body);
  return body;
}

// x <lex y expanded over the given tuple prefixes
FormulaPtr lexLess(std::size_t m, const std::string& l, const std::string& r) {
  std::vector<FormulaPtr> cases;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<FormulaPtr> conj;
    for (std::size_t j = 0; j < i; ++j)
      conj.push_back(Formula::atom(Rel::Eq, Term::var(tv(l, j)), Term::var(tv(r, j))));
    conj.push_back(Formula::atom(Rel::Lt, Term::var(tv(l, i)), Term::var(tv(r, i))));
    cases.push_back(conjoinAll(conj));
  }
  return disjoinAll(cases);
}

std::vector<std::string> tupleVars(std::size_t m) {
  std::vector<std::string> vs;
  for (std::size_t i = 0; i < m; ++i) vs.push_back(tv("x", i));
  return vs;
}

bool allPointlike(const DisjointFundamentalDecomposition& D) {
  for (const auto& p : D.pieces)
    if (!p.periods.empty()) return false;
  return true;
}

} // namespace

std::string galaxyTypeString(const GalaxyType& t) {
  switch (t.tag) {
  case GalaxyType::Tag::N:
    return "N";
  case GalaxyType::Tag::NegN:
    return "N*";
  case GalaxyType::Tag::Z:
    return "Z";
  case GalaxyType::Tag::Finite:
    return "F(" + std::to_string(t.size) + ")";
  }
  return "?";
}

std::ostream& operator<<(std::ostream& os, const GalaxyType& t) {
  return os << galaxyTypeString(t);
}

GalaxyType galaxyType(const Interpretation& I, const Vec& a, const Limits& limits) {
  if (!inDomain(I, a)) throw DomainError("point outside domain");
  std::size_t m = I.m;
  QelimOptions qo{limits.nodes};

  FormulaPtr Tq = simplify(eliminate(sameGalaxyFormula(I), qo));
  FormulaPtr member = substPrefix(Tq, m, "y", a);          // galaxy of a, over x
  FormulaPtr memberY = renamePrefix(member, m, "x", "y");
  FormulaPtr lessXY = simplify(eliminate(lessBetween(I, "x", "y"), qo));
  FormulaPtr lessYX = simplify(eliminate(lessBetween(I, "y", "x"), qo));
  FormulaPtr eqXY = simplify(eliminate(equalityBetween(I, "x", "y"), qo));

  auto extremum = [&](const FormulaPtr& beats) {
    FormulaPtr inner = Formula::implies(memberY, Formula::disj(beats, eqXY));
    return decide(existsTuple(Formula::conj(member, forallTuple(inner, m, "y")), m, "x"),
                  qo);
  };
  bool hasMin = extremum(lessXY);
  bool hasMax = extremum(lessYX);

  if (!hasMin && !hasMax) return {GalaxyType::Tag::Z, 0};
  if (hasMin != hasMax)
    return {hasMin ? GalaxyType::Tag::N : GalaxyType::Tag::NegN, 0};

  // bounded galaxy: certify a box, then count inside it
  long B = 2;
  for (;;) {
    std::vector<FormulaPtr> caps;
    for (std::size_t i = 0; i < m; ++i)
      caps.push_back(Formula::atom(Rel::Le, Term::var(tv("x", i)), Term::num(B)));
    if (decide(forallTuple(Formula::implies(member, conjoinAll(caps)), m, "x"), qo))
      break;
    B *= 2;
    if (B > limits.boxMax) throw BudgetError("galaxy box limit exceeded");
  }

  std::vector<Vec> pts;
  Vec v(m, 0);
  for (;;) {
    Assignment s;
    for (std::size_t i = 0; i < m; ++i) s[tv("x", i)] = v[i];
    if (evaluate(member, s)) pts.push_back(v);
    std::size_t i = 0;
    while (i < m && ++v[i] > B) v[i++] = 0;
    if (i == m) break;
  }

  std::size_t n = 0;
  if (!I.equality) {
    n = pts.size();
  } else {
    std::vector<Vec> reps;
    for (const auto& p : pts) {
      bool fresh = true;
      for (const auto& r : reps) {
        Assignment s;
        for (std::size_t i = 0; i < m; ++i) {
          s[tv("x", i)] = p[i];
          s[tv("y", i)] = r[i];
        }
        if (evaluate(eqXY, s)) {
          fresh = false;
          break;
        }
      }
      if (fresh) reps.push_back(p);
    }
    n = reps.size();
  }
  if (n > static_cast<std::size_t>(limits.galaxyCount))
    throw BudgetError("finite galaxy larger than the count limit");
  return {GalaxyType::Tag::Finite, n};
}

CondensationResult condense(const Interpretation& I, const CondenseOptions& opts,
                            const Limits& limits) {
  std::size_t m = I.m;
  QelimOptions qo{limits.nodes};

  FormulaPtr Dp = simplify(eliminate(lexMinRepresentativeFormula(I), qo));
  if (opts.splitZ) {
    FormulaPtr Tq = simplify(eliminate(sameGalaxyFormula(I), qo));
    FormulaPtr lessXY = simplify(eliminate(lessBetween(I, "x", "y"), qo));
    FormulaPtr eqXY = simplify(eliminate(equalityBetween(I, "x", "y"), qo));
    // the galaxy of x has no internal extreme in either direction
    FormulaPtr Tux = renamePrefix(renamePrefix(Tq, m, "x", "u"), m, "y", "x");
    FormulaPtr Tvx = renamePrefix(renamePrefix(Tq, m, "x", "v"), m, "y", "x");
    auto noExtreme = [&](const std::string& a, const std::string& b) {
      // no u in [x] with u <= every v in [x]
      FormulaPtr beats =
          renamePrefix(renamePrefix(lessXY, m, "x", a), m, "y", b);
      FormulaPtr tie = renamePrefix(renamePrefix(eqXY, m, "x", "u"), m, "y", "v");
      FormulaPtr inner =
          forallTuple(Formula::implies(Tvx, Formula::disj(beats, tie)), m, "v");
      return Formula::negation(existsTuple(Formula::conj(Tux, inner), m, "u"));
    };
    FormulaPtr zShaped = simplify(
        eliminate(Formula::conj(noExtreme("u", "v"), noExtreme("v", "u")), qo));
    // belowMin(x): some least representative w of x's galaxy lies above x
    FormulaPtr DpW = renamePrefix(Dp, m, "x", "w");
    FormulaPtr Twx = renamePrefix(renamePrefix(Tq, m, "x", "w"), m, "y", "x");
    FormulaPtr lessXW = renamePrefix(lessXY, m, "y", "w");
    FormulaPtr belowMin = simplify(eliminate(
        conjoinAll({zShaped, existsTuple(conjoinAll({DpW, Twx, lessXW}), m, "w")}),
        qo));
    FormulaPtr belowMinY = renamePrefix(belowMin, m, "x", "y");
    std::vector<FormulaPtr> diff;
    for (std::size_t i = 0; i < m; ++i)
      diff.push_back(Formula::atom(Rel::Ne, Term::var(tv("x", i)), Term::var(tv("y", i))));
    FormulaPtr body = Formula::implies(conjoinAll({Tq, belowMinY, disjoinAll(diff)}),
                                       lexLess(m, "x", "y"));
    FormulaPtr lowRep = Formula::conj(belowMin, forallTuple(body, m, "y"));
    Dp = simplify(eliminate(Formula::disj(Dp, lowRep), qo));
  }

  CondensationResult res;
  res.cI = Interpretation::make(I.name + "-condensed", m, Dp, I.less, I.equality);
  SemilinearSet S = fromFormula(Dp, tupleVars(m), limits);
  res.domainDecomposition = itoDecompose(S, limits);
  res.dimension = dimension(res.domainDecomposition);
  return res;
}

RankResult vdRank(const Interpretation& I, const Limits& limits) {
  std::size_t m = I.m;
  QelimOptions qo{limits.nodes};

  RankResult res;
  Interpretation cur = I;
  FormulaPtr domQf = simplify(eliminate(cur.domain, qo));
  DisjointFundamentalDecomposition D =
      itoDecompose(fromFormula(domQf, tupleVars(m), limits), limits);

  while (!allPointlike(D)) {
    if (res.chain.size() >= m + 1)
      throw DomainError("condensation did not reach a finite order within the rank bound");
    res.chain.push_back(condense(cur, {}, limits));
    cur = res.chain.back().cI;
    D = res.chain.back().domainDecomposition;
  }
  res.rank = res.chain.size();
  res.finalSize = D.pieces.size();
  return res;
}

std::vector<Interpretation> catalog() {
  std::vector<Interpretation> out;
  out.push_back(Interpretation::make("omega", 1, parse("0 = 0"), parse("x1 < y1")));
  out.push_back(Interpretation::make("finite5", 1, parse("x1 < 5"), parse("x1 < y1")));
  out.push_back(Interpretation::make(
      "omega_plus_omega_star", 1, parse("0 = 0"),
      parse("(x1 == 0 mod 2 & y1 == 0 mod 2 & x1 < y1)"
            " | (x1 == 0 mod 2 & y1 == 1 mod 2)"
            " | (x1 == 1 mod 2 & y1 == 1 mod 2 & y1 < x1)")));
  // three ascending blocks, ordered by residue mod 3
  out.push_back(Interpretation::make(
      "omega_times_k", 1, parse("0 = 0"),
      parse("(x1 == 0 mod 3 & (y1 == 1 mod 3 | y1 == 2 mod 3))"
            " | (x1 == 1 mod 3 & y1 == 2 mod 3)"
            " | (((x1 == 0 mod 3 & y1 == 0 mod 3) | (x1 == 1 mod 3 & y1 == 1 mod 3)"
            "     | (x1 == 2 mod 3 & y1 == 2 mod 3)) & x1 < y1)")));
  out.push_back(Interpretation::make("lex_omega2", 2, parse("0 = 0"),
                                     parse("x1 < y1 | (x1 = y1 & x2 < y2)")));
  // columns ordered by x1, cycling through three roles: an ascending chain,
  // the finite box {(3k+1, 0..k)}, a descending chain. The chains face the
  // box with their open ends, so box k is a galaxy of size k + 1; each
  // descending chain merges with the next ascending one into a copy of Z.
  out.push_back(Interpretation::make(
      "growing_boxes", 2,
      parse("x1 == 0 mod 3 | x1 == 2 mod 3 | 3 * x2 + 1 <= x1"),
      parse("x1 < y1 | (x1 = y1 & ((x1 == 2 mod 3 & y2 < x2)"
            " | ((x1 == 0 mod 3 | x1 == 1 mod 3) & x2 < y2)))")));
  out.push_back(
      Interpretation::make("reverse_omega", 1, parse("0 = 0"), parse("y1 < x1")));
  // odd codes descend below the ascending even codes: order type Z
  out.push_back(Interpretation::make(
      "zeta", 1, parse("0 = 0"),
      parse("(x1 == 1 mod 2 & y1 == 0 mod 2)"
            " | (x1 == 0 mod 2 & y1 == 0 mod 2 & x1 < y1)"
            " | (x1 == 1 mod 2 & y1 == 1 mod 2 & y1 < x1)")));
  return out;
}

Interpretation catalogEntry(const std::string& name) {
  for (auto& I : catalog())
    if (I.name == name) return I;
  throw DomainError("unknown catalog entry: " + name);
}

} // namespace presburger
