#include "presburger/lexrep.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <sstream>

#include "presburger/errors.hpp"
#include "presburger/qelim.hpp"

namespace presburger {

namespace {

std::string tv(const std::string& p, std::size_t i) { return p + std::to_string(i + 1); }

// ---- prefix enumeration with box auto-growth ------------------------------

struct BoxPrefix {
  std::vector<Vec> pts;
  bool stable = false;
};

// Collapse runs of internally equal elements (relevant only with a custom
// equality relation).
std::vector<Vec> dedupe(const Interpretation& I, std::vector<Vec> pts,
                        const FormulaPtr& lessQf) {
  if (!I.equality) return pts;
  std::vector<Vec> out;
  for (auto& p : pts) {
    if (!out.empty()) {
      Assignment s;
      for (std::size_t i = 0; i < I.m; ++i) {
        s[tv("x", i)] = out.back()[i];
        s[tv("y", i)] = p[i];
      }
      if (!evaluate(lessQf, s)) continue; // not strictly above its predecessor
    }
    out.push_back(std::move(p));
  }
  return out;
}

BoxPrefix stableAscending(const Interpretation& I, std::size_t want,
                          const Limits& limits) {
  QelimOptions qo;
  qo.nodeBudget = limits.nodes;
  FormulaPtr lessQf = simplify(eliminate(I.less, qo));
  std::size_t ask = I.equality ? want * 4 : want;
  auto grab = [&](long bound) {
    std::vector<Vec> pts = dedupe(I, enumerateAscending(I, ask, bound).points, lessQf);
    if (pts.size() > want) pts.resize(want);
    return pts;
  };
  long B = 64;
  std::vector<Vec> prev = grab(B);
  while (2 * B <= limits.boxMax) {
    B *= 2;
    std::vector<Vec> cur = grab(B);
    if (cur == prev) return {std::move(cur), true};
    prev = std::move(cur);
  }
  return {std::move(prev), false};
}

// ---- fitting helpers ------------------------------------------------------

// Exact polynomial of minimal degree <= maxDeg through the samples, or
// nullopt; a sample is (k, value).
std::optional<Polynomial> fitPoly(const std::vector<std::pair<Int, Int>>& samples,
                                  std::size_t maxDeg) {
  for (std::size_t deg = 0; deg <= maxDeg; ++deg) {
    if (samples.size() < deg + 1) break;
    std::vector<std::vector<Rat>> M;
    std::vector<Rat> rhs;
    for (const auto& [k, v] : samples) {
      std::vector<Rat> row;
      Rat pw = 1;
      for (std::size_t j = 0; j <= deg; ++j) {
        row.push_back(pw);
        pw *= Rat(k);
      }
      M.push_back(std::move(row));
      rhs.push_back(Rat(v));
    }
    std::vector<Rat> c;
    if (!solveLinear(std::move(M), std::move(rhs), c)) continue;
    Polynomial p = Polynomial::zero(1);
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] != 0) p.coef[{static_cast<unsigned>(j)}] = c[j];
    if (p.totalDegree() < deg) continue; // already found at a lower degree
    return p;
  }
  return std::nullopt;
}

// index -> value map as singleton pieces below `offset` plus residue-class
// linear pieces (modulus `mod`) above it
std::optional<PiecewisePolynomial> fitIndexed(const std::vector<Int>& values,
                                              std::size_t offset, long mod) {
  PiecewisePolynomial pp;
  pp.dim = 1;
  for (std::size_t k = 0; k < offset && k < values.size(); ++k) {
    PiecewisePiece piece;
    piece.region = Lattice::make({Int(k)}, {}, false);
    piece.poly = Polynomial::constant(1, Rat(values[k]));
    pp.pieces.push_back(std::move(piece));
  }
  for (long c = 0; c < mod; ++c) {
    std::vector<std::pair<Int, Int>> samples;
    for (std::size_t k = offset; k < values.size(); ++k)
      if (static_cast<long>(k % mod) == c) samples.emplace_back(Int(k), values[k]);
    if (samples.empty()) continue;
    auto poly = fitPoly(samples, 1);
    if (!poly) return std::nullopt;
    PiecewisePiece piece;
    piece.region = Lattice::make({samples[0].first},
                                 samples.size() > 1 ? std::vector<Vec>{{Int(mod)}}
                                                    : std::vector<Vec>{},
                                 false);
    piece.poly = std::move(*poly);
    pp.pieces.push_back(std::move(piece));
  }
  for (const auto& p : pp.pieces)
    pp.declaredDegree = std::max(pp.declaredDegree, p.poly.totalDegree());
  return pp;
}

// ---- formula assembly -----------------------------------------------------

// Sum coef * var + cst <= 0 with signed entries moved to the proper side.
FormulaPtr leZero(const std::map<std::string, Int>& coef, const Int& cst) {
  std::vector<TermPtr> lhs, rhs;
  for (const auto& [v, c] : coef) {
    if (c > 0) lhs.push_back(Term::mul(c, Term::var(v)));
    else if (c < 0) rhs.push_back(Term::mul(-c, Term::var(v)));
  }
  if (cst > 0) lhs.push_back(Term::num(cst));
  else if (cst < 0) rhs.push_back(Term::num(-cst));
  auto fold = [](std::vector<TermPtr>& ts) {
    if (ts.empty()) return Term::num(0);
    TermPtr acc = ts[0];
    for (std::size_t i = 1; i < ts.size(); ++i) acc = Term::sum(acc, ts[i]);
    return acc;
  };
  return Formula::atom(Rel::Le, fold(lhs), fold(rhs));
}

struct Layout {
  bool hasDesc = false;
  std::size_t tail = 0;      // ascending tail coordinate count
  std::size_t tailStart = 0; // 1 without descending coords, 3 with
  std::size_t r = 0;

  std::string z(std::size_t i) const { return tv("z", i); }
  std::size_t kIdx() const { return 0; }
  std::size_t sIdx() const { return 1; } // valid only when hasDesc
  std::size_t dIdx() const { return 2; }

  FormulaPtr eqc(std::size_t i, long v) const {
    return Formula::atom(Rel::Eq, Term::var(z(i)), Term::num(v));
  }
  FormulaPtr zeroTail(std::size_t from) const {
    std::vector<FormulaPtr> fs;
    for (std::size_t i = from; i < tail; ++i) fs.push_back(eqc(tailStart + i, 0));
    return conjoinAll(fs);
  }
  // z_{tailStart+idx} <= slope * z1 + intercept - 1
  FormulaPtr tailBound(std::size_t idx, const Rat& slope, const Rat& intercept) const {
    Int D = lcm(slope.get_den(), intercept.get_den());
    std::map<std::string, Int> coef;
    coef[z(tailStart + idx)] = D;
    Rat ks = slope * D, is = intercept * D; // both integral by choice of D
    if (ks != 0) coef[z(kIdx())] = -ks.get_num();
    return leZero(coef, D - is.get_num());
  }
};

// The set of tuples encoding one galaxy, below the given spine guard.
FormulaPtr blockFormula(const Layout& L, const FormulaPtr& kGuard,
                        const GalaxyType::Tag tag, const Polynomial* card,
                        const std::vector<Int>& cardSampleKs) {
  std::vector<FormulaPtr> parts{kGuard};
  switch (tag) {
    case GalaxyType::Tag::N:
      if (L.hasDesc) {
        parts.push_back(L.eqc(L.sIdx(), 1));
        parts.push_back(L.eqc(L.dIdx(), 0));
      }
      parts.push_back(L.zeroTail(1)); // first tail coordinate runs free
      return conjoinAll(parts);
    case GalaxyType::Tag::NegN:
      parts.push_back(L.eqc(L.sIdx(), 0));
      parts.push_back(L.zeroTail(0)); // the descending coordinate runs free
      return conjoinAll(parts);
    case GalaxyType::Tag::Z: {
      FormulaPtr desc = Formula::conj(L.eqc(L.sIdx(), 0), L.zeroTail(0));
      FormulaPtr asc = conjoinAll({L.eqc(L.sIdx(), 1), L.eqc(L.dIdx(), 0), L.zeroTail(1)});
      parts.push_back(Formula::disj(desc, asc));
      return conjoinAll(parts);
    }
    case GalaxyType::Tag::Finite: {
      if (L.hasDesc) {
        parts.push_back(L.eqc(L.sIdx(), 1));
        parts.push_back(L.eqc(L.dIdx(), 0));
      }
      std::size_t deg = card->totalDegree();
      if (deg <= 1) {
        Rat slope = 0, icpt = 0;
        for (const auto& [e, c] : card->coef) (e[0] == 0 ? icpt : slope) = c;
        parts.push_back(L.tailBound(0, slope, icpt));
        parts.push_back(L.zeroTail(1));
      } else {
        auto fac = factorQuadratic(*card);
        if (!fac) throw DomainError("lexrep: cardinality function fit failure");
        auto [g, h] = *fac;
        // both factors must count: positive at every sampled index
        for (const Int& k : cardSampleKs) {
          if (g.first * k + g.second < 1 || h.first * k + h.second < 1) {
            if (g.first * k + g.second < 1 && h.first * k + h.second < 1 &&
                cardSampleKs[0] == k) {
              g = {-g.first, -g.second};
              h = {-h.first, -h.second};
            } else {
              throw DomainError("lexrep: cardinality function fit failure");
            }
          }
        }
        parts.push_back(L.tailBound(0, g.first, g.second));
        parts.push_back(L.tailBound(1, h.first, h.second));
        parts.push_back(L.zeroTail(2));
      }
      return conjoinAll(parts);
    }
  }
  throw DomainError("lexrep: unknown galaxy type");
}

void pruneConstantCoords(LexRepresentation& R) {
  if (R.S.pieces.empty()) return;
  std::vector<bool> keep(R.r, false);
  for (std::size_t j = 0; j < R.r; ++j) {
    const Int& v = R.S.pieces[0].base[j];
    for (const auto& p : R.S.pieces) {
      if (p.base[j] != v) keep[j] = true;
      for (const auto& per : p.periods)
        if (per[j] != 0) keep[j] = true;
    }
  }
  std::size_t kept = 0;
  for (std::size_t j = 0; j < R.r; ++j) kept += keep[j];
  if (kept == R.r) return;
  if (kept == 0) keep[0] = true, kept = 1;
  auto shrink = [&](const Vec& v) {
    Vec out;
    for (std::size_t j = 0; j < R.r; ++j)
      if (keep[j]) out.push_back(v[j]);
    return out;
  };
  DisjointFundamentalDecomposition D;
  D.arity = kept;
  for (const auto& p : R.S.pieces) {
    std::vector<Vec> periods;
    for (const auto& per : p.periods) periods.push_back(shrink(per));
    D.pieces.push_back(Lattice::make(shrink(p.base), std::move(periods), true));
  }
  std::vector<bool> desc;
  for (std::size_t j = 0; j < R.r; ++j)
    if (keep[j]) desc.push_back(j < R.descending.size() && R.descending[j]);
  R.S = std::move(D);
  R.descending = std::move(desc);
  std::size_t dropped = R.r - kept;
  R.r = kept;
  R.provenance.push_back("dropped " + std::to_string(dropped) + " constant coordinates");
}

std::string polyLine(const Polynomial& p) { return p.str(); }

} // namespace

// ---- public operations ----------------------------------------------------

bool lexLess(const LexRepresentation& R, const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    bool desc = i < R.descending.size() && R.descending[i];
    return desc ? a[i] > b[i] : a[i] < b[i];
  }
  return false;
}

std::optional<std::pair<std::pair<Rat, Rat>, std::pair<Rat, Rat>>>
factorQuadratic(const Polynomial& f) {
  if (f.nvars != 1 || f.totalDegree() != 2) return std::nullopt;
  Rat A = 0, B = 0, C = 0;
  for (const auto& [e, c] : f.coef) {
    if (e[0] == 2) A = c;
    else if (e[0] == 1) B = c;
    else C = c;
  }
  Rat disc = B * B - 4 * A * C;
  if (disc < 0) return std::nullopt;
  mpz_class num = disc.get_num(), den = disc.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  Rat root(sqrt(num), sqrt(den));
  root.canonicalize();
  Rat r1 = (-B + root) / (2 * A);
  Rat r2 = (-B - root) / (2 * A);
  return std::make_pair(std::make_pair(A, -A * r1), std::make_pair(Rat(1), -r2));
}

SpineMap synthesizeSpine(const Interpretation& I, const Limits& limits) {
  QelimOptions qo;
  qo.nodeBudget = limits.nodes;
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < I.m; ++i) xs.push_back(tv("x", i));
  FormulaPtr domQf = isQuantifierFree(I.domain) ? I.domain : simplify(eliminate(I.domain, qo));

  SpineMap out;
  if (isFinite(fromFormula(domQf, xs, limits), limits)) {
    BoxPrefix p = stableAscending(I, 4096, limits);
    if (!p.stable) throw BudgetError("lexrep: finite order did not fit the box cap");
    out.samples = std::move(p.pts);
    out.total = true;
  } else {
    CondensationResult cond = condense(I, {}, limits);
    bool condFinite = cond.dimension == 0;
    BoxPrefix p = stableAscending(cond.cI, condFinite ? 64 : 16, limits);
    if (!p.stable || (!condFinite && p.pts.size() < 16))
      throw DomainError("spine synthesis failed");
    out.samples = std::move(p.pts);
    out.total = condFinite;
  }

  std::size_t mdim = out.samples.empty() ? 0 : out.samples[0].size();
  std::size_t n = out.samples.size();
  for (std::size_t j = 0; j < mdim; ++j) {
    std::vector<Int> vals;
    for (const auto& s : out.samples) vals.push_back(s[j]);
    std::optional<PiecewisePolynomial> fit;
    for (std::size_t o = 0; o <= 4 && !fit; ++o)
      for (long mod = 1; mod <= 12 && !fit; ++mod) fit = fitIndexed(vals, o, mod);
    if (!fit) {
      if (!out.total) throw DomainError("spine synthesis failed");
      // a finite spine is fully known: fall back to one piece per index
      fit = fitIndexed(vals, n, 1);
    }
    out.coords.push_back(std::move(*fit));
  }
  return out;
}

LexRepresentation constructLexRep(const Interpretation& I, const Limits& limits) {
  QelimOptions qo;
  qo.nodeBudget = limits.nodes;
  std::vector<std::string> xs;
  for (std::size_t i = 0; i < I.m; ++i) xs.push_back(tv("x", i));
  FormulaPtr domQf = isQuantifierFree(I.domain) ? I.domain : simplify(eliminate(I.domain, qo));

  LexRepresentation R;

  // finite orders need no galaxy analysis at all
  if (isFinite(fromFormula(domQf, xs, limits), limits)) {
    BoxPrefix p = stableAscending(I, 4096, limits);
    if (!p.stable) throw BudgetError("lexrep: finite order did not fit the box cap");
    R.r = 1;
    R.S.arity = 1;
    for (std::size_t k = 0; k < p.pts.size(); ++k)
      R.S.pieces.push_back(Lattice::make({Int(k)}, {}, true));
    R.descending = {false};
    R.provenance.push_back("finite order with " + std::to_string(p.pts.size()) +
                           " elements mapped to an initial segment of N");
    return R;
  }

  CondensationResult cond = condense(I, {}, limits);
  const bool condFinite = cond.dimension == 0;
  const std::size_t K = 8; // sampled spine length for the infinite case
  BoxPrefix spine = stableAscending(cond.cI, condFinite ? 64 : K, limits);
  if (!spine.stable || spine.pts.empty())
    throw DomainError("spine synthesis failed");
  if (!condFinite) {
    // the condensation must itself be one ascending chain
    if (spine.pts.size() < K) throw DomainError("spine synthesis failed");
    CondensationResult c2 = condense(cond.cI, {}, limits);
    if (c2.dimension != 0 || c2.domainDecomposition.pieces.size() != 1 ||
        galaxyType(cond.cI, spine.pts[0], limits).tag != GalaxyType::Tag::N)
      throw DomainError("unsupported condensation shape");
  }

  std::vector<GalaxyType> g;
  for (const auto& rep : spine.pts) g.push_back(galaxyType(I, rep, limits));

  // eventually periodic description of the galaxy sequence
  std::size_t offset = 0;
  long period = 1;
  std::map<long, Polynomial> classCard;           // residue -> cardinality poly
  std::map<long, std::vector<Int>> classSamples;  // residue -> sampled indices
  if (!condFinite) {
    bool found = false;
    for (std::size_t o = 0; o <= 4 && !found; ++o) {
      for (long P = 1; P <= 6 && !found; ++P) {
        bool ok = true;
        for (std::size_t k = o; k + P < g.size() && ok; ++k)
          ok = g[k].tag == g[k + static_cast<std::size_t>(P)].tag;
        if (!ok) continue;
        std::map<long, Polynomial> cards;
        std::map<long, std::vector<Int>> ks;
        for (long c = 0; c < P && ok; ++c) {
          std::vector<std::pair<Int, Int>> samples;
          for (std::size_t k = o; k < g.size(); ++k)
            if (static_cast<long>(k % P) == c && g[k].tag == GalaxyType::Tag::Finite)
              samples.emplace_back(Int(k), Int(g[k].size));
          if (samples.empty()) continue;
          if (samples.size() < 2) {
            ok = false;
            break;
          }
          auto poly = fitPoly(samples, 2);
          if (!poly) {
            ok = false;
            break;
          }
          cards.emplace(c, std::move(*poly));
          for (const auto& [k, v] : samples) ks[c].push_back(k);
        }
        if (!ok) continue;
        offset = o;
        period = P;
        classCard = std::move(cards);
        classSamples = std::move(ks);
        found = true;
      }
    }
    if (!found) throw DomainError("lexrep: galaxy pattern not eventually periodic");
  }

  // target layout
  Layout L;
  std::size_t maxCardDeg = 0;
  bool needAsc = false;
  auto note = [&](GalaxyType::Tag t) {
    if (t == GalaxyType::Tag::NegN || t == GalaxyType::Tag::Z) L.hasDesc = true;
    if (t != GalaxyType::Tag::NegN) needAsc = true;
  };
  for (const auto& t : g) {
    note(t.tag);
    if (t.tag == GalaxyType::Tag::Finite) maxCardDeg = std::max<std::size_t>(maxCardDeg, 1);
  }
  for (const auto& [c, card] : classCard)
    maxCardDeg = std::max(maxCardDeg, card.totalDegree());
  L.tail = needAsc ? std::max<std::size_t>(1, maxCardDeg) : 0;
  L.tailStart = L.hasDesc ? 3 : 1;
  L.r = L.tailStart + L.tail;

  std::vector<FormulaPtr> blocks;
  auto emitExplicit = [&](std::size_t k) {
    Polynomial card = Polynomial::constant(1, Rat(Int(g[k].size)));
    blocks.push_back(blockFormula(L, L.eqc(L.kIdx(), static_cast<long>(k)), g[k].tag,
                                  &card, {Int(k)}));
    R.provenance.push_back("galaxy " + std::to_string(k) + ": " +
                           galaxyTypeString(g[k]));
  };
  if (condFinite) {
    for (std::size_t k = 0; k < g.size(); ++k) emitExplicit(k);
  } else {
    for (std::size_t k = 0; k < offset; ++k) emitExplicit(k);
    for (long c = 0; c < period; ++c) {
      // class representative index: smallest sampled k >= offset in the class
      std::size_t k0 = offset;
      while (static_cast<long>(k0 % period) != c) ++k0;
      std::vector<FormulaPtr> guard;
      if (offset > 0)
        guard.push_back(Formula::atom(Rel::Ge, Term::var(L.z(L.kIdx())),
                                      Term::num(static_cast<long>(offset))));
      if (period > 1)
        guard.push_back(Formula::cong(Term::var(L.z(L.kIdx())), Term::num(c), period));
      auto it = classCard.find(c);
      blocks.push_back(blockFormula(L, conjoinAll(guard), g[k0].tag,
                                    it == classCard.end() ? nullptr : &it->second,
                                    it == classCard.end() ? std::vector<Int>{}
                                                          : classSamples[c]));
      std::ostringstream os;
      os << "class k >= " << offset << ", k = " << c << " mod " << period << ": "
         << galaxyTypeString(g[k0]);
      if (it != classCard.end()) os << ", |G(k)| = " << polyLine(it->second);
      R.provenance.push_back(os.str());
    }
  }

  std::vector<std::string> zs;
  for (std::size_t i = 0; i < L.r; ++i) zs.push_back(L.z(i));
  FormulaPtr phi = disjoinAll(blocks);
  R.S = itoDecompose(fromFormula(phi, zs, limits), limits);
  R.r = L.r;
  R.descending.assign(L.r, false);
  if (L.hasDesc) R.descending[L.dIdx()] = true;
  R.provenance.insert(R.provenance.begin(),
                      condFinite ? "finite condensation with " +
                                       std::to_string(g.size()) + " galaxies"
                                 : "ascending-chain condensation, period " +
                                       std::to_string(period) + " after offset " +
                                       std::to_string(offset));
  pruneConstantCoords(R);
  return R;
}

namespace {

BoxPrefix stableSetPrefix(const LexRepresentation& R, std::size_t want,
                          const Limits& limits) {
  SemilinearSet SS{R.r, R.S.pieces};
  auto grab = [&](long bound) {
    std::vector<Vec> pts = enumerate(SS, bound);
    std::sort(pts.begin(), pts.end(),
              [&](const Vec& a, const Vec& b) { return lexLess(R, a, b); });
    if (pts.size() > want) pts.resize(want);
    return pts;
  };
  long B = 64;
  std::vector<Vec> prev = grab(B);
  while (2 * B <= limits.boxMax) {
    B *= 2;
    std::vector<Vec> cur = grab(B);
    if (cur == prev) return {std::move(cur), true};
    prev = std::move(cur);
  }
  return {std::move(prev), false};
}

} // namespace

VerificationReport verifyLexRep(const Interpretation& I, const LexRepresentation& R,
                                std::size_t prefixLength, const Limits& limits) {
  QelimOptions qo;
  qo.nodeBudget = limits.nodes;
  VerificationReport rep;

  BoxPrefix ip = stableAscending(I, prefixLength, limits);
  BoxPrefix sp = stableSetPrefix(R, prefixLength, limits);
  if (!ip.stable || !sp.stable) {
    rep.truncated = true;
    rep.message = std::string("prefix of the ") +
                  (!ip.stable ? "source order" : "representation") +
                  " did not stabilize within the box cap";
    return rep;
  }
  if (ip.pts.size() != sp.pts.size()) {
    rep.mismatchIndex = static_cast<long long>(std::min(ip.pts.size(), sp.pts.size()));
    rep.message = "prefix lengths differ: source " + std::to_string(ip.pts.size()) +
                  ", representation " + std::to_string(sp.pts.size());
    return rep;
  }
  rep.checked = ip.pts.size();

  // a true ascending prefix never crosses a galaxy boundary: consecutive
  // elements are at distance one
  if (ip.pts.size() > 1) {
    FormulaPtr G = simplify(eliminate(sameGalaxyFormula(I), qo));
    for (std::size_t i = 0; i + 1 < ip.pts.size(); ++i) {
      Assignment s;
      for (std::size_t j = 0; j < I.m; ++j) {
        s[tv("x", j)] = ip.pts[i][j];
        s[tv("y", j)] = ip.pts[i + 1][j];
      }
      if (!evaluate(G, s)) {
        rep.mismatchIndex = static_cast<long long>(i + 1);
        rep.message = "galaxy boundary inside the source prefix at index " +
                      std::to_string(i + 1);
        return rep;
      }
    }
  }

  rep.ok = true;
  rep.message = "prefixes order-isomorphic over " + std::to_string(rep.checked) +
                " elements";
  return rep;
}

std::string lexRepToJson(const LexRepresentation& R) {
  nlohmann::json j;
  j["r"] = R.r;
  j["descending"] = R.descending;
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : R.S.pieces) {
    nlohmann::json piece;
    nlohmann::json base = nlohmann::json::array();
    for (const Int& b : p.base) base.push_back(b.get_si());
    piece["base"] = std::move(base);
    nlohmann::json periods = nlohmann::json::array();
    for (const auto& per : p.periods) {
      nlohmann::json row = nlohmann::json::array();
      for (const Int& e : per) row.push_back(e.get_si());
      periods.push_back(std::move(row));
    }
    piece["periods"] = std::move(periods);
    pieces.push_back(std::move(piece));
  }
  j["pieces"] = std::move(pieces);
  j["provenance"] = R.provenance;
  return j.dump();
}

LexRepresentation parseLexRep(const std::string& jsonText) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(jsonText);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError(std::string("lexrep json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("r") || !j.contains("pieces"))
    throw DomainError("lexrep json: expected an object with r and pieces");
  LexRepresentation R;
  R.r = j.at("r").get<std::size_t>();
  if (R.r == 0) throw DomainError("lexrep json: r must be positive");
  if (j.contains("descending")) R.descending = j.at("descending").get<std::vector<bool>>();
  R.S.arity = R.r;
  for (const auto& piece : j.at("pieces")) {
    Vec base;
    for (const auto& b : piece.at("base")) base.push_back(Int(b.get<long>()));
    if (base.size() != R.r) throw DomainError("lexrep json: base arity mismatch");
    std::vector<Vec> periods;
    if (piece.contains("periods"))
      for (const auto& row : piece.at("periods")) {
        Vec per;
        for (const auto& e : row) per.push_back(Int(e.get<long>()));
        if (per.size() != R.r) throw DomainError("lexrep json: period arity mismatch");
        periods.push_back(std::move(per));
      }
    R.S.pieces.push_back(Lattice::make(std::move(base), std::move(periods), true));
  }
  if (j.contains("provenance"))
    R.provenance = j.at("provenance").get<std::vector<std::string>>();
  return R;
}

} // namespace presburger
