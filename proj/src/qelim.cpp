#include "presburger/qelim.hpp"

#include <algorithm>

#include "presburger/errors.hpp"

namespace presburger {

namespace {

Int lcmInt(const Int& a, const Int& b) {
  Int r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// A scaled atom about the eliminated variable: sign*X + rest OP 0, where X
// stands for L*x after coefficient normalization.
struct ScaledAtom {
  Qf::AtomKind kind;
  int sign; // +1 or -1
  LinTerm rest;
  Int mod; // Dvd/Ndvd
};

QfPtr instantiate(const ScaledAtom& a, const LinTerm& value) {
  LinTerm t = a.rest;
  if (a.sign > 0) t += value; else t -= value;
  switch (a.kind) {
  case Qf::AtomKind::Le: return Qf::le(std::move(t));
  case Qf::AtomKind::Dvd: return Qf::dvd(a.mod, std::move(t));
  case Qf::AtomKind::Ndvd: return Qf::ndvd(a.mod, std::move(t));
  default: throw DomainError("unexpected scaled atom");
  }
}

// Cooper elimination of exists x from a single conjunct of atoms.
QfPtr cooperConjunct(const std::string& x, const std::vector<QfPtr>& atoms) {
  std::vector<QfPtr> rest;
  std::vector<QfPtr> withX;
  for (const auto& a : atoms) {
    (a->t.coef.count(x) ? withX : rest).push_back(a);
  }
  if (withX.empty()) return Qf::conj(std::move(rest)); // x unconstrained

  // Shortcut: a defining equality with coefficient +-1 substitutes directly.
  for (std::size_t i = 0; i < withX.size(); ++i) {
    const QfPtr& e = withX[i];
    if (e->atom != Qf::AtomKind::Eq) continue;
    Int a = e->t.coeffOf(x);
    if (a != 1 && a != -1) continue;
    LinTerm exprT = e->t;
    exprT.coef.erase(x);
    LinTerm expr = exprT * Int(-a.get_si());
    std::vector<QfPtr> out = rest;
    for (std::size_t j = 0; j < withX.size(); ++j)
      if (j != i) out.push_back(substituteQf(withX[j], x, expr));
    return Qf::conj(std::move(out));
  }

  Int L = 1;
  for (const auto& a : withX) {
    Int c = a->t.coeffOf(x);
    L = lcmInt(L, c < 0 ? Int(-c) : c);
  }

  std::vector<ScaledAtom> scaled;
  for (const auto& a : withX) {
    Int c = a->t.coeffOf(x);
    Int m = L / (c < 0 ? Int(-c) : c);
    LinTerm t = a->t * m;
    int sign = c < 0 ? -1 : 1;
    t.coef.erase(x);
    switch (a->atom) {
    case Qf::AtomKind::Eq:
      // sign*X + t = 0 becomes the pair of inequalities.
      scaled.push_back({Qf::AtomKind::Le, sign, t, 0});
      scaled.push_back({Qf::AtomKind::Le, -sign, t * Int(-1), 0});
      break;
    case Qf::AtomKind::Le:
      scaled.push_back({Qf::AtomKind::Le, sign, std::move(t), 0});
      break;
    case Qf::AtomKind::Dvd:
    case Qf::AtomKind::Ndvd:
      scaled.push_back({a->atom, sign, std::move(t), a->mod * m});
      break;
    }
  }
  scaled.push_back({Qf::AtomKind::Dvd, 1, LinTerm(), L}); // L | X

  Int delta = 1;
  bool haveLower = false;
  std::vector<LinTerm> lowers; // terms b with X > b
  for (const auto& s : scaled) {
    if (s.kind == Qf::AtomKind::Dvd || s.kind == Qf::AtomKind::Ndvd) {
      delta = lcmInt(delta, s.mod);
    } else if (s.sign < 0) {
      // -X + r <= 0  <=>  X >= r, lower-bound term r - 1
      LinTerm b = s.rest;
      b.c -= 1;
      lowers.push_back(std::move(b));
      haveLower = true;
    }
  }
  {
    std::set<std::string> seen;
    std::vector<LinTerm> uniq;
    for (auto& b : lowers)
      if (seen.insert(b.key()).second) uniq.push_back(std::move(b));
    lowers = std::move(uniq);
  }

  std::int64_t deltaSz =
      delta.fits_slong_p() ? static_cast<std::int64_t>(delta.get_si()) : (INT64_C(1) << 40);
  chargeBudget((static_cast<std::int64_t>(lowers.size()) + 1) * deltaSz);

  std::vector<QfPtr> branches;
  if (!haveLower) {
    // minus-infinity branch: upper bounds hold, only divisibilities remain
    for (Int j = 1; j <= delta; ++j) {
      std::vector<QfPtr> conj = rest;
      for (const auto& s : scaled)
        if (s.kind == Qf::AtomKind::Dvd || s.kind == Qf::AtomKind::Ndvd)
          conj.push_back(instantiate(s, LinTerm(j)));
      branches.push_back(Qf::conj(std::move(conj)));
    }
  }
  for (const auto& b : lowers) {
    for (Int j = 1; j <= delta; ++j) {
      LinTerm value = b;
      value.c += j;
      std::vector<QfPtr> conj = rest;
      bool dead = false;
      for (const auto& s : scaled) {
        QfPtr inst = instantiate(s, value);
        if (inst->kind == Qf::Kind::False) {
          dead = true;
          break;
        }
        if (inst->kind != Qf::Kind::True) conj.push_back(std::move(inst));
      }
      if (!dead) {
        QfPtr br = foldNatSigns(Qf::conj(std::move(conj)));
        if (br->kind != Qf::Kind::False) branches.push_back(std::move(br));
      }
    }
  }
  return Qf::disj(std::move(branches));
}

// Instantiate the whole NNF body at X := value, where X is x after
// coefficient normalization to +-L. minusInfJ, when set, applies the
// minus-infinity projection with the divisibility slot set to that value.
QfPtr instantiateWhole(const QfPtr& f, const std::string& x, const Int& L,
                       const LinTerm& value, bool minusInf) {
  switch (f->kind) {
  case Qf::Kind::True:
  case Qf::Kind::False:
    return f;
  case Qf::Kind::Atom: {
    Int c = f->t.coeffOf(x);
    if (c == 0) return f;
    Int m = L / (c < 0 ? Int(-c) : c);
    int sign = c < 0 ? -1 : 1;
    if (minusInf && (f->atom == Qf::AtomKind::Eq || f->atom == Qf::AtomKind::Le)) {
      if (f->atom == Qf::AtomKind::Eq) return Qf::mkFalse();
      return sign > 0 ? Qf::mkTrue() : Qf::mkFalse();
    }
    LinTerm r = f->t * m;
    r.coef.erase(x);
    if (sign > 0) r += value; else r -= value;
    switch (f->atom) {
    case Qf::AtomKind::Eq: return Qf::eq(std::move(r));
    case Qf::AtomKind::Le: return Qf::le(std::move(r));
    case Qf::AtomKind::Dvd: return Qf::dvd(f->mod * m, std::move(r));
    case Qf::AtomKind::Ndvd: return Qf::ndvd(f->mod * m, std::move(r));
    }
    break;
  }
  case Qf::Kind::And:
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids)
      ks.push_back(instantiateWhole(k, x, L, value, minusInf));
    return f->kind == Qf::Kind::And ? Qf::conj(std::move(ks)) : Qf::disj(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

void gatherAtomsWithVar(const QfPtr& f, const std::string& x, std::vector<QfPtr>& out) {
  if (f->kind == Qf::Kind::Atom) {
    if (f->t.coeffOf(x) != 0) out.push_back(f);
  } else {
    for (const auto& k : f->kids) gatherAtomsWithVar(k, x, out);
  }
}

// Cooper on an arbitrary NNF body, linear in |body| * |B| * delta.
QfPtr cooperWhole(const std::string& x, const QfPtr& body) {
  std::vector<QfPtr> atoms;
  gatherAtomsWithVar(body, x, atoms);
  if (atoms.empty()) return body;

  Int L = 1;
  for (const auto& a : atoms) {
    Int c = a->t.coeffOf(x);
    L = lcmInt(L, c < 0 ? Int(-c) : c);
  }
  Int delta = L;
  std::vector<LinTerm> lowers;
  for (const auto& a : atoms) {
    Int c = a->t.coeffOf(x);
    Int m = L / (c < 0 ? Int(-c) : c);
    int sign = c < 0 ? -1 : 1;
    if (a->atom == Qf::AtomKind::Dvd || a->atom == Qf::AtomKind::Ndvd) {
      delta = lcmInt(delta, a->mod * m);
    } else {
      LinTerm r = a->t * m;
      r.coef.erase(x);
      if (a->atom == Qf::AtomKind::Le && sign > 0) continue; // upper bound
      // X >= -sign*r gives the boundary term -sign*r - 1
      LinTerm b = r * Int(-sign);
      b.c -= 1;
      lowers.push_back(std::move(b));
    }
  }
  {
    std::set<std::string> seen;
    std::vector<LinTerm> uniq;
    for (auto& b : lowers)
      if (seen.insert(b.key()).second) uniq.push_back(std::move(b));
    lowers = std::move(uniq);
  }
  std::int64_t deltaSz =
      delta.fits_slong_p() ? static_cast<std::int64_t>(delta.get_si()) : (INT64_C(1) << 40);
  chargeBudget((static_cast<std::int64_t>(lowers.size()) + 1) * deltaSz);

  // After instantiation x is gone from the branch, so sign folding over the
  // remaining (N-valued) variables is sound and keeps the disjunction small.
  std::vector<QfPtr> branches;
  for (Int j = 1; j <= delta; ++j) {
    LinTerm vj(j);
    QfPtr inf = instantiateWhole(body, x, L, vj, true);
    if (inf->kind != Qf::Kind::False) {
      inf = simplifyQf(foldNatSigns(inf));
      if (inf->kind != Qf::Kind::False)
        branches.push_back(Qf::conj({inf, Qf::dvd(L, vj)}));
    }
    for (const auto& b : lowers) {
      LinTerm value = b;
      value.c += j;
      QfPtr inst = instantiateWhole(body, x, L, value, false);
      if (inst->kind != Qf::Kind::False) {
        inst = simplifyQf(foldNatSigns(inst));
        if (inst->kind != Qf::Kind::False)
          branches.push_back(Qf::conj({inst, Qf::dvd(L, value)}));
      }
    }
  }
  return Qf::disj(std::move(branches));
}

} // namespace

QfPtr cooperExistsNat(const std::string& x, const QfPtr& body) {
  LinTerm negX = LinTerm::variable(x) * Int(-1); // -x <= 0
  QfPtr guarded = simplifyQf(Qf::conj({body, Qf::le(negX)}));

  // A top-level defining equality with unit coefficient short-circuits.
  if (guarded->kind == Qf::Kind::And || guarded->kind == Qf::Kind::Atom) {
    std::vector<QfPtr> kids =
        guarded->kind == Qf::Kind::And ? guarded->kids : std::vector<QfPtr>{guarded};
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const QfPtr& e = kids[i];
      if (e->kind != Qf::Kind::Atom || e->atom != Qf::AtomKind::Eq) continue;
      Int a = e->t.coeffOf(x);
      if (a != 1 && a != -1) continue;
      LinTerm exprT = e->t;
      exprT.coef.erase(x);
      LinTerm expr = exprT * Int(a == 1 ? -1 : 1);
      std::vector<QfPtr> out;
      for (std::size_t j = 0; j < kids.size(); ++j)
        if (j != i) out.push_back(substituteQf(kids[j], x, expr));
      return simplifyQf(foldNatSigns(simplifyQf(Qf::conj(std::move(out)))));
    }
  }

  // Prefer per-conjunct elimination when the DNF stays small; otherwise
  // fall back to whole-formula Cooper, which is linear in the body size.
  std::vector<std::vector<QfPtr>> dnf;
  bool haveDnf = false;
  try {
    Budget cap(4096);
    BudgetScope scope(cap);
    dnf = toDNF(guarded);
    haveDnf = true;
  } catch (const BudgetError&) {
  }
  QfPtr result;
  if (haveDnf) {
    std::vector<QfPtr> out;
    out.reserve(dnf.size());
    for (const auto& conj : dnf) out.push_back(cooperConjunct(x, conj));
    result = Qf::disj(std::move(out));
  } else {
    // The DNF is too big in one go. A disjunction distributes over the
    // existential exactly, so peel the largest top-level one and eliminate
    // branch by branch: branch-local facts then prune the remainder before
    // the next split. Falls back to whole-formula Cooper when no sizable
    // disjunction is left.
    static thread_local int distDepth = 0;
    const QfPtr* orKid = nullptr;
    std::vector<QfPtr> rest;
    if (guarded->kind == Qf::Kind::Or) {
      orKid = &guarded;
    } else if (guarded->kind == Qf::Kind::And && distDepth < 4) {
      // peeling a conjoined disjunction duplicates the remainder, so only
      // do it for a dominant one and only a few levels deep
      std::int64_t bestN = countNodes(guarded) / 4;
      for (const auto& k : guarded->kids)
        if (k->kind == Qf::Kind::Or) {
          std::int64_t n = countNodes(k);
          if (n > bestN) {
            bestN = n;
            orKid = &k;
          }
        }
      if (orKid)
        for (const auto& k : guarded->kids)
          if (&k != orKid) rest.push_back(k);
    }
    if (orKid) {
      // splitting a bare disjunction is free; only the peel counts
      const bool counted = guarded->kind == Qf::Kind::And;
      distDepth += counted;
      std::vector<QfPtr> out;
      out.reserve((*orKid)->kids.size());
      try {
        for (const auto& br : (*orKid)->kids) {
          std::vector<QfPtr> c = rest;
          c.push_back(br);
          out.push_back(cooperExistsNat(x, Qf::conj(std::move(c))));
        }
      } catch (...) {
        distDepth -= counted;
        throw;
      }
      distDepth -= counted;
      result = Qf::disj(std::move(out));
    } else {
      result = cooperWhole(x, guarded);
    }
  }
  // x is gone; every remaining variable is N-valued here (outer variables get
  // their own guard before their Cooper step), so sign folding is sound
  return caseSplitResidues(simplifyQf(foldNatSigns(simplifyQf(result))));
}

namespace {

// Polarity-driven conversion with innermost-first elimination.
QfPtr elim(const FormulaPtr& f, bool pos) {
  switch (f->kind) {
  case Formula::Kind::Atom: {
    QfPtr a = atomToQf(*f);
    return pos ? a : negateNNF(a);
  }
  case Formula::Kind::Not:
    return elim(f->a, !pos);
  case Formula::Kind::And: {
    QfPtr l = elim(f->a, pos);
    QfPtr r = elim(f->b, pos);
    return pos ? Qf::conj({l, r}) : Qf::disj({l, r});
  }
  case Formula::Kind::Or: {
    QfPtr l = elim(f->a, pos);
    QfPtr r = elim(f->b, pos);
    return pos ? Qf::disj({l, r}) : Qf::conj({l, r});
  }
  case Formula::Kind::Implies: {
    QfPtr l = elim(f->a, !pos);
    QfPtr r = elim(f->b, pos);
    return pos ? Qf::disj({l, r}) : Qf::conj({l, r});
  }
  case Formula::Kind::Exists: {
    QfPtr inner = elim(f->a, true);
    QfPtr r = cooperExistsNat(f->var, inner);
    return pos ? r : simplifyQf(negateNNF(r));
  }
  case Formula::Kind::Forall: {
    QfPtr inner = elim(f->a, false); // body negated
    QfPtr r = cooperExistsNat(f->var, inner);
    return pos ? simplifyQf(negateNNF(r)) : r;
  }
  }
  throw DomainError("bad formula");
}

} // namespace

QfPtr eliminateToQf(const FormulaPtr& f) {
  return caseSplitResidues(simplifyQf(foldNatSigns(simplifyQf(elim(f, true)))));
}

bool decideQf(const FormulaPtr& f) {
  QfPtr r = eliminateToQf(f);
  std::set<std::string> vs;
  collectVars(r, vs);
  if (!vs.empty()) throw DomainError("decide requires a sentence");
  return evalQf(r, {});
}

FormulaPtr eliminate(const FormulaPtr& f, const QelimOptions& opts) {
  Budget budget(opts.nodeBudget);
  BudgetScope scope(budget);
  return toSurface(eliminateToQf(f));
}

bool decide(const FormulaPtr& f, const QelimOptions& opts) {
  if (!freeVars(f).empty()) throw DomainError("decide requires a sentence");
  Budget budget(opts.nodeBudget);
  BudgetScope scope(budget);
  return decideQf(f);
}

namespace {

// Does hyp force concl for every assignment over N? Decided by a private
// budget-capped elimination; an overrun conservatively counts as no.
bool impliedN(std::vector<QfPtr> hyp, const QfPtr& concl) {
  hyp.push_back(negateNNF(concl));
  try {
    Budget cap(1 << 16);
    BudgetScope scope(cap);
    QfPtr cur = simplifyQf(Qf::conj(std::move(hyp)));
    std::set<std::string> vs;
    collectVars(cur, vs);
    for (const auto& v : vs) {
      if (cur->kind == Qf::Kind::False) break;
      cur = cooperExistsNat(v, cur);
    }
    return cur->kind == Qf::Kind::False;
  } catch (const BudgetError&) {
    return false;
  }
}

// Greedy redundancy removal backed by real implication checks: conjuncts
// implied by their siblings go, clause literals subsumed under the rest of
// the conjunction go, disjunction branches covered by the others go. Far
// more expensive than the syntactic simplifier, so reserved for the public
// simplify entry point where results get reused downstream.
QfPtr shrinkRec(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::And: {
    std::vector<QfPtr> kids;
    kids.reserve(f->kids.size());
    for (const auto& k : f->kids) kids.push_back(shrinkRec(k));
    for (std::size_t i = 0; kids.size() > 1 && i < kids.size();) {
      std::vector<QfPtr> others;
      for (std::size_t j = 0; j < kids.size(); ++j)
        if (j != i) others.push_back(kids[j]);
      if (impliedN(others, kids[i]))
        kids = std::move(others);
      else
        ++i;
    }
    for (std::size_t ci = 0; ci < kids.size(); ++ci) {
      if (kids[ci]->kind != Qf::Kind::Or) continue;
      std::vector<QfPtr> lits = kids[ci]->kids;
      bool atoms = true;
      for (const auto& l : lits) atoms = atoms && l->kind == Qf::Kind::Atom;
      if (!atoms) continue;
      for (std::size_t i = 0; lits.size() > 1 && i < lits.size();) {
        std::vector<QfPtr> restLits;
        for (std::size_t j = 0; j < lits.size(); ++j)
          if (j != i) restLits.push_back(lits[j]);
        std::vector<QfPtr> hyp;
        for (std::size_t j = 0; j < kids.size(); ++j)
          if (j != ci) hyp.push_back(kids[j]);
        hyp.push_back(lits[i]);
        if (impliedN(std::move(hyp), Qf::disj(std::vector<QfPtr>(restLits)))) {
          lits = std::move(restLits);
          kids[ci] = Qf::disj(std::vector<QfPtr>(lits));
        } else {
          ++i;
        }
      }
    }
    return Qf::conj(std::move(kids));
  }
  case Qf::Kind::Or: {
    std::vector<QfPtr> kids;
    kids.reserve(f->kids.size());
    for (const auto& k : f->kids) kids.push_back(shrinkRec(k));
    for (std::size_t i = 0; kids.size() > 1 && i < kids.size();) {
      std::vector<QfPtr> others;
      for (std::size_t j = 0; j < kids.size(); ++j)
        if (j != i) others.push_back(kids[j]);
      if (impliedN({kids[i]}, Qf::disj(std::vector<QfPtr>(others))))
        kids = std::move(others);
      else
        ++i;
    }
    return Qf::disj(std::move(kids));
  }
  default:
    return f;
  }
}

QfPtr semanticShrink(const QfPtr& f) {
  if (countNodes(f) > 20000) return f;
  return simplifyQf(shrinkRec(f));
}

} // namespace

FormulaPtr simplify(const FormulaPtr& qf) {
  if (!isQuantifierFree(qf)) throw DomainError("simplify requires a quantifier-free formula");
  QfPtr q = eliminateToQf(qf);
  if (countNodes(q) < 500) return toSurface(semanticShrink(q));
  // the shrink is costly on big inputs and callers tend to resimplify the
  // same eliminated relation, so memoize those
  static thread_local std::map<std::string, FormulaPtr> memo;
  std::string key = print(toSurface(q));
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  FormulaPtr r = toSurface(semanticShrink(q));
  if (memo.size() > 64) memo.clear();
  memo.emplace(std::move(key), r);
  return r;
}

} // namespace presburger
