#include "presburger/linear.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "presburger/budget.hpp"
#include "presburger/errors.hpp"

namespace presburger {

// ---------------------------------------------------------------------------
// LinTerm
// ---------------------------------------------------------------------------

LinTerm& LinTerm::operator+=(const LinTerm& o) {
  c += o.c;
  for (const auto& [v, k] : o.coef) coef[v] += k;
  normalize();
  return *this;
}

LinTerm& LinTerm::operator-=(const LinTerm& o) {
  c -= o.c;
  for (const auto& [v, k] : o.coef) coef[v] -= k;
  normalize();
  return *this;
}

LinTerm& LinTerm::operator*=(const Int& k) {
  if (k == 0) {
    c = 0;
    coef.clear();
    return *this;
  }
  c *= k;
  for (auto& [v, a] : coef) a *= k;
  return *this;
}

void LinTerm::normalize() {
  for (auto it = coef.begin(); it != coef.end();)
    it = it->second == 0 ? coef.erase(it) : std::next(it);
}

LinTerm LinTerm::substituted(const std::string& v, const LinTerm& by) const {
  auto it = coef.find(v);
  if (it == coef.end()) return *this;
  LinTerm r = *this;
  Int k = it->second;
  r.coef.erase(v);
  r += LinTerm(by) * k;
  return r;
}

Int LinTerm::eval(const Assignment& sigma) const {
  Int r = c;
  for (const auto& [v, k] : coef) {
    auto it = sigma.find(v);
    if (it == sigma.end()) throw DomainError("unbound variable: " + v);
    r += k * it->second;
  }
  return r;
}

std::string LinTerm::key() const {
  std::ostringstream os;
  os << c;
  for (const auto& [v, k] : coef) os << "+" << k << "*" << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Qf construction and atom normalization
// ---------------------------------------------------------------------------

namespace {

QfPtr mk(Qf&& node) {
  chargeBudget();
  return std::make_shared<Qf>(std::move(node));
}

Int coeffGcd(const LinTerm& t) {
  Int g = 0;
  for (const auto& [v, k] : t.coef) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
  return g;
}

Int floorDiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceilDiv(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int posMod(const Int& a, const Int& n) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

} // namespace

QfPtr Qf::mkTrue() {
  Qf q;
  q.kind = Kind::True;
  return mk(std::move(q));
}

QfPtr Qf::mkFalse() {
  Qf q;
  q.kind = Kind::False;
  return mk(std::move(q));
}

QfPtr Qf::eq(LinTerm t) {
  t.normalize();
  if (t.isConst()) return mkBool(t.c == 0);
  Int g = coeffGcd(t);
  if (g > 1) {
    if (!mpz_divisible_p(t.c.get_mpz_t(), g.get_mpz_t())) return mkFalse();
    t.c /= g;
    for (auto& [v, k] : t.coef) k /= g;
  }
  if (t.coef.begin()->second < 0) t *= Int(-1);
  Qf q;
  q.kind = Kind::Atom;
  q.atom = AtomKind::Eq;
  q.t = std::move(t);
  return mk(std::move(q));
}

QfPtr Qf::le(LinTerm t) {
  t.normalize();
  if (t.isConst()) return mkBool(t.c <= 0);
  Int g = coeffGcd(t);
  if (g > 1) {
    // sum(a_i x_i) <= -c tightens to sum(a_i/g x_i) <= floor(-c/g)
    for (auto& [v, k] : t.coef) k /= g;
    t.c = ceilDiv(t.c, g);
  }
  Qf q;
  q.kind = Kind::Atom;
  q.atom = AtomKind::Le;
  q.t = std::move(t);
  return mk(std::move(q));
}

namespace {
QfPtr mkDivAtom(Qf::AtomKind kind, Int mod, LinTerm t) {
  bool pos = kind == Qf::AtomKind::Dvd;
  if (mod <= 0) throw DomainError("divisibility modulus must be >= 1");
  if (mod == 1) return Qf::mkBool(pos);
  t.c = posMod(t.c, mod);
  for (auto& [v, k] : t.coef) k = posMod(k, mod);
  t.normalize();
  if (t.isConst()) return Qf::mkBool((t.c == 0) == pos);
  Int g = t.c;
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mod.get_mpz_t());
  Int cg = coeffGcd(t);
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), cg.get_mpz_t());
  if (g > 1) {
    mod /= g;
    t.c /= g;
    for (auto& [v, k] : t.coef) k /= g;
    if (mod == 1) return Qf::mkBool(pos);
  }
  Qf q;
  q.kind = Qf::Kind::Atom;
  q.atom = kind;
  q.mod = std::move(mod);
  q.t = std::move(t);
  return mk(std::move(q));
}
} // namespace

QfPtr Qf::dvd(Int mod, LinTerm t) { return mkDivAtom(AtomKind::Dvd, std::move(mod), std::move(t)); }
QfPtr Qf::ndvd(Int mod, LinTerm t) { return mkDivAtom(AtomKind::Ndvd, std::move(mod), std::move(t)); }

QfPtr Qf::conj(std::vector<QfPtr> kids) {
  std::vector<QfPtr> out;
  for (auto& k : kids) {
    if (k->kind == Kind::True) continue;
    if (k->kind == Kind::False) return mkFalse();
    if (k->kind == Kind::And) {
      out.insert(out.end(), k->kids.begin(), k->kids.end());
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return mkTrue();
  if (out.size() == 1) return out[0];
  Qf q;
  q.kind = Kind::And;
  q.kids = std::move(out);
  return mk(std::move(q));
}

QfPtr Qf::disj(std::vector<QfPtr> kids) {
  std::vector<QfPtr> out;
  for (auto& k : kids) {
    if (k->kind == Kind::False) continue;
    if (k->kind == Kind::True) return mkTrue();
    if (k->kind == Kind::Or) {
      out.insert(out.end(), k->kids.begin(), k->kids.end());
    } else {
      out.push_back(std::move(k));
    }
  }
  if (out.empty()) return mkFalse();
  if (out.size() == 1) return out[0];
  Qf q;
  q.kind = Kind::Or;
  q.kids = std::move(out);
  return mk(std::move(q));
}

std::string Qf::key() const {
  switch (kind) {
  case Kind::True:
    return "T";
  case Kind::False:
    return "F";
  case Kind::Atom: {
    std::ostringstream os;
    switch (atom) {
    case AtomKind::Eq: os << "E"; break;
    case AtomKind::Le: os << "L"; break;
    case AtomKind::Dvd: os << "D" << mod << ":"; break;
    case AtomKind::Ndvd: os << "N" << mod << ":"; break;
    }
    os << t.key();
    return os.str();
  }
  case Kind::And:
  case Kind::Or: {
    std::vector<std::string> ks;
    ks.reserve(kids.size());
    for (const auto& k : kids) ks.push_back(k->key());
    std::sort(ks.begin(), ks.end());
    std::string r = kind == Kind::And ? "(&" : "(|";
    for (const auto& k : ks) {
      r += k;
      r += ";";
    }
    r += ")";
    return r;
  }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// NNF negation, substitution, evaluation
// ---------------------------------------------------------------------------

QfPtr negateNNF(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::True:
    return Qf::mkFalse();
  case Qf::Kind::False:
    return Qf::mkTrue();
  case Qf::Kind::Atom:
    switch (f->atom) {
    case Qf::AtomKind::Eq: {
      LinTerm lo = f->t;
      lo.c += 1; // t <= -1
      LinTerm hi = f->t * Int(-1);
      hi.c += 1; // t >= 1
      return Qf::disj({Qf::le(lo), Qf::le(hi)});
    }
    case Qf::AtomKind::Le: {
      LinTerm t = f->t * Int(-1);
      t.c += 1; // t >= 1
      return Qf::le(t);
    }
    case Qf::AtomKind::Dvd:
      return Qf::ndvd(f->mod, f->t);
    case Qf::AtomKind::Ndvd:
      return Qf::dvd(f->mod, f->t);
    }
    break;
  case Qf::Kind::And: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(negateNNF(k));
    return Qf::disj(std::move(ks));
  }
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(negateNNF(k));
    return Qf::conj(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

QfPtr foldNatSigns(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::True:
  case Qf::Kind::False:
    return f;
  case Qf::Kind::Atom: {
    bool allNonNeg = true, allNonPos = true;
    for (const auto& [v, k] : f->t.coef) {
      allNonNeg = allNonNeg && k >= 0;
      allNonPos = allNonPos && k <= 0;
    }
    switch (f->atom) {
    case Qf::AtomKind::Eq:
      // canonical Eq atoms have a positive leading coefficient
      if (allNonNeg && f->t.c > 0) return Qf::mkFalse();
      return f;
    case Qf::AtomKind::Le:
      if (allNonNeg && f->t.c > 0) return Qf::mkFalse();
      if (allNonPos && f->t.c <= 0) return Qf::mkTrue();
      return f;
    default:
      return f;
    }
  }
  case Qf::Kind::And: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(foldNatSigns(k));
    return Qf::conj(std::move(ks));
  }
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(foldNatSigns(k));
    return Qf::disj(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

QfPtr substituteQf(const QfPtr& f, const std::string& v, const LinTerm& by) {
  switch (f->kind) {
  case Qf::Kind::True:
  case Qf::Kind::False:
    return f;
  case Qf::Kind::Atom: {
    if (!f->t.coef.count(v)) return f;
    LinTerm t = f->t.substituted(v, by);
    switch (f->atom) {
    case Qf::AtomKind::Eq: return Qf::eq(std::move(t));
    case Qf::AtomKind::Le: return Qf::le(std::move(t));
    case Qf::AtomKind::Dvd: return Qf::dvd(f->mod, std::move(t));
    case Qf::AtomKind::Ndvd: return Qf::ndvd(f->mod, std::move(t));
    }
    break;
  }
  case Qf::Kind::And:
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(substituteQf(k, v, by));
    return f->kind == Qf::Kind::And ? Qf::conj(std::move(ks)) : Qf::disj(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

bool evalQf(const QfPtr& f, const Assignment& sigma) {
  switch (f->kind) {
  case Qf::Kind::True:
    return true;
  case Qf::Kind::False:
    return false;
  case Qf::Kind::Atom: {
    Int v = f->t.eval(sigma);
    switch (f->atom) {
    case Qf::AtomKind::Eq: return v == 0;
    case Qf::AtomKind::Le: return v <= 0;
    case Qf::AtomKind::Dvd: return mpz_divisible_p(v.get_mpz_t(), f->mod.get_mpz_t()) != 0;
    case Qf::AtomKind::Ndvd: return mpz_divisible_p(v.get_mpz_t(), f->mod.get_mpz_t()) == 0;
    }
    break;
  }
  case Qf::Kind::And:
    for (const auto& k : f->kids)
      if (!evalQf(k, sigma)) return false;
    return true;
  case Qf::Kind::Or:
    for (const auto& k : f->kids)
      if (evalQf(k, sigma)) return true;
    return false;
  }
  throw DomainError("bad qf node");
}

void collectVars(const QfPtr& f, std::set<std::string>& out) {
  if (f->kind == Qf::Kind::Atom) {
    for (const auto& [v, k] : f->t.coef) out.insert(v);
  } else {
    for (const auto& k : f->kids) collectVars(k, out);
  }
}

std::int64_t countNodes(const QfPtr& f) {
  std::int64_t n = 1;
  for (const auto& k : f->kids) n += countNodes(k);
  return n;
}

// ---------------------------------------------------------------------------
// Simplifier
// ---------------------------------------------------------------------------

namespace {

QfPtr simp(const QfPtr& f);

std::string coefKey(const LinTerm& t) {
  LinTerm d = t;
  d.c = 0;
  return d.key();
}

// Compare a fact `p` of the form mod | t against a Dvd atom `b`:
// 1 when p is b, -1 when they fix different residues of the same term.
int cmpDvdFact(const QfPtr& p, const QfPtr& b) {
  if (p->kind != Qf::Kind::Atom) return 0;
  if (p->key() == b->key()) return 1;
  if (p->mod == b->mod && coefKey(p->t) == coefKey(b->t) && p->t.c != b->t.c)
    return -1;
  return 0;
}

// Entailment between atoms: 1 if a implies b, -1 if a contradicts b, else 0.
int entail(const QfPtr& a, const QfPtr& b) {
  if (a->kind != Qf::Kind::Atom || b->kind != Qf::Kind::Atom) return 0;
  if (a->key() == b->key()) return 1;
  using AK = Qf::AtomKind;
  const bool bDvdish = b->atom == AK::Dvd || b->atom == AK::Ndvd;

  if (a->atom == AK::Le && b->atom == AK::Le) {
    if (coefKey(a->t) == coefKey(b->t)) return b->t.c <= a->t.c ? 1 : 0;
    if (coefKey(a->t * Int(-1)) == coefKey(b->t))
      return a->t.c + b->t.c > 0 ? -1 : 0;
    return 0;
  }

  if (a->atom == AK::Eq) {
    bool same = coefKey(a->t) == coefKey(b->t);
    bool opp = coefKey(a->t * Int(-1)) == coefKey(b->t);
    if (b->atom == AK::Le && (same || opp)) {
      Int bound = same ? a->t.c : -a->t.c;
      return b->t.c <= bound ? 1 : -1;
    }
    if (b->atom == AK::Eq && same) return b->t.c == a->t.c ? 1 : -1;
    if (bDvdish) {
      for (const LinTerm& t : {a->t, a->t * Int(-1)}) {
        int r = cmpDvdFact(Qf::dvd(b->mod, t), b->atom == AK::Dvd ? b
                                                                  : Qf::dvd(b->mod, b->t));
        if (r != 0) return b->atom == AK::Dvd ? r : -r;
      }
    }
    return 0;
  }

  if (a->atom == AK::Dvd && bDvdish) {
    QfPtr bPos = b->atom == AK::Dvd ? b : Qf::dvd(b->mod, b->t);
    if (bPos->kind != Qf::Kind::Atom) return 0;
    int r = 0;
    if (mpz_divisible_p(a->mod.get_mpz_t(), bPos->mod.get_mpz_t()))
      r = cmpDvdFact(Qf::dvd(bPos->mod, a->t), bPos);
    if (r == 0) {
      Int g = gcd(a->mod, bPos->mod);
      if (g > 1) {
        QfPtr pa = Qf::dvd(g, a->t), pb = Qf::dvd(g, bPos->t);
        if (cmpDvdFact(pa, pb) == -1) r = -1;
      }
    }
    return b->atom == AK::Dvd ? r : -r;
  }
  return 0;
}

// Rewrite f under the assumption that every atom in ctx holds. Returns the
// original pointer when nothing changes.
QfPtr assumeAtoms(const QfPtr& f, const std::vector<QfPtr>& ctx) {
  switch (f->kind) {
  case Qf::Kind::True:
  case Qf::Kind::False:
    return f;
  case Qf::Kind::Atom:
    for (const auto& c : ctx) {
      int e = entail(c, f);
      if (e == 1) return Qf::mkTrue();
      if (e == -1) return Qf::mkFalse();
    }
    return f;
  case Qf::Kind::And:
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    bool changed = false;
    for (const auto& k : f->kids) {
      QfPtr nk = assumeAtoms(k, ctx);
      changed = changed || nk.get() != k.get();
      ks.push_back(std::move(nk));
    }
    if (!changed) return f;
    return f->kind == Qf::Kind::And ? Qf::conj(std::move(ks)) : Qf::disj(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

// The negation of an atom as a disjunction (Eq splits into two bounds).
std::vector<QfPtr> negAtom(const QfPtr& a) {
  using AK = Qf::AtomKind;
  LinTerm m = a->t * Int(-1);
  switch (a->atom) {
  case AK::Le:
    m.c += 1;
    return {Qf::le(m)};
  case AK::Eq: {
    LinTerm p = a->t;
    p.c += 1;
    m.c += 1;
    return {Qf::le(p), Qf::le(m)};
  }
  case AK::Dvd:
    return {Qf::ndvd(a->mod, a->t)};
  case AK::Ndvd:
    return {Qf::dvd(a->mod, a->t)};
  }
  return {};
}

// a | b covers everything when every branch of !a forces b.
bool tautOr(const QfPtr& a, const QfPtr& b) {
  for (const auto& n : negAtom(a)) {
    if (n->kind == Qf::Kind::False) continue;
    if (n->kind != Qf::Kind::Atom || entail(n, b) != 1) return false;
  }
  return true;
}

// True if f is a disjunction of atoms (or a single atom); fills keys.
bool orAtomKeys(const QfPtr& f, std::set<std::string>& keys) {
  if (f->kind == Qf::Kind::Atom) {
    keys.insert(f->key());
    return true;
  }
  if (f->kind == Qf::Kind::Or) {
    for (const auto& k : f->kids) {
      if (k->kind != Qf::Kind::Atom) return false;
      keys.insert(k->key());
    }
    return true;
  }
  return false;
}

// One conjunction-local pass. Returns the simplified node.
QfPtr simpAnd(std::vector<QfPtr> kids) {
  for (int round = 0; round < 64; ++round) {
    QfPtr flat = Qf::conj(std::move(kids));
    if (flat->kind != Qf::Kind::And) return flat;
    kids = flat->kids;

    // Dedupe by structural key.
    {
      std::set<std::string> seen;
      std::vector<QfPtr> out;
      for (auto& k : kids)
        if (seen.insert(k->key()).second) out.push_back(std::move(k));
      kids = std::move(out);
    }

    // Equality substitution: an Eq atom with a unit-coefficient variable
    // rewrites that variable away in every sibling.
    bool changed = false;
    for (std::size_t i = 0; i < kids.size() && !changed; ++i) {
      const QfPtr& e = kids[i];
      if (e->kind != Qf::Kind::Atom || e->atom != Qf::AtomKind::Eq) continue;
      for (const auto& [v, a] : e->t.coef) {
        if (a != 1 && a != -1) continue;
        bool used = false;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (j == i) continue;
          std::set<std::string> vs;
          collectVars(kids[j], vs);
          if (vs.count(v)) {
            used = true;
            break;
          }
        }
        if (!used) continue;
        // t = a*v + r = 0  =>  v = -a*r
        LinTerm rest = e->t;
        rest.coef.erase(v);
        LinTerm expr = rest * Int(-a);
        std::vector<QfPtr> out;
        out.reserve(kids.size());
        for (std::size_t j = 0; j < kids.size(); ++j)
          out.push_back(j == i ? kids[j] : simp(substituteQf(kids[j], v, expr)));
        kids = std::move(out);
        changed = true;
        break;
      }
    }
    if (changed) continue;

    // Pairwise atom reasoning: contradictions kill the conjunction,
    // implied atoms are dropped.
    {
      std::vector<bool> dropA(kids.size(), false);
      bool any = false;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (kids[i]->kind != Qf::Kind::Atom || dropA[i]) continue;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (i == j || kids[j]->kind != Qf::Kind::Atom || dropA[j]) continue;
          int e = entail(kids[i], kids[j]);
          if (e == -1) return Qf::mkFalse();
          if (e == 1) dropA[j] = any = true;
        }
      }
      if (any) {
        std::vector<QfPtr> out;
        for (std::size_t i = 0; i < kids.size(); ++i)
          if (!dropA[i]) out.push_back(kids[i]);
        kids = std::move(out);
        continue;
      }
    }

    // Assume the conjunction's atoms inside its composite kids.
    {
      std::vector<QfPtr> atoms;
      for (const auto& k : kids)
        if (k->kind == Qf::Kind::Atom) atoms.push_back(k);
      if (!atoms.empty()) {
        bool any = false;
        std::vector<QfPtr> out;
        out.reserve(kids.size());
        for (const auto& k : kids) {
          if (k->kind == Qf::Kind::Atom) {
            out.push_back(k);
            continue;
          }
          QfPtr nk = assumeAtoms(k, atoms);
          if (nk.get() != k.get()) {
            any = true;
            nk = simp(nk);
          }
          out.push_back(std::move(nk));
        }
        if (any) {
          kids = std::move(out);
          continue;
        }
      }
    }

    // Clause subsumption: a disjunction of atoms implies any sibling clause
    // whose atom set contains it, so the superset clause goes.
    {
      std::vector<std::set<std::string>> ck(kids.size());
      std::vector<bool> clause(kids.size());
      for (std::size_t i = 0; i < kids.size(); ++i)
        clause[i] = kids[i]->kind == Qf::Kind::Or && orAtomKeys(kids[i], ck[i]);
      std::vector<bool> dropC(kids.size(), false);
      bool any = false;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (!clause[i] || dropC[i]) continue;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (i == j || !clause[j] || dropC[j]) continue;
          if (ck[i].size() < ck[j].size() ||
              (ck[i].size() == ck[j].size() && i < j)) {
            if (std::includes(ck[j].begin(), ck[j].end(), ck[i].begin(),
                              ck[i].end()))
              dropC[j] = any = true;
          }
        }
      }
      if (any) {
        std::vector<QfPtr> out;
        for (std::size_t i = 0; i < kids.size(); ++i)
          if (!dropC[i]) out.push_back(kids[i]);
        kids = std::move(out);
        continue;
      }
    }

    // Bound tightening: for Le atoms sharing a coefficient direction keep
    // the tightest; opposite directions give contradictions or equalities.
    std::map<std::string, std::size_t> bestLe; // direction key -> index
    std::vector<bool> drop(kids.size(), false);
    auto dirKey = [](const LinTerm& t) { return coefKey(t); };
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const QfPtr& k = kids[i];
      if (k->kind != Qf::Kind::Atom || k->atom != Qf::AtomKind::Le) continue;
      std::string dk = dirKey(k->t);
      auto it = bestLe.find(dk);
      if (it == bestLe.end()) {
        bestLe[dk] = i;
      } else if (k->t.c > kids[it->second]->t.c) { // larger c is tighter
        drop[it->second] = true;
        it->second = i;
      } else {
        drop[i] = true;
      }
    }
    std::vector<QfPtr> extra;
    for (const auto& [dk, i] : bestLe) {
      LinTerm neg = kids[i]->t * Int(-1);
      neg.c = 0;
      auto it = bestLe.find(neg.key());
      if (it == bestLe.end() || it->first < dk) continue; // handle each pair once
      const LinTerm& a = kids[i]->t;           // a <= 0
      const LinTerm& b = kids[it->second]->t;  // b <= 0, b = -a + (a.c + b.c)
      Int slack = a.c + b.c; // a + b = slack as constants cancel vars
      if (slack > 0) return Qf::mkFalse();
      if (slack == 0) {
        drop[i] = drop[it->second] = true;
        extra.push_back(Qf::eq(a));
        changed = true;
      }
    }
    std::vector<QfPtr> out;
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (!drop[i]) out.push_back(kids[i]);
    out.insert(out.end(), extra.begin(), extra.end());
    kids = std::move(out);
    if (!changed) return Qf::conj(std::move(kids));
  }
  return Qf::conj(std::move(kids));
}

// True if f is a conjunction of atoms (or a single atom); fills keys.
bool atomKeys(const QfPtr& f, std::set<std::string>& keys) {
  if (f->kind == Qf::Kind::Atom) {
    keys.insert(f->key());
    return true;
  }
  if (f->kind == Qf::Kind::And) {
    for (const auto& k : f->kids) {
      if (k->kind != Qf::Kind::Atom) return false;
      keys.insert(k->key());
    }
    return true;
  }
  return false;
}

QfPtr simpOr(std::vector<QfPtr> kids) {
  QfPtr flat = Qf::disj(std::move(kids));
  if (flat->kind != Qf::Kind::Or) return flat;
  kids = flat->kids;

  std::set<std::string> seen;
  std::vector<QfPtr> out;
  for (auto& k : kids)
    if (seen.insert(k->key()).second) out.push_back(std::move(k));
  kids = std::move(out);

  // A disjunction of congruences on one linear part covering every residue
  // class is true.
  {
    std::map<std::pair<std::string, Int>, std::set<Int>> cover;
    for (const auto& k : kids)
      if (k->kind == Qf::Kind::Atom && k->atom == Qf::AtomKind::Dvd &&
          k->mod <= 256) {
        auto& got = cover[{coefKey(k->t), k->mod}];
        got.insert(k->t.c);
        if (got.size() == k->mod.get_ui()) return Qf::mkTrue();
      }
  }

  // Pairwise atom reasoning, dual to the conjunction pass: a pair whose
  // union covers everything makes the disjunction true; an atom forcing a
  // sibling is redundant.
  {
    bool again = true;
    while (again) {
      again = false;
      for (std::size_t i = 0; i < kids.size() && !again; ++i) {
        if (kids[i]->kind != Qf::Kind::Atom) continue;
        for (std::size_t j = 0; j < kids.size(); ++j) {
          if (i == j || kids[j]->kind != Qf::Kind::Atom) continue;
          if (tautOr(kids[i], kids[j])) return Qf::mkTrue();
          if (entail(kids[i], kids[j]) == 1) {
            kids.erase(kids.begin() + i);
            again = true;
            break;
          }
        }
      }
    }
  }

  // Composite branches may assume the negation of every atom branch.
  {
    std::vector<QfPtr> negs;
    for (const auto& k : kids)
      if (k->kind == Qf::Kind::Atom) {
        auto n = negAtom(k);
        if (n.size() == 1 && n[0]->kind == Qf::Kind::Atom)
          negs.push_back(n[0]);
      }
    if (!negs.empty())
      for (auto& k : kids) {
        if (k->kind == Qf::Kind::Atom) continue;
        QfPtr nk = assumeAtoms(k, negs);
        if (nk.get() != k.get()) k = simp(nk);
      }
    QfPtr flat2 = Qf::disj(std::move(kids));
    if (flat2->kind != Qf::Kind::Or) return flat2;
    kids = flat2->kids;
  }

  // Subsumption between pure conjunctions: fewer atoms = weaker = keeps.
  std::vector<std::set<std::string>> keys(kids.size());
  std::vector<bool> pure(kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i) pure[i] = atomKeys(kids[i], keys[i]);
  std::vector<bool> drop(kids.size(), false);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!pure[i] || drop[i]) continue;
    for (std::size_t j = 0; j < kids.size(); ++j) {
      if (i == j || !pure[j] || drop[j]) continue;
      if (keys[i].size() < keys[j].size() ||
          (keys[i].size() == keys[j].size() && i < j)) {
        if (std::includes(keys[j].begin(), keys[j].end(), keys[i].begin(), keys[i].end()))
          drop[j] = true;
      }
    }
  }
  out.clear();
  for (std::size_t i = 0; i < kids.size(); ++i)
    if (!drop[i]) out.push_back(kids[i]);
  return Qf::disj(std::move(out));
}

QfPtr simp(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::True:
  case Qf::Kind::False:
  case Qf::Kind::Atom:
    return f;
  case Qf::Kind::And: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(simp(k));
    return simpAnd(std::move(ks));
  }
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(simp(k));
    return simpOr(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

} // namespace

QfPtr simplifyQf(const QfPtr& f) { return simp(f); }

QfPtr caseSplitResidues(const QfPtr& f) {
  // lcm of the congruence moduli seen per variable
  std::map<std::string, Int> mods;
  std::function<void(const QfPtr&)> scan = [&](const QfPtr& g) {
    if (g->kind == Qf::Kind::Atom) {
      if (g->atom == Qf::AtomKind::Dvd || g->atom == Qf::AtomKind::Ndvd)
        for (const auto& [v, a] : g->t.coef)
          mods[v] = mods[v] == 0 ? g->mod : lcm(mods[v], g->mod);
      return;
    }
    for (const auto& k : g->kids) scan(k);
  };
  scan(f);
  std::vector<std::pair<std::string, Int>> vars;
  Int total = 1;
  for (const auto& [v, m] : mods) {
    if (m <= 1) continue;
    total *= m;
    if (total > 128) return f;
    vars.emplace_back(v, m);
  }
  if (vars.empty()) return f;

  std::vector<QfPtr> pieces;
  std::vector<Int> r(vars.size(), 0);
  for (;;) {
    std::vector<QfPtr> branch;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      LinTerm t;
      t.coef[vars[i].first] = 1;
      t.c = -r[i];
      branch.push_back(Qf::dvd(vars[i].second, t));
    }
    QfPtr g = simp(assumeAtoms(f, branch));
    if (g->kind != Qf::Kind::False) {
      branch.push_back(std::move(g));
      pieces.push_back(Qf::conj(std::move(branch)));
    }
    std::size_t i = 0;
    while (i < vars.size() && ++r[i] == vars[i].second) r[i++] = 0;
    if (i == vars.size()) break;
  }
  // Moderate growth is acceptable: the branches are conjunction-rooted with
  // their congruences decided, which the eliminator handles far better than
  // congruence-guarded clause form.
  QfPtr out = Qf::disj(std::move(pieces));
  return countNodes(out) < 3 * countNodes(f) ? out : f;
}

// ---------------------------------------------------------------------------
// DNF and Ndvd expansion
// ---------------------------------------------------------------------------

std::vector<std::vector<QfPtr>> toDNF(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::True:
    return {{}};
  case Qf::Kind::False:
    return {};
  case Qf::Kind::Atom:
    return {{f}};
  case Qf::Kind::Or: {
    std::vector<std::vector<QfPtr>> out;
    for (const auto& k : f->kids) {
      auto sub = toDNF(k);
      out.insert(out.end(), sub.begin(), sub.end());
      chargeBudget(static_cast<std::int64_t>(sub.size()));
    }
    return out;
  }
  case Qf::Kind::And: {
    std::vector<std::vector<QfPtr>> out = {{}};
    for (const auto& k : f->kids) {
      auto sub = toDNF(k);
      std::vector<std::vector<QfPtr>> next;
      next.reserve(out.size() * sub.size());
      chargeBudget(static_cast<std::int64_t>(out.size() * sub.size()));
      for (const auto& a : out)
        for (const auto& b : sub) {
          std::vector<QfPtr> c = a;
          c.insert(c.end(), b.begin(), b.end());
          next.push_back(std::move(c));
        }
      out = std::move(next);
    }
    return out;
  }
  }
  throw DomainError("bad qf node");
}

QfPtr expandNdvd(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::True:
  case Qf::Kind::False:
    return f;
  case Qf::Kind::Atom: {
    if (f->atom != Qf::AtomKind::Ndvd) return f;
    std::vector<QfPtr> cases;
    for (Int r = 1; r < f->mod; ++r) {
      LinTerm t = f->t;
      t.c -= r;
      cases.push_back(Qf::dvd(f->mod, std::move(t)));
    }
    return Qf::disj(std::move(cases));
  }
  case Qf::Kind::And:
  case Qf::Kind::Or: {
    std::vector<QfPtr> ks;
    ks.reserve(f->kids.size());
    for (const auto& k : f->kids) ks.push_back(expandNdvd(k));
    return f->kind == Qf::Kind::And ? Qf::conj(std::move(ks)) : Qf::disj(std::move(ks));
  }
  }
  throw DomainError("bad qf node");
}

// ---------------------------------------------------------------------------
// Surface bridge
// ---------------------------------------------------------------------------

namespace {

LinTerm termToLin(const TermPtr& t) {
  switch (t->kind) {
  case Term::Kind::Var:
    return LinTerm::variable(t->name);
  case Term::Kind::Num:
    return LinTerm(t->value);
  case Term::Kind::Sum:
    return termToLin(t->lhs) + termToLin(t->rhs);
  case Term::Kind::Mul:
    return termToLin(t->lhs) * t->value;
  }
  throw DomainError("bad term");
}

TermPtr linPartToTerm(const LinTerm& t) {
  // All coefficients assumed non-negative here.
  TermPtr acc;
  for (const auto& [v, k] : t.coef) {
    TermPtr f = k == 1 ? Term::var(v) : Term::mul(k, Term::var(v));
    acc = acc ? Term::sum(acc, f) : f;
  }
  if (t.c > 0 || !acc) {
    TermPtr n = Term::num(t.c);
    acc = acc ? Term::sum(acc, n) : n;
  }
  return acc;
}

void splitSides(const LinTerm& t, LinTerm& pos, LinTerm& neg) {
  // t = pos - neg with both sides non-negative.
  for (const auto& [v, k] : t.coef)
    (k > 0 ? pos : neg).coef[v] = k > 0 ? k : -k;
  (t.c >= 0 ? pos : neg).c = t.c >= 0 ? t.c : -t.c;
}

} // namespace

QfPtr atomToQf(const Formula& a) {
  LinTerm l = termToLin(a.tl);
  LinTerm r = termToLin(a.tr);
  switch (a.rel) {
  case Rel::Eq:
    return Qf::eq(l - r);
  case Rel::Ne:
    return negateNNF(Qf::eq(l - r));
  case Rel::Lt: {
    LinTerm t = l - r;
    t.c += 1;
    return Qf::le(t);
  }
  case Rel::Le:
    return Qf::le(l - r);
  case Rel::Gt: {
    LinTerm t = r - l;
    t.c += 1;
    return Qf::le(t);
  }
  case Rel::Ge:
    return Qf::le(r - l);
  case Rel::Cong:
    return Qf::dvd(a.modulus, l - r);
  }
  throw DomainError("bad relation");
}

FormulaPtr toSurface(const QfPtr& f) {
  switch (f->kind) {
  case Qf::Kind::True:
    return Formula::top();
  case Qf::Kind::False:
    return Formula::bottom();
  case Qf::Kind::Atom: {
    LinTerm pos, neg;
    splitSides(f->t, pos, neg);
    switch (f->atom) {
    case Qf::AtomKind::Eq:
      return Formula::atom(Rel::Eq, linPartToTerm(pos), linPartToTerm(neg));
    case Qf::AtomKind::Le:
      return Formula::atom(Rel::Le, linPartToTerm(pos), linPartToTerm(neg));
    case Qf::AtomKind::Dvd:
      return Formula::cong(linPartToTerm(pos), linPartToTerm(neg), f->mod);
    case Qf::AtomKind::Ndvd:
      return Formula::negation(Formula::cong(linPartToTerm(pos), linPartToTerm(neg), f->mod));
    }
    break;
  }
  case Qf::Kind::And: {
    FormulaPtr r = toSurface(f->kids[0]);
    for (std::size_t i = 1; i < f->kids.size(); ++i) r = Formula::conj(r, toSurface(f->kids[i]));
    return r;
  }
  case Qf::Kind::Or: {
    FormulaPtr r = toSurface(f->kids[0]);
    for (std::size_t i = 1; i < f->kids.size(); ++i) r = Formula::disj(r, toSurface(f->kids[i]));
    return r;
  }
  }
  throw DomainError("bad qf node");
}

} // namespace presburger
