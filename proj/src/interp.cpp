// Interpretations of linear orderings in (N, +): loading, order-axiom
// validation by decision, internal comparisons, and synthesis of the
// same-galaxy and least-representative predicates.

#include "presburger/interp.hpp"

#include <json.hpp>

#include <algorithm>

#include "presburger/errors.hpp"

namespace presburger {

namespace {

std::string tv(const std::string& prefix, std::size_t i) {
  return prefix + std::to_string(i + 1);
}

// Simultaneous tuple renaming {x -> left, y -> right} through throwaway
// names, so swaps are safe.
FormulaPtr renameTuples(const FormulaPtr& f, std::size_t m, const std::string& left,
                        const std::string& right) {
  FormulaPtr g = f;
  for (std::size_t i = 0; i < m; ++i) g = renameVar(g, tv("x", i), tv("uu", i));
  for (std::size_t i = 0; i < m; ++i) g = renameVar(g, tv("y", i), tv("vv", i));
  for (std::size_t i = 0; i < m; ++i) g = renameVar(g, tv("uu", i), tv(left, i));
  for (std::size_t i = 0; i < m; ++i) g = renameVar(g, tv("vv", i), tv(right, i));
  return g;
}

FormulaPtr substTuple(FormulaPtr f, std::size_t m, const std::string& prefix,
                      const Vec& a) {
  for (std::size_t i = 0; i < m; ++i) f = substitute(f, tv(prefix, i), a[i]);
  return f;
}

FormulaPtr forallTuple(FormulaPtr body, std::size_t m, const std::string& prefix) {
  for (std::size_t i = m; i-- > 0;) body = Formula::forall(tv(prefix, i), body);
  return body;
}

void checkVars(const FormulaPtr& f, std::size_t m, bool twoTuples,
               const std::string& what) {
  std::set<std::string> allowed;
  for (std::size_t i = 0; i < m; ++i) {
    allowed.insert(tv("x", i));
    if (twoTuples) allowed.insert(tv("y", i));
  }
  for (const auto& v : freeVars(f))
    if (!allowed.count(v))
      throw DomainError(what + " uses unexpected variable " + v);
}

} // namespace

Interpretation Interpretation::make(std::string name, std::size_t m, FormulaPtr domain,
                                    FormulaPtr less, FormulaPtr equality) {
  if (m == 0) throw DomainError("dimension must be positive");
  checkVars(domain, m, false, "domain formula");
  checkVars(less, m, true, "comparison formula");
  if (equality) checkVars(equality, m, true, "equality formula");
  return Interpretation{std::move(name), m, std::move(domain), std::move(less),
                        std::move(equality)};
}

Interpretation parseInterpretation(const std::string& jsonText) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(jsonText);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(e.what(), 0);
  }
  if (!j.is_object() || !j.contains("name") || !j.contains("dim") ||
      !j.contains("domain") || !j.contains("less"))
    throw ParseError("interpretation needs name, dim, domain, less", 0);
  if (!j["name"].is_string() || !j["dim"].is_number_unsigned() ||
      !j["domain"].is_string() || !j["less"].is_string())
    throw ParseError("malformed interpretation field types", 0);
  FormulaPtr eq;
  if (j.contains("equality")) {
    if (!j["equality"].is_string()) throw ParseError("equality must be a string", 0);
    eq = parse(j["equality"].get<std::string>());
  }
  return Interpretation::make(j["name"].get<std::string>(),
                              j["dim"].get<std::size_t>(),
                              parse(j["domain"].get<std::string>()),
                              parse(j["less"].get<std::string>()), std::move(eq));
}

std::string interpretationToJson(const Interpretation& I) {
  nlohmann::json j;
  j["name"] = I.name;
  j["dim"] = I.m;
  j["domain"] = print(I.domain);
  j["less"] = print(I.less);
  if (I.equality) j["equality"] = print(I.equality);
  return j.dump(2);
}

FormulaPtr domainAt(const Interpretation& I, const std::string& prefix) {
  FormulaPtr g = I.domain;
  for (std::size_t i = 0; i < I.m; ++i) g = renameVar(g, tv("x", i), tv("uu", i));
  for (std::size_t i = 0; i < I.m; ++i) g = renameVar(g, tv("uu", i), tv(prefix, i));
  return g;
}

FormulaPtr lessBetween(const Interpretation& I, const std::string& leftPrefix,
                       const std::string& rightPrefix) {
  return renameTuples(I.less, I.m, leftPrefix, rightPrefix);
}

FormulaPtr equalityBetween(const Interpretation& I, const std::string& leftPrefix,
                           const std::string& rightPrefix) {
  if (I.equality) return renameTuples(I.equality, I.m, leftPrefix, rightPrefix);
  std::vector<FormulaPtr> eqs;
  for (std::size_t i = 0; i < I.m; ++i)
    eqs.push_back(Formula::atom(Rel::Eq, Term::var(tv(leftPrefix, i)),
                                Term::var(tv(rightPrefix, i))));
  return conjoinAll(eqs);
}

ValidationReport validate(const Interpretation& I, const QelimOptions& opts) {
  ValidationReport rep;
  std::size_t m = I.m;
  FormulaPtr Dx = domainAt(I, "x");
  FormulaPtr Dy = domainAt(I, "y");
  FormulaPtr Dz = domainAt(I, "z");

  auto closed = [&](FormulaPtr body, int tuples) {
    if (tuples >= 3) body = forallTuple(body, m, "z");
    if (tuples >= 2) body = forallTuple(body, m, "y");
    return forallTuple(body, m, "x");
  };
  auto record = [&](const std::string& axiom, const FormulaPtr& sentence) {
    rep.axioms.push_back({axiom, decide(sentence, opts)});
  };

  if (I.equality) {
    record("equality reflexive",
           closed(Formula::implies(Dx, equalityBetween(I, "x", "x")), 1));
    record("equality symmetric",
           closed(Formula::implies(
                      conjoinAll({Dx, Dy, equalityBetween(I, "x", "y")}),
                      equalityBetween(I, "y", "x")),
                  2));
    record("equality transitive",
           closed(Formula::implies(
                      conjoinAll({Dx, Dy, Dz, equalityBetween(I, "x", "y"),
                                  equalityBetween(I, "y", "z")}),
                      equalityBetween(I, "x", "z")),
                  3));
    FormulaPtr congr = Formula::conj(
        Formula::implies(lessBetween(I, "x", "z"), lessBetween(I, "y", "z")),
        Formula::implies(lessBetween(I, "z", "x"), lessBetween(I, "z", "y")));
    record("comparison respects equality",
           closed(Formula::implies(
                      conjoinAll({Dx, Dy, Dz, equalityBetween(I, "x", "y")}),
                      congr),
                  3));
  } else {
    // absolute equality: the equivalence and congruence axioms are identities
    for (const char* ax : {"equality reflexive", "equality symmetric",
                           "equality transitive", "comparison respects equality"})
      rep.axioms.push_back({ax, true});
  }

  record("irreflexive",
         closed(Formula::implies(Dx, Formula::negation(lessBetween(I, "x", "x"))), 1));
  record("transitive",
         closed(Formula::implies(
                    conjoinAll({Dx, Dy, Dz, lessBetween(I, "x", "y"),
                                lessBetween(I, "y", "z")}),
                    lessBetween(I, "x", "z")),
                3));
  record("total",
         closed(Formula::implies(
                    Formula::conj(Dx, Dy),
                    disjoinAll({lessBetween(I, "x", "y"), lessBetween(I, "y", "x"),
                                equalityBetween(I, "x", "y")})),
                2));

  rep.ok = true;
  for (const auto& a : rep.axioms) rep.ok = rep.ok && a.holds;
  return rep;
}

bool inDomain(const Interpretation& I, const Vec& a) {
  if (a.size() != I.m) throw DomainError("point arity mismatch");
  return decide(substTuple(I.domain, I.m, "x", a));
}

bool internalLess(const Interpretation& I, const Vec& a, const Vec& b) {
  if (!inDomain(I, a) || !inDomain(I, b)) throw DomainError("point outside domain");
  return decide(substTuple(substTuple(I.less, I.m, "x", a), I.m, "y", b));
}

AscendingPrefix enumerateAscending(const Interpretation& I, std::size_t count,
                                   long boxBound) {
  // one elimination each, then plain evaluation per point / pair
  FormulaPtr domQf = simplify(eliminate(I.domain));
  FormulaPtr lessQf = simplify(eliminate(I.less));

  std::vector<Vec> pts;
  Vec v(I.m, 0);
  for (;;) {
    Assignment s;
    for (std::size_t i = 0; i < I.m; ++i) s[tv("x", i)] = v[i];
    if (evaluate(domQf, s)) pts.push_back(v);
    std::size_t i = 0;
    while (i < I.m && ++v[i] > boxBound) v[i++] = 0;
    if (i == I.m) break;
  }
  std::sort(pts.begin(), pts.end(), [&](const Vec& a, const Vec& b) {
    Assignment s;
    for (std::size_t i = 0; i < I.m; ++i) {
      s[tv("x", i)] = a[i];
      s[tv("y", i)] = b[i];
    }
    return evaluate(lessQf, s);
  });

  AscendingPrefix out;
  out.truncated = pts.size() < count;
  if (pts.size() > count) pts.resize(count);
  out.points = std::move(pts);
  return out;
}

FormulaPtr sameGalaxyFormula(const Interpretation& I) {
  std::size_t m = I.m;
  FormulaPtr between = Formula::disj(
      Formula::conj(lessBetween(I, "x", "zz"), lessBetween(I, "zz", "y")),
      Formula::conj(lessBetween(I, "y", "zz"), lessBetween(I, "zz", "x")));
  std::vector<FormulaPtr> caps;
  for (std::size_t i = 0; i < m; ++i)
    caps.push_back(Formula::atom(Rel::Le, Term::var(tv("zz", i)), Term::var("bb")));
  FormulaPtr inner = Formula::implies(Formula::conj(domainAt(I, "zz"), between),
                                      conjoinAll(caps));
  FormulaPtr bounded = Formula::exists("bb", forallTuple(inner, m, "zz"));
  return conjoinAll({domainAt(I, "x"), domainAt(I, "y"), bounded});
}

FormulaPtr lexMinRepresentativeFormula(const Interpretation& I) {
  std::size_t m = I.m;
  // use the galaxy relation in eliminated form: only the outer universal
  // tuple is left for downstream eliminations to deal with
  FormulaPtr T = simplify(eliminate(sameGalaxyFormula(I)));

  std::vector<FormulaPtr> diff;
  for (std::size_t i = 0; i < m; ++i)
    diff.push_back(Formula::atom(Rel::Ne, Term::var(tv("x", i)), Term::var(tv("y", i))));
  FormulaPtr neq = disjoinAll(diff);

  std::vector<FormulaPtr> lexCases;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<FormulaPtr> conj;
    for (std::size_t j = 0; j < i; ++j)
      conj.push_back(Formula::atom(Rel::Eq, Term::var(tv("x", j)), Term::var(tv("y", j))));
    conj.push_back(Formula::atom(Rel::Lt, Term::var(tv("x", i)), Term::var(tv("y", i))));
    lexCases.push_back(conjoinAll(conj));
  }
  FormulaPtr lexLess = disjoinAll(lexCases);

  FormulaPtr body = Formula::implies(Formula::conj(T, neq), lexLess);
  return Formula::conj(domainAt(I, "x"), forallTuple(body, m, "y"));
}

} // namespace presburger
