#include "presburger/formula.hpp"

#include <cctype>
#include <sstream>
#include <vector>

#include "presburger/budget.hpp"
#include "presburger/errors.hpp"

namespace presburger {

namespace {
thread_local Budget* g_budget = nullptr;
} // namespace

Budget* currentBudget() { return g_budget; }

BudgetScope::BudgetScope(Budget& b) : prev_(g_budget) { g_budget = &b; }
BudgetScope::~BudgetScope() { g_budget = prev_; }

// ---------------------------------------------------------------------------
// Term / Formula factories
// ---------------------------------------------------------------------------

TermPtr Term::var(std::string name) {
  chargeBudget();
  auto t = std::make_shared<Term>();
  t->kind = Kind::Var;
  t->name = std::move(name);
  return t;
}

TermPtr Term::num(Int value) {
  if (value < 0) throw DomainError("numerals must be non-negative");
  chargeBudget();
  auto t = std::make_shared<Term>();
  t->kind = Kind::Num;
  t->value = std::move(value);
  return t;
}

TermPtr Term::sum(TermPtr l, TermPtr r) {
  chargeBudget();
  auto t = std::make_shared<Term>();
  t->kind = Kind::Sum;
  t->lhs = std::move(l);
  t->rhs = std::move(r);
  return t;
}

TermPtr Term::mul(Int coeff, TermPtr operand) {
  if (coeff < 0) throw DomainError("scalar coefficients must be non-negative");
  chargeBudget();
  auto t = std::make_shared<Term>();
  t->kind = Kind::Mul;
  t->value = std::move(coeff);
  t->lhs = std::move(operand);
  return t;
}

FormulaPtr Formula::atom(Rel rel, TermPtr l, TermPtr r) {
  chargeBudget();
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Atom;
  f->rel = rel;
  f->tl = std::move(l);
  f->tr = std::move(r);
  return f;
}

FormulaPtr Formula::cong(TermPtr l, TermPtr r, Int modulus) {
  if (modulus < 1) throw DomainError("congruence modulus must be >= 1");
  chargeBudget();
  auto f = std::make_shared<Formula>();
  f->kind = Kind::Atom;
  f->rel = Rel::Cong;
  f->modulus = std::move(modulus);
  f->tl = std::move(l);
  f->tr = std::move(r);
  return f;
}

namespace {
FormulaPtr mkUnary(Formula::Kind k, FormulaPtr a) {
  chargeBudget();
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->a = std::move(a);
  return f;
}
FormulaPtr mkBinary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  chargeBudget();
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}
FormulaPtr mkQuant(Formula::Kind k, std::string v, FormulaPtr body) {
  chargeBudget();
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->var = std::move(v);
  f->a = std::move(body);
  return f;
}
} // namespace

FormulaPtr Formula::negation(FormulaPtr f) { return mkUnary(Kind::Not, std::move(f)); }
FormulaPtr Formula::conj(FormulaPtr l, FormulaPtr r) { return mkBinary(Kind::And, std::move(l), std::move(r)); }
FormulaPtr Formula::disj(FormulaPtr l, FormulaPtr r) { return mkBinary(Kind::Or, std::move(l), std::move(r)); }
FormulaPtr Formula::implies(FormulaPtr l, FormulaPtr r) { return mkBinary(Kind::Implies, std::move(l), std::move(r)); }
FormulaPtr Formula::exists(std::string var, FormulaPtr body) { return mkQuant(Kind::Exists, std::move(var), std::move(body)); }
FormulaPtr Formula::forall(std::string var, FormulaPtr body) { return mkQuant(Kind::Forall, std::move(var), std::move(body)); }

FormulaPtr Formula::top() { return atom(Rel::Eq, Term::num(0), Term::num(0)); }
FormulaPtr Formula::bottom() { return atom(Rel::Lt, Term::num(0), Term::num(0)); }

FormulaPtr conjoinAll(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return Formula::top();
  FormulaPtr r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = Formula::conj(r, fs[i]);
  return r;
}

FormulaPtr disjoinAll(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return Formula::bottom();
  FormulaPtr r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = Formula::disj(r, fs[i]);
  return r;
}

// ---------------------------------------------------------------------------
// Parser
//
//   formula := 'forall' IDENT '.' formula | 'exists' IDENT '.' formula | implic
//   implic  := disj ('->' implic)?
//   disj    := conj ('|' conj)*
//   conj    := neg ('&' neg)*
//   neg     := '!' neg | '(' formula ')' | atom
//   atom    := term REL term | term '==' term 'mod' NUM
//   term    := factor ('+' factor)*
//   factor  := NUM '*' IDENT | NUM | IDENT
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
  explicit Parser(const std::string& text) : s_(text) {}

  FormulaPtr run() {
    FormulaPtr f = formula();
    skipWs();
    if (pos_ != s_.size()) fail("trailing input");
    return f;
  }

private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

  void skipWs() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eatSym(const char* sym) {
    skipWs();
    std::size_t n = std::char_traits<char>::length(sym);
    if (s_.compare(pos_, n, sym) == 0) {
      // '<' must not swallow the front of '<=', '=' of '==', etc.
      if ((std::string(sym) == "<" || std::string(sym) == ">") && pos_ + n < s_.size() && s_[pos_ + n] == '=')
        return false;
      if (std::string(sym) == "=" && pos_ + n < s_.size() && s_[pos_ + n] == '=') return false;
      pos_ += n;
      return true;
    }
    return false;
  }

  bool peekIdentIs(const char* kw) {
    skipWs();
    std::size_t p = pos_;
    std::string id = tryIdent();
    pos_ = p;
    return id == kw;
  }

  std::string tryIdent() {
    skipWs();
    if (pos_ >= s_.size() || !std::islower(static_cast<unsigned char>(s_[pos_]))) return {};
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::islower(static_cast<unsigned char>(s_[pos_])) ||
            std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  std::string ident() {
    std::string id = tryIdent();
    if (id.empty()) fail("expected identifier");
    if (id == "forall" || id == "exists" || id == "mod") fail("keyword used as identifier");
    return id;
  }

  bool peekNum() {
    skipWs();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  Int number() {
    skipWs();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected number");
    std::string digits = s_.substr(start, pos_ - start);
    // Numerals are limited to the machine-word range; larger literals are a
    // hard error rather than a silent wrap.
    if (digits.size() > 19 || (digits.size() == 19 && digits > "9223372036854775807")) {
      pos_ = start;
      fail("numeral exceeds machine-word range");
    }
    return Int(digits);
  }

  FormulaPtr formula() {
    if (peekIdentIs("forall") || peekIdentIs("exists")) {
      bool uni = peekIdentIs("forall");
      tryIdent(); // consume keyword
      std::string v = ident();
      if (!eatSym(".")) fail("expected '.' after quantified variable");
      FormulaPtr body = formula();
      return uni ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    return implic();
  }

  FormulaPtr implic() {
    FormulaPtr l = disjunction();
    if (eatSym("->")) return Formula::implies(l, implic());
    return l;
  }

  FormulaPtr disjunction() {
    FormulaPtr l = conjunction();
    while (eatSym("|")) l = Formula::disj(l, conjunction());
    return l;
  }

  FormulaPtr conjunction() {
    FormulaPtr l = negation();
    while (eatSym("&")) l = Formula::conj(l, negation());
    return l;
  }

  FormulaPtr negation() {
    skipWs();
    if (pos_ < s_.size() && s_[pos_] == '!' && (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '=')) {
      ++pos_;
      return Formula::negation(negation());
    }
    if (pos_ < s_.size() && s_[pos_] == '(') {
      ++pos_;
      FormulaPtr f = formula();
      if (!eatSym(")")) fail("expected ')'");
      return f;
    }
    return atom();
  }

  FormulaPtr atom() {
    TermPtr l = term();
    skipWs();
    if (eatSym("==")) {
      TermPtr r = term();
      skipWs();
      if (!peekIdentIs("mod")) fail("expected 'mod' after '=='");
      tryIdent();
      std::size_t numPos = pos_;
      Int n = number();
      if (n == 0) throw ParseError("congruence modulus must be >= 1", numPos);
      return Formula::cong(l, r, n);
    }
    Rel rel;
    if (eatSym("!=")) rel = Rel::Ne;
    else if (eatSym("<=")) rel = Rel::Le;
    else if (eatSym(">=")) rel = Rel::Ge;
    else if (eatSym("<")) rel = Rel::Lt;
    else if (eatSym(">")) rel = Rel::Gt;
    else if (eatSym("=")) rel = Rel::Eq;
    else fail("expected relation");
    return Formula::atom(rel, l, term());
  }

  TermPtr term() {
    TermPtr l = factor();
    while (eatSym("+")) l = Term::sum(l, factor());
    return l;
  }

  TermPtr factor() {
    if (peekNum()) {
      Int n = number();
      if (eatSym("*")) return Term::mul(n, Term::var(ident()));
      return Term::num(n);
    }
    return Term::var(ident());
  }
};

} // namespace

FormulaPtr parse(const std::string& text) { return Parser(text).run(); }

// ---------------------------------------------------------------------------
// Printer (canonical; parse-of-print is the identity)
// ---------------------------------------------------------------------------

namespace {

void printTerm(std::ostream& os, const TermPtr& t) {
  switch (t->kind) {
  case Term::Kind::Var:
    os << t->name;
    break;
  case Term::Kind::Num:
    os << t->value;
    break;
  case Term::Kind::Sum:
    printTerm(os, t->lhs);
    os << " + ";
    printTerm(os, t->rhs);
    break;
  case Term::Kind::Mul:
    if (t->lhs->kind != Term::Kind::Var)
      throw DomainError("cannot print scalar multiple of a compound term");
    os << t->value << "*" << t->lhs->name;
    break;
  }
}

const char* relSym(Rel r) {
  switch (r) {
  case Rel::Eq: return "=";
  case Rel::Ne: return "!=";
  case Rel::Lt: return "<";
  case Rel::Le: return "<=";
  case Rel::Gt: return ">";
  case Rel::Ge: return ">=";
  case Rel::Cong: return "==";
  }
  return "?";
}

// Precedence: 0 formula/quant, 1 implic, 2 disj, 3 conj, 4 neg/atom.
void printFormula(std::ostream& os, const FormulaPtr& f, int level) {
  auto paren = [&](int inner, auto&& body) {
    if (inner < level) {
      os << "(";
      body();
      os << ")";
    } else {
      body();
    }
  };
  switch (f->kind) {
  case Formula::Kind::Atom:
    printTerm(os, f->tl);
    os << " " << relSym(f->rel) << " ";
    printTerm(os, f->tr);
    if (f->rel == Rel::Cong) os << " mod " << f->modulus;
    break;
  case Formula::Kind::Not:
    os << "!";
    printFormula(os, f->a, 4);
    break;
  case Formula::Kind::And:
    paren(3, [&] {
      printFormula(os, f->a, 3);
      os << " & ";
      printFormula(os, f->b, 4);
    });
    break;
  case Formula::Kind::Or:
    paren(2, [&] {
      printFormula(os, f->a, 2);
      os << " | ";
      printFormula(os, f->b, 3);
    });
    break;
  case Formula::Kind::Implies:
    paren(1, [&] {
      printFormula(os, f->a, 2);
      os << " -> ";
      printFormula(os, f->b, 1);
    });
    break;
  case Formula::Kind::Exists:
  case Formula::Kind::Forall:
    paren(0, [&] {
      os << (f->kind == Formula::Kind::Exists ? "exists " : "forall ") << f->var << ". ";
      printFormula(os, f->a, 0);
    });
    break;
  }
}

} // namespace

std::string print(const TermPtr& t) {
  std::ostringstream os;
  printTerm(os, t);
  return os.str();
}

std::string print(const FormulaPtr& f) {
  std::ostringstream os;
  printFormula(os, f, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

namespace {

Int evalTerm(const TermPtr& t, const Assignment& sigma) {
  switch (t->kind) {
  case Term::Kind::Var: {
    auto it = sigma.find(t->name);
    if (it == sigma.end()) throw DomainError("unbound variable: " + t->name);
    return it->second;
  }
  case Term::Kind::Num:
    return t->value;
  case Term::Kind::Sum:
    return evalTerm(t->lhs, sigma) + evalTerm(t->rhs, sigma);
  case Term::Kind::Mul:
    return t->value * evalTerm(t->lhs, sigma);
  }
  throw DomainError("bad term");
}

} // namespace

bool evaluate(const FormulaPtr& f, const Assignment& sigma) {
  switch (f->kind) {
  case Formula::Kind::Atom: {
    Int l = evalTerm(f->tl, sigma);
    Int r = evalTerm(f->tr, sigma);
    switch (f->rel) {
    case Rel::Eq: return l == r;
    case Rel::Ne: return l != r;
    case Rel::Lt: return l < r;
    case Rel::Le: return l <= r;
    case Rel::Gt: return l > r;
    case Rel::Ge: return l >= r;
    case Rel::Cong: {
      Int d = l - r;
      return mpz_divisible_p(d.get_mpz_t(), f->modulus.get_mpz_t()) != 0;
    }
    }
    break;
  }
  case Formula::Kind::Not:
    return !evaluate(f->a, sigma);
  case Formula::Kind::And:
    return evaluate(f->a, sigma) && evaluate(f->b, sigma);
  case Formula::Kind::Or:
    return evaluate(f->a, sigma) || evaluate(f->b, sigma);
  case Formula::Kind::Implies:
    return !evaluate(f->a, sigma) || evaluate(f->b, sigma);
  case Formula::Kind::Exists:
  case Formula::Kind::Forall:
    throw DomainError("evaluate requires a quantifier-free formula");
  }
  throw DomainError("bad formula");
}

namespace {

TermPtr substTerm(const TermPtr& t, const std::string& var, const Int& value) {
  switch (t->kind) {
  case Term::Kind::Var:
    return t->name == var ? Term::num(value) : t;
  case Term::Kind::Num:
    return t;
  case Term::Kind::Sum:
    return Term::sum(substTerm(t->lhs, var, value), substTerm(t->rhs, var, value));
  case Term::Kind::Mul:
    return Term::mul(t->value, substTerm(t->lhs, var, value));
  }
  throw DomainError("bad term");
}

} // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::string& var, const Int& value) {
  switch (f->kind) {
  case Formula::Kind::Atom: {
    TermPtr l = substTerm(f->tl, var, value);
    TermPtr r = substTerm(f->tr, var, value);
    if (f->rel == Rel::Cong) return Formula::cong(l, r, f->modulus);
    return Formula::atom(f->rel, l, r);
  }
  case Formula::Kind::Not:
    return Formula::negation(substitute(f->a, var, value));
  case Formula::Kind::And:
    return Formula::conj(substitute(f->a, var, value), substitute(f->b, var, value));
  case Formula::Kind::Or:
    return Formula::disj(substitute(f->a, var, value), substitute(f->b, var, value));
  case Formula::Kind::Implies:
    return Formula::implies(substitute(f->a, var, value), substitute(f->b, var, value));
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    if (f->var == var) return f; // occurrence is bound below here
    FormulaPtr body = substitute(f->a, var, value);
    return f->kind == Formula::Kind::Exists ? Formula::exists(f->var, body)
                                            : Formula::forall(f->var, body);
  }
  }
  throw DomainError("bad formula");
}

namespace {

TermPtr renameTerm(const TermPtr& t, const std::string& from, const std::string& to) {
  switch (t->kind) {
  case Term::Kind::Var:
    return t->name == from ? Term::var(to) : t;
  case Term::Kind::Num:
    return t;
  case Term::Kind::Sum:
    return Term::sum(renameTerm(t->lhs, from, to), renameTerm(t->rhs, from, to));
  case Term::Kind::Mul:
    return Term::mul(t->value, renameTerm(t->lhs, from, to));
  }
  throw DomainError("bad term");
}

} // namespace

FormulaPtr renameVar(const FormulaPtr& f, const std::string& from, const std::string& to) {
  switch (f->kind) {
  case Formula::Kind::Atom: {
    TermPtr l = renameTerm(f->tl, from, to);
    TermPtr r = renameTerm(f->tr, from, to);
    if (f->rel == Rel::Cong) return Formula::cong(l, r, f->modulus);
    return Formula::atom(f->rel, l, r);
  }
  case Formula::Kind::Not:
    return Formula::negation(renameVar(f->a, from, to));
  case Formula::Kind::And:
    return Formula::conj(renameVar(f->a, from, to), renameVar(f->b, from, to));
  case Formula::Kind::Or:
    return Formula::disj(renameVar(f->a, from, to), renameVar(f->b, from, to));
  case Formula::Kind::Implies:
    return Formula::implies(renameVar(f->a, from, to), renameVar(f->b, from, to));
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    if (f->var == from) return f;
    if (f->var == to) throw DomainError("rename would capture " + to);
    FormulaPtr body = renameVar(f->a, from, to);
    return f->kind == Formula::Kind::Exists ? Formula::exists(f->var, body)
                                            : Formula::forall(f->var, body);
  }
  }
  throw DomainError("bad formula");
}

namespace {

void termVars(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind) {
  case Term::Kind::Var:
    out.insert(t->name);
    break;
  case Term::Kind::Num:
    break;
  case Term::Kind::Sum:
    termVars(t->lhs, out);
    termVars(t->rhs, out);
    break;
  case Term::Kind::Mul:
    termVars(t->lhs, out);
    break;
  }
}

void freeVarsRec(const FormulaPtr& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f->kind) {
  case Formula::Kind::Atom: {
    std::set<std::string> vs;
    termVars(f->tl, vs);
    termVars(f->tr, vs);
    for (const auto& v : vs)
      if (!bound.count(v)) out.insert(v);
    break;
  }
  case Formula::Kind::Not:
    freeVarsRec(f->a, bound, out);
    break;
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Implies:
    freeVarsRec(f->a, bound, out);
    freeVarsRec(f->b, bound, out);
    break;
  case Formula::Kind::Exists:
  case Formula::Kind::Forall: {
    bool fresh = bound.insert(f->var).second;
    freeVarsRec(f->a, bound, out);
    if (fresh) bound.erase(f->var);
    break;
  }
  }
}

} // namespace

std::set<std::string> freeVars(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  freeVarsRec(f, bound, out);
  return out;
}

bool isQuantifierFree(const FormulaPtr& f) {
  switch (f->kind) {
  case Formula::Kind::Atom:
    return true;
  case Formula::Kind::Not:
    return isQuantifierFree(f->a);
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Implies:
    return isQuantifierFree(f->a) && isQuantifierFree(f->b);
  case Formula::Kind::Exists:
  case Formula::Kind::Forall:
    return false;
  }
  return false;
}

bool structuralEq(const TermPtr& x, const TermPtr& y) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
  case Term::Kind::Var: return x->name == y->name;
  case Term::Kind::Num: return x->value == y->value;
  case Term::Kind::Sum: return structuralEq(x->lhs, y->lhs) && structuralEq(x->rhs, y->rhs);
  case Term::Kind::Mul: return x->value == y->value && structuralEq(x->lhs, y->lhs);
  }
  return false;
}

bool structuralEq(const FormulaPtr& x, const FormulaPtr& y) {
  if (x->kind != y->kind) return false;
  switch (x->kind) {
  case Formula::Kind::Atom:
    return x->rel == y->rel && (x->rel != Rel::Cong || x->modulus == y->modulus) &&
           structuralEq(x->tl, y->tl) && structuralEq(x->tr, y->tr);
  case Formula::Kind::Not:
    return structuralEq(x->a, y->a);
  case Formula::Kind::And:
  case Formula::Kind::Or:
  case Formula::Kind::Implies:
    return structuralEq(x->a, y->a) && structuralEq(x->b, y->b);
  case Formula::Kind::Exists:
  case Formula::Kind::Forall:
    return x->var == y->var && structuralEq(x->a, y->a);
  }
  return false;
}

} // namespace presburger
