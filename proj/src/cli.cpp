#include "presburger/cli.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "presburger/counting.hpp"
#include "presburger/errors.hpp"
#include "presburger/lexrep.hpp"
#include "presburger/orderanalysis.hpp"
#include "presburger/qelim.hpp"
#include "presburger/semilinear.hpp"

namespace presburger {

namespace {

using nlohmann::json;

struct Args {
  std::vector<std::string> pos;
  bool jsonMode = false;
  bool splitZ = false;
  std::map<std::string, std::string> opt; // valued flags
};

const std::set<std::string> kValued = {"--budget-nodes", "--budget-pieces", "--box",
                                       "--prefix",       "-m",              "--point",
                                       "-A",             "-u",              "--range"};

Args parseArgs(const std::vector<std::string>& argv) {
  Args a;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    const std::string& s = argv[i];
    if (s == "--json") {
      a.jsonMode = true;
    } else if (s == "--split-z") {
      a.splitZ = true;
    } else if (kValued.count(s)) {
      if (i + 1 == argv.size()) throw DomainError("flag " + s + " needs a value");
      a.opt[s] = argv[++i];
    } else if (!s.empty() && s[0] == '-' && s.size() > 1 && !std::isdigit(s[1])) {
      throw DomainError("unknown flag " + s);
    } else {
      a.pos.push_back(s);
    }
  }
  return a;
}

long numOpt(const Args& a, const std::string& flag, long dflt) {
  auto it = a.opt.find(flag);
  if (it == a.opt.end()) return dflt;
  try {
    return std::stol(it->second);
  } catch (const std::exception&) {
    throw DomainError("flag " + flag + " needs an integer, got " + it->second);
  }
}

Limits limitsFrom(const Args& a) {
  Limits lim;
  if (const char* env = std::getenv("PRESBURGER_BUDGET_NODES")) {
    try {
      lim.nodes = std::stol(env);
    } catch (const std::exception&) {
      throw DomainError("PRESBURGER_BUDGET_NODES is not an integer");
    }
  }
  lim.nodes = numOpt(a, "--budget-nodes", lim.nodes);
  lim.pieces = numOpt(a, "--budget-pieces", lim.pieces);
  lim.boxMax = numOpt(a, "--box", lim.boxMax);
  return lim;
}

Vec parseVec(const std::string& s) {
  Vec out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(Int(tok));
    } catch (const std::exception&) {
      throw DomainError("bad integer '" + tok + "'");
    }
  }
  if (out.empty()) throw DomainError("empty vector");
  return out;
}

Mat parseMat(const std::string& s) {
  Mat out;
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) out.push_back(parseVec(row));
  if (out.empty()) throw DomainError("empty matrix");
  return out;
}

std::vector<std::string> tupleVars(std::size_t m) {
  std::vector<std::string> vs;
  for (std::size_t i = 0; i < m; ++i) vs.push_back("x" + std::to_string(i + 1));
  return vs;
}

json latticeJson(const Lattice& L) {
  json j;
  json base = json::array();
  for (const Int& b : L.base) base.push_back(b.get_si());
  j["base"] = std::move(base);
  json periods = json::array();
  for (const auto& p : L.periods) {
    json row = json::array();
    for (const Int& e : p) row.push_back(e.get_si());
    periods.push_back(std::move(row));
  }
  j["periods"] = std::move(periods);
  return j;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t dimFlag(const Args& a) {
  long m = numOpt(a, "-m", 0);
  if (m < 1) throw DomainError("-m <arity> is required and must be >= 1");
  return static_cast<std::size_t>(m);
}

Report run(const Args& a) {
  Report r;
  if (a.pos.empty()) throw DomainError("missing subcommand");
  const std::string& cmd = a.pos[0];
  Limits lim = limitsFrom(a);
  QelimOptions qo;
  qo.nodeBudget = lim.nodes;

  if (cmd == "qe") {
    if (a.pos.size() != 2) throw DomainError("usage: qe <formula>");
    r.payload["formula"] = print(simplify(eliminate(parse(a.pos[1]), qo)));
  } else if (cmd == "decide") {
    if (a.pos.size() != 2) throw DomainError("usage: decide <sentence>");
    bool v = decide(parse(a.pos[1]), qo);
    r.payload["value"] = v;
    if (!v) r.status = "fail";
  } else if (cmd == "decompose" || cmd == "dim") {
    if (a.pos.size() != 2) throw DomainError("usage: " + cmd + " -m <arity> <formula>");
    std::size_t m = dimFlag(a);
    FormulaPtr f = parse(a.pos[1]);
    if (!isQuantifierFree(f)) f = simplify(eliminate(f, qo));
    auto D = itoDecompose(fromFormula(f, tupleVars(m), lim), lim);
    r.payload["dimension"] = dimension(D);
    if (cmd == "decompose") {
      json pieces = json::array();
      for (const auto& p : D.pieces) pieces.push_back(latticeJson(p));
      r.payload["pieces"] = std::move(pieces);
    }
  } else if (cmd == "validate") {
    if (a.pos.size() != 2) throw DomainError("usage: validate <interpretation>");
    ValidationReport v = validate(loadInterpretation(a.pos[1]), qo);
    json axioms = json::array();
    for (const auto& ax : v.axioms)
      axioms.push_back(json{{"axiom", ax.axiom}, {"holds", ax.holds}});
    r.payload["axioms"] = std::move(axioms);
    r.payload["ok"] = v.ok;
    if (!v.ok) r.status = "fail";
  } else if (cmd == "galaxy") {
    if (a.pos.size() != 2 || !a.opt.count("--point"))
      throw DomainError("usage: galaxy --point <a,b,..> <interpretation>");
    GalaxyType t = galaxyType(loadInterpretation(a.pos[1]), parseVec(a.opt.at("--point")), lim);
    r.payload["type"] = galaxyTypeString(t);
    if (t.tag == GalaxyType::Tag::Finite) r.payload["size"] = t.size;
  } else if (cmd == "condense") {
    if (a.pos.size() != 2) throw DomainError("usage: condense [--split-z] <interpretation>");
    CondenseOptions co;
    co.splitZ = a.splitZ;
    CondensationResult c = condense(loadInterpretation(a.pos[1]), co, lim);
    r.payload["dimension"] = c.dimension;
    r.payload["pieces"] = c.domainDecomposition.pieces.size();
    r.payload["domain"] = print(c.cI.domain);
  } else if (cmd == "rank") {
    if (a.pos.size() != 2) throw DomainError("usage: rank <interpretation>");
    RankResult v = vdRank(loadInterpretation(a.pos[1]), lim);
    r.payload["rank"] = v.rank;
    r.payload["finalSize"] = v.finalSize;
  } else if (cmd == "catalog") {
    if (a.pos.size() == 2 && a.pos[1] == "list") {
      json names = json::array();
      for (const auto& I : catalog()) names.push_back(I.name);
      r.payload["entries"] = std::move(names);
    } else if (a.pos.size() == 3 && a.pos[1] == "get") {
      r.payload = json::parse(interpretationToJson(catalogEntry(a.pos[2])));
    } else {
      throw DomainError("usage: catalog list | catalog get <name>");
    }
  } else if (cmd == "count") {
    if (a.pos.size() >= 2 && a.pos[1] == "fit") {
      if (!a.opt.count("-A") || !a.opt.count("--range"))
        throw DomainError("usage: count fit -A <matrix> --range <lo:hi>");
      Mat A = parseMat(a.opt.at("-A"));
      const std::string& range = a.opt.at("--range");
      auto colon = range.find(':');
      if (colon == std::string::npos) throw DomainError("--range needs the form lo:hi");
      long lo = std::stol(range.substr(0, colon)), hi = std::stol(range.substr(colon + 1));
      if (hi < lo) throw DomainError("--range needs lo <= hi");
      std::vector<Vec> samples;
      Vec u(A.size(), lo);
      for (;;) { // grid over [lo, hi]^d
        samples.push_back(u);
        if (samples.size() > 5000) throw DomainError("sample grid too large");
        std::size_t i = 0;
        while (i < A.size() && ++u[i] > hi) u[i++] = lo;
        if (i == A.size()) break;
      }
      PiecewisePolynomial pp = fitPiecewise(A, samples, lim);
      json pieces = json::array();
      for (const auto& p : pp.pieces) {
        json piece = latticeJson(p.region);
        piece["poly"] = p.poly.str();
        pieces.push_back(std::move(piece));
      }
      r.payload["pieces"] = std::move(pieces);
      r.payload["degree"] = pp.declaredDegree;
      r.payload["degreeBoundHolds"] = verifyDegreeBound(A, pp);
    } else {
      if (a.pos.size() != 1 || !a.opt.count("-A") || !a.opt.count("-u"))
        throw DomainError("usage: count -A <matrix> -u <vector>");
      CountResult c = countSolutions(
          CountingInstance::make(parseMat(a.opt.at("-A")), parseVec(a.opt.at("-u"))), lim);
      r.payload["finite"] = c.finite;
      if (c.finite) r.payload["count"] = c.count.get_si();
    }
  } else if (cmd == "lexrep") {
    std::size_t prefix = static_cast<std::size_t>(numOpt(a, "--prefix", 200));
    if (a.pos.size() == 3 && a.pos[1] == "build") {
      Interpretation I = loadInterpretation(a.pos[2]);
      LexRepresentation R = constructLexRep(I, lim);
      VerificationReport v = verifyLexRep(I, R, prefix, lim);
      r.payload["representation"] = json::parse(lexRepToJson(R));
      r.payload["verification"] = json{{"ok", v.ok},
                                      {"checked", v.checked},
                                      {"truncated", v.truncated},
                                      {"message", v.message}};
      if (!v.ok) r.status = "fail";
    } else if (a.pos.size() == 4 && a.pos[1] == "verify") {
      Interpretation I = loadInterpretation(a.pos[2]);
      LexRepresentation R = parseLexRep(readFile(a.pos[3]));
      VerificationReport v = verifyLexRep(I, R, prefix, lim);
      r.payload["ok"] = v.ok;
      r.payload["checked"] = v.checked;
      r.payload["truncated"] = v.truncated;
      r.payload["message"] = v.message;
      if (v.mismatchIndex >= 0) r.payload["mismatchIndex"] = v.mismatchIndex;
      if (!v.ok) r.status = "fail";
    } else {
      throw DomainError("usage: lexrep build <interpretation> | lexrep verify <interpretation> <rep.json>");
    }
  } else {
    throw DomainError("unknown subcommand " + cmd);
  }
  return r;
}

} // namespace

int exitCodeFor(const Report& r) {
  if (r.status == "ok") return 0;
  if (r.status == "fail") return 1;
  return 2;
}

Interpretation loadInterpretation(const std::string& pathOrRef) {
  if (pathOrRef.rfind("catalog:", 0) == 0) return catalogEntry(pathOrRef.substr(8));
  return parseInterpretation(readFile(pathOrRef));
}

Report dispatch(const std::vector<std::string>& args, bool& jsonMode) {
  jsonMode = false;
  Report r;
  try {
    Args a = parseArgs(args);
    jsonMode = a.jsonMode;
    return run(a);
  } catch (const ParseError& e) {
    r.status = "error";
    r.diagnostics.push_back(std::string("parse error: ") + e.what());
  } catch (const BudgetError& e) {
    r.status = "error";
    r.diagnostics.push_back(std::string("budget: ") + e.what());
  } catch (const DomainError& e) {
    r.status = "error";
    r.diagnostics.push_back(e.what());
  } catch (const std::exception& e) {
    r.status = "error";
    r.diagnostics.push_back(e.what());
  }
  return r;
}

void emitReport(const Report& r, bool jsonMode, std::ostream& out, std::ostream& err) {
  if (jsonMode) {
    json j;
    j["status"] = r.status;
    j["payload"] = r.payload;
    j["diagnostics"] = r.diagnostics;
    out << j.dump() << "\n";
  } else {
    out << "status: " << r.status << "\n";
    for (const auto& [k, v] : r.payload.items()) {
      if (v.is_string()) out << k << ": " << v.get<std::string>() << "\n";
      else out << k << ": " << v.dump() << "\n";
    }
  }
  for (const auto& d : r.diagnostics) err << d << "\n";
}

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  bool jsonMode = false;
  Report r = dispatch(args, jsonMode);
  emitReport(r, jsonMode, out, err);
  return exitCodeFor(r);
}

} // namespace presburger
