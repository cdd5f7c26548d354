#pragma once

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include "presburger/interp.hpp"

namespace presburger {

// Outcome of one CLI invocation. status "ok" exits 0, "fail" exits 1 (the
// operation ran but answered negatively), "error" exits 2 (usage or
// processing failure).
struct Report {
  std::string status = "ok";
  nlohmann::json payload = nlohmann::json::object();
  std::vector<std::string> diagnostics;
};

int exitCodeFor(const Report& r);

// Accepts a file path or a reference of the form catalog:<name>.
Interpretation loadInterpretation(const std::string& pathOrRef);

// Parse and route; never throws. jsonMode reports whether --json was given.
Report dispatch(const std::vector<std::string>& args, bool& jsonMode);

// --json: exactly one JSON object on out. Otherwise human-readable lines on
// out; diagnostics always go to err.
void emitReport(const Report& r, bool json, std::ostream& out, std::ostream& err);

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace presburger
