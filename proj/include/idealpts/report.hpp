#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace idealpts {

using Json = nlohmann::ordered_json;

enum class ClauseVerdict { Pass, Fail, Inconclusive };
const char* to_string(ClauseVerdict v);

struct Clause {
  std::string name;
  ClauseVerdict verdict = ClauseVerdict::Inconclusive;
  Json evidence = Json::object();
};

// Fail if any clause fails, Inconclusive if none fails and one is inconclusive, else Pass.
ClauseVerdict aggregate(const std::vector<Clause>& clauses);

struct Report {
  std::string subject;
  std::vector<Clause> clauses;
  Json horizons = Json::object();
  Json notes = Json::object();

  void add(std::string name, ClauseVerdict v, Json evidence = Json::object());
  void pass(std::string name, Json evidence = Json::object()) { add(std::move(name), ClauseVerdict::Pass, std::move(evidence)); }
  void fail(std::string name, Json evidence = Json::object()) { add(std::move(name), ClauseVerdict::Fail, std::move(evidence)); }
  void check(std::string name, bool ok, Json evidence = Json::object()) {
    add(std::move(name), ok ? ClauseVerdict::Pass : ClauseVerdict::Fail, std::move(evidence));
  }
  // Appends the clauses of `other`, prefixing their names.
  void absorb(const Report& other, const std::string& prefix);
  ClauseVerdict verdict() const { return aggregate(clauses); }
};

}  // namespace idealpts
