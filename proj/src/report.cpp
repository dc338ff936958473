#include "idealpts/report.hpp"

namespace idealpts {

const char* to_string(ClauseVerdict v) {
  switch (v) {
    case ClauseVerdict::Pass: return "pass";
    case ClauseVerdict::Fail: return "fail";
    case ClauseVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

ClauseVerdict aggregate(const std::vector<Clause>& clauses) {
  bool inconclusive = false;
  for (const auto& c : clauses) {
    if (c.verdict == ClauseVerdict::Fail) return ClauseVerdict::Fail;
    if (c.verdict == ClauseVerdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? ClauseVerdict::Inconclusive : ClauseVerdict::Pass;
}

void Report::add(std::string name, ClauseVerdict v, Json evidence) {
  clauses.push_back(Clause{std::move(name), v, std::move(evidence)});
}

void Report::absorb(const Report& other, const std::string& prefix) {
  for (const auto& c : other.clauses) clauses.push_back(Clause{prefix + c.name, c.verdict, c.evidence});
}

}  // namespace idealpts
