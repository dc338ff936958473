#include <cstdlib>
#include <random>

#include "doctest.h"
#include "idealpts/verify.hpp"

using namespace idealpts;

TEST_CASE("aggregation: fail dominates, then inconclusive") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Clause> clauses(rng() % 6);
    bool any_fail = false;
    bool any_open = false;
    for (auto& c : clauses) {
      c.verdict = static_cast<ClauseVerdict>(rng() % 3);
      any_fail = any_fail || c.verdict == ClauseVerdict::Fail;
      any_open = any_open || c.verdict == ClauseVerdict::Inconclusive;
    }
    const ClauseVerdict expect = any_fail ? ClauseVerdict::Fail : any_open ? ClauseVerdict::Inconclusive : ClauseVerdict::Pass;
    CHECK(aggregate(clauses) == expect);
  }
}

TEST_CASE("reports round trip through JSON") {
  Report r;
  r.subject = "s";
  r.pass("a", Json{{"x", 1}});
  r.fail("b");
  r.add("c", ClauseVerdict::Inconclusive, Json{{"why", "horizon"}});
  r.horizons["index"] = 10;
  r.notes["k"] = "v";
  const Json j = report_json(r);
  CHECK(j["verdict"] == "fail");
  CHECK(j["version"] == kToolkitVersion);
  const Report back = report_from_json(j);
  CHECK(report_json(back).dump() == j.dump());
  CHECK_THROWS(report_from_json(Json{{"subject", 1}}));
  CHECK(emit_report(r, ReportFormat::Text).find("fail") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ClauseVerdict::Pass) == 0);
  CHECK(exit_code(ClauseVerdict::Fail) == 2);
  CHECK(exit_code(ClauseVerdict::Inconclusive) == 3);
}

TEST_CASE("environment overrides") {
  ::setenv("IDEALPTS_HORIZON", "1234", 1);
  ::setenv("IDEALPTS_SEED", "99", 1);
  VerifyParams p = params_from_env();
  CHECK(p.horizon == 1234);
  CHECK(p.seed == 99);
  CHECK(p.resolution == VerifyParams{}.resolution);
  ::setenv("IDEALPTS_HORIZON", "12x", 1);
  CHECK_THROWS_AS(params_from_env(), std::invalid_argument);
  ::unsetenv("IDEALPTS_HORIZON");
  ::unsetenv("IDEALPTS_SEED");
  ::setenv("IDEALPTS_RESOLUTION", "70", 1);
  CHECK_THROWS_AS(params_from_env(), std::invalid_argument);
  ::unsetenv("IDEALPTS_RESOLUTION");
}

TEST_CASE("demos are deterministic and unknown names are rejected") {
  VerifyParams p;
  p.horizon = 20000;
  for (const char* name : {"gamma-not-lambda-z", "fin-cluster", "scheme-probe-suite", "gamma-empty-discrete"}) {
    const std::string a = emit_report(run_demo(name, p), ReportFormat::Json);
    const std::string b = emit_report(run_demo(name, p), ReportFormat::Json);
    CHECK_MESSAGE(a == b, name);
    CHECK_MESSAGE(run_demo(name, p).verdict() == ClauseVerdict::Pass, name);
  }
  CHECK_THROWS_AS(run_demo("nope", p), std::invalid_argument);
  CHECK(demo_names().size() >= 10);
}

TEST_CASE("subjects") {
  VerifyParams p;
  p.horizon = 20000;
  p.range_count = 2000;
  const Json closed{{"kind", "closed"}, {"targets", {"cyl:011"}}, {"points", {"011:0", "0111:01"}}};
  const Report ok = verify_subject(closed, p);
  CHECK(ok.verdict() == ClauseVerdict::Pass);
  const Json outside{{"kind", "closed"}, {"targets", {"cyl:011"}}, {"points", {"1:0"}}};
  CHECK(verify_subject(outside, p).verdict() == ClauseVerdict::Fail);
  CHECK_THROWS(subject_from_json(Json{{"kind", "borel"}}, p));
}

TEST_CASE("sites are listed in carrier order") {
  const auto plane = sites_upto(Carrier::Plane, DescribedSet::rect(DescribedSet::all(), DescribedSet::all()), 3);
  CHECK(plane.size() == 16);
  for (std::size_t i = 1; i < plane.size(); ++i) CHECK(site_less(Carrier::Plane, plane[i - 1], plane[i]));
  const auto firsts = first_sites(Carrier::Plane, 16);
  CHECK(firsts == plane);
}
