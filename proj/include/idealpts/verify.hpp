#pragma once

#include <string>
#include <vector>

#include "idealpts/realizers.hpp"
#include "idealpts/report.hpp"

namespace idealpts {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct VerifyParams {
  Nat resolution = 10;      // m <= resolution for limit certificates
  Nat horizon = 100000;     // sites of size <= horizon are replayed
  Nat range_count = 10000;  // first sites checked for range containment
  Nat replay_depth = 10;    // levels of the underlying scheme certificate
  Nat structure_depth = 12;
  std::size_t sweep = 100;
  std::uint64_t seed = 7;
};

// Overrides from IDEALPTS_HORIZON, IDEALPTS_RESOLUTION, IDEALPTS_RANGE, IDEALPTS_DEPTH, IDEALPTS_SWEEP, IDEALPTS_SEED.
VerifyParams params_from_env(VerifyParams base = {});
Json params_json(const VerifyParams& p);

// Sites of the set with size <= bound, in carrier order.
std::vector<Site> sites_upto(Carrier c, const DescribedSet& s, Nat bound);

// Limit certificate clauses for one target: positivity, threshold replay, structure, scheme replay.
Report verify_target(const Realization& r, const Target& t, const VerifyParams& p);
// All targets plus range containment over the first sites and the verification level.
Report verify_realization(const Realization& r, const std::vector<Target>& targets, const VerifyParams& p);

// Subject document: {"kind": closed|fsigma|fsigmadelta|analytic, "scheme": name, "ideal": name,
// "targets": [closed-code refs] or a code name, "points": [point literals], "baire": [[period], ..]}.
// Missing scheme, ideal and points get defaults for the kind.
struct Subject {
  RealizationHandle realization;
  std::vector<Target> targets;
};
Subject subject_from_json(const Json& j, const VerifyParams& p);
Report verify_subject(const Json& j, const VerifyParams& p);

const std::vector<std::string>& demo_names();
// Throws std::invalid_argument for an unknown name.
Report run_demo(const std::string& name, const VerifyParams& p = params_from_env());

enum class ReportFormat { Json, Text };
// Keys: subject, verdict, version, horizons, clauses, notes. Deterministic for identical inputs.
std::string emit_report(const Report& r, ReportFormat f);
Json report_json(const Report& r);
// Inverse of report_json; throws on a malformed document.
Report report_from_json(const Json& j);

// 0 Pass, 2 Fail, 3 Inconclusive.
int exit_code(ClauseVerdict v);

}  // namespace idealpts
