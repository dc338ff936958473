// Python bindings. Structured results cross the boundary as JSON text and are decoded in __init__.py.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "idealpts/verify.hpp"

namespace py = pybind11;
using namespace idealpts;

namespace {

VerifyParams params_from(const py::dict& overrides) {
  VerifyParams p;
  for (const auto& [key, value] : overrides) {
    const auto k = key.cast<std::string>();
    const auto v = value.cast<Nat>();
    if (k == "resolution") {
      p.resolution = v;
    } else if (k == "horizon") {
      p.horizon = v;
    } else if (k == "range_count") {
      p.range_count = v;
    } else if (k == "replay_depth") {
      p.replay_depth = v;
    } else if (k == "sweep") {
      p.sweep = static_cast<std::size_t>(v);
    } else if (k == "seed") {
      p.seed = v;
    } else {
      throw std::invalid_argument("unknown parameter: " + k);
    }
  }
  if (p.resolution > 60) throw std::invalid_argument("resolution above 60 is not supported");
  return p;
}

std::string json_report(const Report& r) { return emit_report(r, ReportFormat::Json); }

}  // namespace

PYBIND11_MODULE(_idealpts, m) {
  m.doc() = "ideal limit points toolkit";
  m.attr("__version__") = kToolkitVersion;

  m.def("decide", [](const std::string& ideal, const std::string& set) {
    return decision_json(decide(ideal_by_name(ideal), parse_set(set))).dump();
  });
  m.def("demo_names", &demo_names);
  m.def("run_demo", [](const std::string& name, const py::dict& params) {
    const VerifyParams p = params_from(params);
    py::gil_scoped_release release;
    return json_report(run_demo(name, p));
  });
  m.def("verify_subject", [](const std::string& subject, const py::dict& params) {
    const VerifyParams p = params_from(params);
    const Json j = Json::parse(subject);
    py::gil_scoped_release release;
    return json_report(verify_subject(j, p));
  });
  m.def("scheme_check", [](const std::string& scheme, const std::string& ideal, unsigned depth) {
    const SchemeHandle a = scheme_by_name(scheme);
    py::gil_scoped_release release;
    return json_report(check_scheme(*a, ideal_by_name(ideal.empty() ? a->ideal : ideal), depth));
  });
  m.def("scheme_probe", [](const std::string& scheme, const std::string& point, const std::string& ideal, std::size_t sweep,
                           std::uint64_t seed) {
    const SchemeHandle a = scheme_by_name(scheme);
    ProbeParams pp;
    pp.sweep = sweep;
    pp.seed = seed;
    const ProbeResult res = b_membership_probe(*a, ideal_by_name(ideal.empty() ? a->ideal : ideal), CantorPoint::parse(point), pp);
    Report r = res.report;
    r.notes["outcome"] = to_string(res.outcome);
    return json_report(r);
  });
  m.def("realize_prefixes", [](const std::string& subject, std::size_t count, std::size_t bits) {
    const Subject sub = subject_from_json(Json::parse(subject), VerifyParams{});
    std::vector<std::string> out;
    for (const Site& s : first_sites(sub.realization->carrier, count)) out.push_back(sub.realization->at(s).prefix(bits).str());
    return out;
  });
  m.def("cantor_dist", [](const std::string& x, const std::string& y) {
    return metric(CantorPoint::parse(x), CantorPoint::parse(y)).str();
  });
  m.def("q_enum", [](Nat n) { return q_enum(n).literal(); });
  m.def("exit_code", [](const std::string& verdict) {
    if (verdict == "pass") return exit_code(ClauseVerdict::Pass);
    if (verdict == "fail") return exit_code(ClauseVerdict::Fail);
    if (verdict == "inconclusive") return exit_code(ClauseVerdict::Inconclusive);
    throw std::invalid_argument("unknown verdict: " + verdict);
  });

  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
}
