// Command-line front end: ideal decisions, schemes, Cantor-space utilities, realizations, verification and demos.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "idealpts/verify.hpp"

using namespace idealpts;

namespace {

constexpr int kUsageError = 1;

int emit(const Report& r, bool json) {
  std::cout << emit_report(r, json ? ReportFormat::Json : ReportFormat::Text);
  return exit_code(r.verdict());
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return Json::parse(in);
}

// fullize | shift:<literal> | double | densify (along q_enum)
SchemeHandle apply_transform(const SchemeHandle& a, const std::string& t) {
  if (t == "fullize") return fullize(a);
  if (t == "double") return double_to_sigma02(a);
  if (t == "densify") return densify(a, q_enum, "q_enum");
  if (t.rfind("shift:", 0) == 0) return shift_to_zero(a, CantorPoint::parse(t.substr(6)));
  throw std::invalid_argument("unknown transform: " + t);
}

// A bare word w names the periodic point w^inf; anything with a colon is a point literal.
CantorPoint branch_from(const std::string& text) {
  if (text.find(':') != std::string::npos) return CantorPoint::parse(text);
  return CantorPoint::periodic(BinWord{}, BinWord::parse(text));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ideal limit points toolkit"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit JSON instead of text");

  // ideal decide
  auto* ideal_cmd = app.add_subcommand("ideal", "ideal membership decisions")->require_subcommand(1);
  auto* decide_cmd = ideal_cmd->add_subcommand("decide", "decide a described set");
  std::string ideal_name = "fin";
  std::string set_text;
  decide_cmd->add_option("--ideal", ideal_name, "fin | z | summable | banach | fin2 | etf | empty | iw | ...");
  decide_cmd->add_option("set", set_text, "set term, e.g. (residue 1 4)")->required();

  // scheme build | check | probe
  auto* scheme_cmd = app.add_subcommand("scheme", "ideal schemes")->require_subcommand(1);
  std::string scheme_name = "fin-full";
  std::string scheme_ideal;
  unsigned depth = 6;
  std::string point_text;
  std::vector<std::string> transforms;
  ProbeParams probe;
  std::optional<Nat> probe_horizon;
  auto* build_cmd = scheme_cmd->add_subcommand("build", "list nodes up to a depth");
  auto* check_cmd = scheme_cmd->add_subcommand("check", "check the scheme axioms");
  auto* probe_cmd = scheme_cmd->add_subcommand("probe", "probe B-membership of a branch");
  for (auto* c : {build_cmd, check_cmd, probe_cmd}) {
    c->add_option("--scheme,--name", scheme_name, "fin-full | etf | fin2-anchored | z-tail");
    c->add_option("--transform", transforms, "fullize | shift:<point> | double | densify, applied in order");
  }
  for (auto* c : {check_cmd, probe_cmd}) c->add_option("--ideal", scheme_ideal, "ideal (default: the scheme's native ideal)");
  build_cmd->add_option("--depth", depth, "word length")->check(CLI::Range(0, 12));
  check_cmd->add_option("--depth", depth, "word length")->check(CLI::Range(0, 16));
  auto* point_opt = probe_cmd->add_option("point", point_text, "branch: prefix:period literal, or a bare word w for w^inf");
  auto* branch_opt = probe_cmd->add_option("--branch", point_text, "same as the positional branch");
  point_opt->excludes(branch_opt);
  probe_cmd->add_option("--horizon", probe_horizon, "largest site size replayed");
  probe_cmd->add_option("--sweep", probe.sweep, "candidate family size");
  probe_cmd->add_option("--seed", probe.seed, "candidate seed");

  // cantor dist | qenum
  auto* cantor_cmd = app.add_subcommand("cantor", "Cantor space utilities")->require_subcommand(1);
  auto* dist_cmd = cantor_cmd->add_subcommand("dist", "distance of two points");
  std::string x_text;
  std::string y_text;
  dist_cmd->add_option("x", x_text)->required();
  dist_cmd->add_option("y", y_text)->required();
  auto* qenum_cmd = cantor_cmd->add_subcommand("qenum", "n-th eventually zero point");
  Nat qn = 0;
  qenum_cmd->add_option("n", qn)->required();

  // realize
  auto* realize_cmd = app.add_subcommand("realize", "compute a realization and dump its sequence");
  std::string kind;
  std::string real_scheme;
  std::string real_ideal;
  std::string target;
  std::string out_path;
  std::size_t count = 1000;
  std::string cert_point;
  realize_cmd->add_option("kind", kind, "closed | fsigma | fsigmadelta | analytic | gamma-not-lambda-z | empty-lambda-fin2")->required();
  realize_cmd->add_option("--scheme", real_scheme);
  realize_cmd->add_option("--ideal", real_ideal);
  realize_cmd->add_option("--target", target, "code refs, comma separated (closed codes, inf-zeros, wirr)");
  realize_cmd->add_option("--out", out_path, "JSONL file for the sequence (default stdout)");
  realize_cmd->add_option("--count", count, "number of sites");
  realize_cmd->add_option("--cert", cert_point, "also dump the limit certificate for this point literal");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "verify a realization described by a subject file");
  std::string subject_path;
  verify_cmd->add_option("--subject", subject_path, "JSON subject document")->required();

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "run a registered demo");
  std::string demo_name;
  bool list = false;
  demo_cmd->add_option("name", demo_name);
  demo_cmd->add_flag("--list", list, "list demo names");
  for (auto* c : {decide_cmd, build_cmd, check_cmd, probe_cmd, dist_cmd, qenum_cmd, verify_cmd, demo_cmd, realize_cmd}) {
    c->add_flag("--json", json, "emit JSON instead of text");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  }

  try {
    const VerifyParams params = params_from_env();
    if (decide_cmd->parsed()) {
      const Decision d = decide(ideal_by_name(ideal_name), parse_set(set_text));
      if (json) {
        std::cout << decision_json(d).dump(2) << "\n";
      } else {
        std::cout << to_string(d.verdict) << "\n";
        for (const auto& t : d.trace) std::cout << "  " << t << "\n";
      }
      return 0;
    }
    if (scheme_cmd->parsed()) {
      SchemeHandle a = scheme_by_name(scheme_name);
      for (const auto& t : transforms) a = apply_transform(a, t);
      const IdealHandle ideal = ideal_by_name(scheme_ideal.empty() ? a->ideal : scheme_ideal);
      if (build_cmd->parsed()) {
        Json nodes = Json::array();
        for (Nat i = 0; i < (Nat{1} << (depth + 1)) - 1; ++i) {
          const BinWord s = word_from_index(i);
          nodes.push_back(Json{{"word", s.str()}, {"node", a->node(s).term()}});
        }
        const Json doc{{"scheme", a->name},       {"carrier", to_string(a->carrier)}, {"ideal", a->ideal},
                       {"full", a->full},          {"claimed_b", a->claimed_b},        {"history", a->history},
                       {"nodes", nodes}};
        if (json) {
          std::cout << doc.dump(2) << "\n";
        } else {
          std::cout << a->name << " on " << to_string(a->carrier) << ", claimed B = " << a->claimed_b << "\n";
          for (const auto& n : nodes) std::cout << "  " << n["word"].get<std::string>() << "  " << n["node"].get<std::string>() << "\n";
        }
        return 0;
      }
      if (check_cmd->parsed()) {
        Report r = check_scheme(*a, ideal, depth);
        r.horizons["depth"] = depth;
        return emit(r, json);
      }
      if (point_text.empty()) throw std::invalid_argument("scheme probe needs a branch");
      probe.horizon = probe_horizon.value_or(params.horizon);
      probe.depth = params.replay_depth;
      const ProbeResult res = b_membership_probe(*a, ideal, branch_from(point_text), probe);
      Report r = res.report;
      r.notes["outcome"] = to_string(res.outcome);
      return emit(r, json);
    }
    if (dist_cmd->parsed()) {
      const Dyadic d = metric(CantorPoint::parse(x_text), CantorPoint::parse(y_text));
      if (json) {
        std::cout << Json{{"distance", d.str()}}.dump() << "\n";
      } else {
        std::cout << d.str() << "\n";
      }
      return 0;
    }
    if (qenum_cmd->parsed()) {
      const CantorPoint q = q_enum(qn);
      if (json) {
        std::cout << Json{{"n", qn}, {"point", q.literal()}}.dump() << "\n";
      } else {
        std::cout << q.literal() << "\n";
      }
      return 0;
    }
    if (realize_cmd->parsed()) {
      RealizationHandle r;
      if (kind == "gamma-not-lambda-z") {
        r = gamma_not_lambda_z(SweepParams{params.sweep, params.seed, params.resolution, params.horizon}).realization;
      } else if (kind == "empty-lambda-fin2") {
        auto chain = [](Nat n) { return DescribedSet::rect(DescribedSet::interval(n, std::nullopt), DescribedSet::all()); };
        auto y = [](Nat m) { return CantorPoint::padded(BinWord::zeros(m).append(1)); };
        r = empty_limit_sequence(fin2_ideal(), chain, y, CantorPoint::zeros(),
                                 SweepParams{params.sweep, params.seed, params.resolution, params.horizon})
                .realization;
      } else {
        Json subject{{"kind", kind}};
        if (!real_scheme.empty()) subject["scheme"] = real_scheme;
        if (!real_ideal.empty()) subject["ideal"] = real_ideal;
        if (!target.empty()) subject["targets"] = split(target, ',');
        r = subject_from_json(subject, params).realization;
      }
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw std::invalid_argument("cannot write " + out_path);
      }
      std::ostream& out = out_path.empty() ? std::cout : file;
      for (const Site& s : first_sites(r->carrier, count)) {
        out << Json{{"i", site_json(r->carrier, s)}, {"prefix", r->at(s).prefix(16).str()}}.dump() << "\n";
      }
      if (!cert_point.empty()) {
        if (!r->cert_for) throw std::invalid_argument(r->name + " issues no limit certificates");
        const LimitCertificate c = r->cert_for(Target{CantorPoint::parse(cert_point), nullptr, std::nullopt, cert_point});
        Json table = Json::array();
        for (Nat m = 1; m <= params.resolution; ++m) {
          const Nat th = c.threshold(m);
          table.push_back(Json{{"m", m}, {"threshold", th == kNatMax ? Json("beyond-64-bits") : Json(th)}});
        }
        std::cerr << Json{{"point", c.point.literal()}, {"set", c.set.term()}, {"law", c.law}, {"thresholds", table}}.dump(2)
                  << "\n";
      }
      return 0;
    }
    if (verify_cmd->parsed()) {
      Report r = verify_subject(read_json_file(subject_path), params);
      r.subject = "verify " + subject_path + ": " + r.subject;
      return emit(r, json);
    }
    if (demo_cmd->parsed()) {
      if (list || demo_name.empty()) {
        for (const auto& n : demo_names()) std::cout << n << "\n";
        return list ? 0 : kUsageError;
      }
      return emit(run_demo(demo_name, params), json);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::runtime_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}
