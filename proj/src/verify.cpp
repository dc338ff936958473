#include "idealpts/verify.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <random>
#include <sstream>

namespace idealpts {

namespace {

std::optional<Nat> env_nat(const char* key) {
  const char* v = std::getenv(key);
  if (v == nullptr || *v == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long n = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(key);
    return static_cast<Nat>(n);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("environment variable ") + key + " is not a natural number: " + v);
  }
}

// Length of the common prefix of two points, capped at `cap`.
Nat agreement(const CantorPoint& x, const CantorPoint& y, Nat cap) {
  for (Nat i = 0; i < cap; ++i) {
    if (x.bit(i) != y.bit(i)) return i;
  }
  return cap;
}

std::string threshold_str(Nat t) { return t == kNatMax ? "beyond-64-bits" : std::to_string(t); }

Verdict to_verdict_checked(const IdealHandle& ideal, const DescribedSet& s, Json& trace) {
  const Decision d = ideal->decide(s);
  trace = d.trace;
  return d.verdict;
}

}  // namespace

VerifyParams params_from_env(VerifyParams base) {
  if (auto v = env_nat("IDEALPTS_HORIZON")) base.horizon = *v;
  if (auto v = env_nat("IDEALPTS_RESOLUTION")) base.resolution = *v;
  if (auto v = env_nat("IDEALPTS_RANGE")) base.range_count = *v;
  if (auto v = env_nat("IDEALPTS_DEPTH")) base.replay_depth = *v;
  if (auto v = env_nat("IDEALPTS_SWEEP")) base.sweep = static_cast<std::size_t>(*v);
  if (auto v = env_nat("IDEALPTS_SEED")) base.seed = *v;
  if (base.resolution > 60) throw std::invalid_argument("resolution above 60 is not supported");
  return base;
}

Json params_json(const VerifyParams& p) {
  return Json{{"resolution", p.resolution}, {"index", p.horizon},      {"range", p.range_count},
              {"replay_depth", p.replay_depth}, {"structure_depth", p.structure_depth}, {"sweep", p.sweep},
              {"seed", p.seed}};
}

std::vector<Site> sites_upto(Carrier c, const DescribedSet& s, Nat bound) {
  std::vector<Site> out;
  if (c == Carrier::Omega) {
    for (Nat n : elements_upto(s, bound)) out.push_back(Site{n, 0});
    return out;
  }
  for (const auto& [col, row] : pairs_upto(s, bound)) out.push_back(Site{col, row});
  std::sort(out.begin(), out.end(), [c](const Site& x, const Site& y) { return site_less(c, x, y); });
  return out;
}

Report verify_target(const Realization& r, const Target& t, const VerifyParams& p) {
  Report rep;
  rep.subject = r.name + " -> " + (t.label.empty() ? t.point.literal() : t.label);
  if (!r.cert_for) {
    rep.add("limit certificate", ClauseVerdict::Inconclusive, Json{{"reason", "realization issues no limit certificates"}});
    return rep;
  }
  std::optional<LimitCertificate> cert;
  try {
    cert = r.cert_for(t);
  } catch (const std::runtime_error& e) {
    rep.add("limit certificate", ClauseVerdict::Inconclusive, Json{{"reason", e.what()}});
    return rep;
  } catch (const std::invalid_argument& e) {
    rep.fail("limit certificate", Json{{"reason", e.what()}});
    return rep;
  }
  Json trace;
  const Verdict v = to_verdict_checked(r.ideal, cert->set, trace);
  const Json set_ev{{"set", cert->set.term()}, {"decision", to_string(v)}, {"trace", trace}};
  rep.add("certificate set is positive",
          v == Verdict::Positive ? ClauseVerdict::Pass : v == Verdict::In ? ClauseVerdict::Fail : ClauseVerdict::Inconclusive,
          set_ev);

  std::vector<Site> sites;
  bool enumerated = true;
  try {
    sites = sites_upto(r.carrier, cert->set, p.horizon);
  } catch (const std::runtime_error& e) {
    enumerated = false;
    rep.add("values beyond threshold(m) lie within 2^-m", ClauseVerdict::Inconclusive, Json{{"reason", e.what()}});
  }
  if (enumerated) {
    std::vector<Nat> agree(sites.size());
    std::vector<Nat> sizes(sites.size());
    try {
      for (std::size_t j = 0; j < sites.size(); ++j) {
        agree[j] = agreement(r.at(sites[j]), cert->point, p.resolution);
        sizes[j] = site_size(r.carrier, sites[j]);
      }
      Json rows = Json::array();
      bool ok = true;
      for (Nat m = 1; m <= p.resolution; ++m) {
        const Nat th = cert->threshold(m);
        std::size_t checked = 0;
        std::size_t bad = 0;
        Json first_bad = nullptr;
        for (std::size_t j = 0; j < sites.size(); ++j) {
          if (sizes[j] < th) continue;
          ++checked;
          if (agree[j] < m) {
            if (bad == 0) first_bad = site_json(r.carrier, sites[j]);
            ++bad;
          }
        }
        ok = ok && bad == 0;
        rows.push_back(Json{{"m", m},
                            {"threshold", threshold_str(th)},
                            {"checked", checked},
                            {"violations", bad},
                            {"first_violation", first_bad},
                            {"vacuous_within_horizon", th > p.horizon}});
      }
      rep.check("values beyond threshold(m) lie within 2^-m", ok,
                Json{{"sites_in_set_within_horizon", sites.size()}, {"levels", rows}, {"law", cert->law}});
    } catch (const std::runtime_error& e) {
      rep.add("values beyond threshold(m) lie within 2^-m", ClauseVerdict::Inconclusive, Json{{"reason", e.what()}});
    }
  }
  rep.absorb(cert->structure, "structure: ");
  if (cert->replay) {
    try {
      rep.absorb(cert->replay(p.replay_depth, p.horizon), "scheme certificate: ");
    } catch (const std::runtime_error& e) {
      rep.add("scheme certificate", ClauseVerdict::Inconclusive, Json{{"reason", e.what()}});
    }
  }
  return rep;
}

Report verify_realization(const Realization& r, const std::vector<Target>& targets, const VerifyParams& p) {
  Report rep;
  rep.subject = r.name;
  rep.horizons = params_json(p);
  rep.notes["kind"] = to_string(r.kind);
  rep.notes["carrier"] = to_string(r.carrier);
  rep.notes["ideal"] = r.ideal ? r.ideal->name() : "";
  rep.notes["verification_level"] = to_string(r.level);
  rep.notes["construction"] = r.provenance;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    const Report one = verify_target(r, targets[k], p);
    Json per = Json::array();
    for (const auto& c : one.clauses) per.push_back(Json{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"evidence", c.evidence}});
    rep.add("target " + std::to_string(k) + ": " + one.subject, aggregate(one.clauses), Json{{"clauses", per}});
  }
  if (r.level == VerificationLevel::OneSided) {
    rep.notes["range"] = "values are not certified to lie in the target";
  } else if (!r.range) {
    rep.add("range containment", ClauseVerdict::Inconclusive, Json{{"reason", "no range test"}});
  } else {
    std::size_t out = 0;
    std::size_t unknown = 0;
    Json first_out = nullptr;
    try {
      for (const Site& s : first_sites(r.carrier, p.range_count)) {
        const Membership m = r.range(r.at(s));
        if (m == Membership::Out) {
          if (out == 0) first_out = site_json(r.carrier, s);
          ++out;
        }
        if (m == Membership::Unknown) ++unknown;
      }
      const ClauseVerdict v = out > 0 ? ClauseVerdict::Fail : unknown > 0 ? ClauseVerdict::Inconclusive : ClauseVerdict::Pass;
      rep.add("range containment", v,
              Json{{"sites", p.range_count}, {"outside", out}, {"undecided", unknown}, {"first_outside", first_out}});
    } catch (const std::runtime_error& e) {
      rep.add("range containment", ClauseVerdict::Inconclusive, Json{{"reason", e.what()}});
    }
  }
  return rep;
}

// ---------------------------------------------------------------- demos

namespace {

// Random admitted walk of length `depth`, completed leftmost.
std::vector<Target> sample_branches(const ClosedCode& t, std::size_t count, std::uint64_t seed, unsigned depth,
                                    std::optional<std::size_t> component = std::nullopt) {
  std::mt19937_64 rng(seed);
  std::vector<Target> out;
  for (std::size_t k = 0; k < count; ++k) {
    BinWord s;
    for (unsigned d = 0; d < depth; ++d) {
      const auto kids = t.admitted_children(s);
      s = s.append(kids[rng() % kids.size()]);
    }
    CantorPoint p = t.leftmost_completion(s);
    out.push_back(Target{p, nullptr, component, t.name() + "/" + p.literal()});
  }
  return out;
}

void stamp(Report& r, const std::string& subject, const VerifyParams& p) {
  r.subject = subject;
  r.horizons = params_json(p);
}

Report demo_fin_closed(const VerifyParams& p) {
  const ClosedCode t = ClosedCode::random_pruned(p.seed, 8);
  auto r = realize_closed(fin_full_scheme(), t, fin_ideal());
  Report rep = verify_realization(*r, sample_branches(t, 20, p.seed + 1, 12), p);
  stamp(rep, "fin-closed: " + r->name, p);
  return rep;
}

Report demo_etf_fsigma(const VerifyParams& p) {
  std::vector<ClosedCode> pieces;
  for (const char* c : {"cyl:0", "cyl:11", "cyl:101", "cyl:1001", "cyl:0110"}) pieces.push_back(ClosedCode::by_name(c));
  auto r = realize_fsigma(empty_times_fin_scheme(), pieces, ideal_by_name("etf"));
  std::vector<Target> targets;
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    for (auto& t : sample_branches(pieces[n], 4, p.seed + n, 10, n)) targets.push_back(std::move(t));
  }
  Report rep = verify_realization(*r, targets, p);
  stamp(rep, "etf-fsigma: " + r->name, p);
  return rep;
}

Report demo_z_fsigma(const VerifyParams& p) {
  std::vector<ClosedCode> pieces;
  for (const char* c : {"zeros:2:0", "cyl:11", "random:3:6"}) pieces.push_back(ClosedCode::by_name(c));
  auto r = realize_fsigma(z_tail_scheme(), pieces, density_zero_ideal());
  std::vector<Target> targets;
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    for (auto& t : sample_branches(pieces[n], 4, p.seed + n, 10, n)) targets.push_back(std::move(t));
  }
  Report rep = verify_realization(*r, targets, p);
  stamp(rep, "z-fsigma: " + r->name, p);
  return rep;
}

// Eventually periodic points with a zero in the period.
std::vector<Target> zero_recurrent_points(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Target> out;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<std::uint8_t> head(rng() % 7);
    for (auto& b : head) b = rng() & 1U;
    std::vector<std::uint8_t> period(1 + rng() % 4);
    for (auto& b : period) b = rng() & 1U;
    period[rng() % period.size()] = 0;
    CantorPoint x = CantorPoint::periodic(BinWord(head), BinWord(period));
    out.push_back(Target{x, nullptr, std::nullopt, x.literal()});
  }
  return out;
}

Report demo_fin2_fsigmadelta(const VerifyParams& p) {
  auto r = realize_fsigmadelta(fin2_anchored_scheme(), infinitely_many_zeros_code(), fin2_ideal());
  VerifyParams q = p;
  q.resolution = std::min<Nat>(p.resolution, 8);
  Report rep = verify_realization(*r, zero_recurrent_points(10, p.seed), q);
  stamp(rep, "fin2-fsigmadelta: " + r->name, q);
  return rep;
}

Target baire_target(const SouslinCode& code, std::function<Nat(Nat)> y, const std::string& label) {
  // p_y written out far enough for every replayed resolution.
  BaireWord pre;
  for (Nat j = 0; j < 64; ++j) pre.push_back(y(j));
  const BinWord w = code.cell_cylinder(pre);
  const CantorPoint p = CantorPoint::lazy([w](Nat i) -> std::uint8_t { return w[i]; }, w.size(), label);
  return Target{p, std::move(y), std::nullopt, label};
}

std::vector<Target> wirr_targets() {
  const std::vector<std::pair<std::string, std::function<Nat(Nat)>>> ys = {
      {"y=0,0,0,..", [](Nat) { return Nat{0}; }},
      {"y=1,1,1,..", [](Nat) { return Nat{1}; }},
      {"y=j mod 3", [](Nat j) { return j % 3; }},
      {"y=2,0,2,0,..", [](Nat j) { return (j % 2 == 0) ? Nat{2} : Nat{0}; }},
      {"y=j^2 mod 4", [](Nat j) { return (j * j) % 4; }},
  };
  const SouslinCode code = wirr_souslin();
  std::vector<Target> out;
  for (const auto& [label, y] : ys) out.push_back(baire_target(code, y, label));
  return out;
}

Report demo_wirr_analytic(const VerifyParams& p) {
  auto r = realize_analytic(fin2_anchored_scheme(), wirr_souslin(), fin2_ideal());
  VerifyParams q = p;
  q.resolution = std::min<Nat>(p.resolution, 8);
  Report rep = verify_realization(*r, wirr_targets(), q);
  stamp(rep, "wirr-analytic: " + r->name, q);
  return rep;
}

Report demo_gamma_not_lambda_z(const VerifyParams& p) {
  SweepParams sp{p.sweep, p.seed, p.resolution, p.horizon};
  auto ev = gamma_not_lambda_z(sp);
  std::vector<Target> targets;
  for (Nat k = 0; k < 6; ++k) {
    CantorPoint y = CantorPoint::padded(BinWord::zeros(k).append(1));
    targets.push_back(Target{y, nullptr, std::nullopt, y.literal()});
  }
  Report rep = verify_realization(*ev.realization, targets, p);
  rep.absorb(ev.report, "");
  for (auto& [k, v] : ev.report.notes.items()) rep.notes[k] = v;
  stamp(rep, "gamma-not-lambda-z: " + ev.report.subject, p);
  return rep;
}

Report demo_empty_lambda_fin2(const VerifyParams& p) {
  SweepParams sp{p.sweep, p.seed, p.resolution, p.horizon};
  auto chain = [](Nat n) { return DescribedSet::rect(DescribedSet::interval(n, std::nullopt), DescribedSet::all()); };
  auto y = [](Nat m) { return CantorPoint::padded(BinWord::zeros(m).append(1)); };
  auto ev = empty_limit_sequence(fin2_ideal(), chain, y, CantorPoint::zeros(), sp);
  Report rep = ev.report;
  rep.notes["construction"] = ev.realization->provenance;
  rep.notes["verification_level"] = to_string(ev.realization->level);
  stamp(rep, "empty-lambda-fin2: " + ev.report.subject, p);
  return rep;
}

Report demo_gamma_empty_discrete(const VerifyParams& p) {
  Report rep;
  for (const char* name : {"fin", "z", "summable", "banach"}) {
    const IdealHandle ideal = ideal_by_name(name);
    bool ok = true;
    Json rows = Json::array();
    for (Nat n = 0; n < 64; ++n) {
      // x_i = i: the neighbourhood {n} of the point n is hit exactly by the index set {n}.
      const Verdict v = ideal->decide(DescribedSet::finite({n})).verdict;
      ok = ok && v == Verdict::In;
      if (n < 4) rows.push_back(Json{{"point", n}, {"index_set", "{" + std::to_string(n) + "}"}, {"decision", to_string(v)}});
    }
    rep.check(std::string("no point of omega is a cluster point under ") + name, ok, Json{{"checked_points", 64}, {"sample", rows}});
  }
  rep.notes["construction"] = "x_i = i on discrete omega; every point has a neighbourhood visited by a single index";
  rep.notes["scope"] = "points 0..63 are checked; the argument is uniform in n";
  stamp(rep, "gamma-empty-discrete: cluster set of the identity on discrete omega", p);
  return rep;
}

Report demo_scheme_probe_suite(const VerifyParams& p) {
  Report rep;
  struct Case {
    const char* scheme;
    const char* ideal;
  };
  for (const Case& c : {Case{"fin-full", "fin"}, Case{"etf", "etf"}, Case{"fin2-anchored", "fin2"}, Case{"z-tail", "z"}}) {
    rep.absorb(check_scheme(*scheme_by_name(c.scheme), ideal_by_name(c.ideal), 6), std::string(c.scheme) + " axioms: ");
  }
  struct Probe {
    const char* scheme;
    const char* ideal;
    const char* point;
    ProbeOutcome expect;
  };
  const std::vector<Probe> probes = {
      {"fin-full", "fin", "0110:1", ProbeOutcome::NotInB},   {"etf", "etf", ":0", ProbeOutcome::InB},
      {"etf", "etf", "001:1", ProbeOutcome::NotInB},         {"fin2-anchored", "fin2", "1101:0", ProbeOutcome::InB},
      {"fin2-anchored", "fin2", ":01", ProbeOutcome::NotInB}, {"z-tail", "z", ":0", ProbeOutcome::InB},
      {"z-tail", "z", "0001:0", ProbeOutcome::NotInB},
  };
  ProbeParams pp;
  pp.sweep = p.sweep;
  pp.seed = p.seed;
  pp.horizon = p.horizon;
  pp.depth = p.replay_depth;
  for (const Probe& pr : probes) {
    const CantorPoint x = CantorPoint::parse(pr.point);
    const ProbeResult res = b_membership_probe(*scheme_by_name(pr.scheme), ideal_by_name(pr.ideal), x, pp);
    const std::string tag = std::string(pr.scheme) + " at " + x.literal();
    rep.check(tag + ": outcome " + to_string(pr.expect), res.outcome == pr.expect,
              Json{{"outcome", to_string(res.outcome)}, {"expected", to_string(pr.expect)}});
    rep.absorb(res.report, tag + ": ");
  }
  stamp(rep, "scheme-probe-suite: axioms and B-membership probes", p);
  return rep;
}

Report demo_fin_cluster(const VerifyParams& p) {
  // Part n = {i : the lowest set bit of i + 1 is bit n}: infinite, pairwise disjoint, covering omega.
  auto fam = std::make_shared<IndexedFamily>();
  fam->name = "trailing-ones";
  fam->part = [](Nat n) { return DescribedSet::residue((Nat{1} << n) - 1, Nat{1} << (n + 1)); };
  fam->locate = [](Nat i) -> std::optional<Nat> { return static_cast<Nat>(std::countr_zero(i + 1)); };
  const ClosedCode t = ClosedCode::by_name("zeros:3:1");
  // Dense in [T]: leftmost completion of the n-th node, cut back to its longest admitted prefix.
  auto dense = [t](Nat n) {
    BinWord s = word_from_index(n);
    while (!t.admits(s)) s = s.prefix(s.size() - 1);
    return t.leftmost_completion(s);
  };
  auto r = realize_cluster_closed(fam, dense, t, fin_ideal());
  Report rep = verify_realization(*r, {}, p);
  std::mt19937_64 rng(p.seed);
  for (const auto& target : sample_branches(t, 10, p.seed, 12)) {
    Json rows = Json::array();
    bool ok = true;
    for (Nat m = 1; m <= p.resolution; ++m) {
      auto c = r->cluster_for(target.point, m);
      bool good = c.has_value() && fin_ideal()->decide(c->set).verdict == Verdict::Positive;
      std::size_t checked = 0;
      if (good) {
        for (Nat i : elements_upto(c->set, std::min<Nat>(p.horizon, 1U << 14))) {
          ++checked;
          good = good && r->at(Site{i, 0}).prefix(m) == target.point.prefix(m);
        }
      }
      ok = ok && good;
      rows.push_back(Json{{"m", m}, {"set", c ? c->set.term() : "none"}, {"checked_sites", checked}, {"ok", good}});
    }
    rep.check("cluster certificate for " + target.label, ok, rows);
  }
  stamp(rep, "fin-cluster: " + r->name, p);
  return rep;
}

using DemoFn = Report (*)(const VerifyParams&);
const std::vector<std::pair<std::string, DemoFn>>& registry() {
  static const std::vector<std::pair<std::string, DemoFn>> demos = {
      {"fin-closed", demo_fin_closed},
      {"etf-fsigma", demo_etf_fsigma},
      {"z-fsigma", demo_z_fsigma},
      {"fin2-fsigmadelta", demo_fin2_fsigmadelta},
      {"wirr-analytic", demo_wirr_analytic},
      {"gamma-not-lambda-z", demo_gamma_not_lambda_z},
      {"empty-lambda-fin2", demo_empty_lambda_fin2},
      {"gamma-empty-discrete", demo_gamma_empty_discrete},
      {"scheme-probe-suite", demo_scheme_probe_suite},
      {"fin-cluster", demo_fin_cluster},
  };
  return demos;
}

}  // namespace

const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [n, f] : registry()) out.push_back(n);
    return out;
  }();
  return names;
}

Report run_demo(const std::string& name, const VerifyParams& p) {
  for (const auto& [n, f] : registry()) {
    if (n == name) return f(p);
  }
  throw std::invalid_argument("unknown demo: " + name);
}

namespace {

std::string str_or(const Json& j, const char* key, const std::string& fallback) {
  return j.contains(key) ? j.at(key).get<std::string>() : fallback;
}

SigmaDeltaCode sigma_delta_by_name(const std::string& name) {
  if (name == "inf-zeros") return infinitely_many_zeros_code();
  if (name == "whole") return whole_space_code();
  throw std::invalid_argument("unknown F_sigma-delta code: " + name + " (inf-zeros | whole)");
}

SouslinCode souslin_by_name(const std::string& name) {
  if (name == "wirr") return wirr_souslin();
  throw std::invalid_argument("unknown Souslin code: " + name + " (wirr)");
}

std::vector<std::string> string_list(const Json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (j.at(key).is_string()) return {j.at(key).get<std::string>()};
  for (const auto& e : j.at(key)) out.push_back(e.get<std::string>());
  return out;
}

std::vector<Target> point_targets(const Json& j) {
  std::vector<Target> out;
  for (const auto& lit : string_list(j, "points")) {
    CantorPoint x = CantorPoint::parse(lit);
    out.push_back(Target{x, nullptr, std::nullopt, x.literal()});
  }
  return out;
}

}  // namespace

Subject subject_from_json(const Json& j, const VerifyParams& p) {
  const std::string kind = str_or(j, "kind", "");
  Subject sub;
  if (kind == "closed") {
    const auto codes = string_list(j, "targets");
    const ClosedCode t = ClosedCode::by_name(codes.empty() ? "full" : codes.front());
    sub.realization = realize_closed(scheme_by_name(str_or(j, "scheme", "fin-full")), t, ideal_by_name(str_or(j, "ideal", "fin")));
    sub.targets = point_targets(j);
    if (sub.targets.empty()) sub.targets = sample_branches(t, 20, p.seed, 12);
  } else if (kind == "fsigma") {
    std::vector<ClosedCode> pieces;
    for (const auto& c : string_list(j, "targets")) pieces.push_back(ClosedCode::by_name(c));
    if (pieces.empty()) pieces.push_back(ClosedCode::full());
    const std::string scheme = str_or(j, "scheme", "etf");
    const std::string ideal = str_or(j, "ideal", scheme == "z-tail" ? "z" : "etf");
    sub.realization = realize_fsigma(scheme_by_name(scheme), pieces, ideal_by_name(ideal));
    sub.targets = point_targets(j);
    if (sub.targets.empty()) {
      for (std::size_t n = 0; n < pieces.size(); ++n) {
        for (auto& t : sample_branches(pieces[n], 4, p.seed + n, 10, n)) sub.targets.push_back(std::move(t));
      }
    }
  } else if (kind == "fsigmadelta") {
    const auto codes = string_list(j, "targets");
    sub.realization = realize_fsigmadelta(scheme_by_name(str_or(j, "scheme", "fin2-anchored")),
                                          sigma_delta_by_name(codes.empty() ? "inf-zeros" : codes.front()),
                                          ideal_by_name(str_or(j, "ideal", "fin2")));
    sub.targets = point_targets(j);
    if (sub.targets.empty()) sub.targets = zero_recurrent_points(10, p.seed);
  } else if (kind == "analytic") {
    const auto codes = string_list(j, "targets");
    const SouslinCode code = souslin_by_name(codes.empty() ? "wirr" : codes.front());
    sub.realization = realize_analytic(scheme_by_name(str_or(j, "scheme", "fin2-anchored")), code,
                                       ideal_by_name(str_or(j, "ideal", "fin2")));
    if (j.contains("baire")) {
      for (const auto& period : j.at("baire")) {
        std::vector<Nat> cyc = period.get<std::vector<Nat>>();
        if (cyc.empty()) throw std::invalid_argument("baire period must be nonempty");
        sub.targets.push_back(baire_target(code, [cyc](Nat i) { return cyc[i % cyc.size()]; }, "y=(" + period.dump() + ")^inf"));
      }
    } else {
      sub.targets = wirr_targets();
    }
  } else {
    throw std::invalid_argument("subject kind must be closed | fsigma | fsigmadelta | analytic, got '" + kind + "'");
  }
  return sub;
}

Report verify_subject(const Json& j, const VerifyParams& p) {
  const Subject sub = subject_from_json(j, p);
  return verify_realization(*sub.realization, sub.targets, p);
}

// ---------------------------------------------------------------- report formats

Json report_json(const Report& r) {
  Json clauses = Json::array();
  for (const auto& c : r.clauses) clauses.push_back(Json{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"evidence", c.evidence}});
  return Json{{"subject", r.subject},   {"verdict", to_string(r.verdict())}, {"version", kToolkitVersion},
              {"horizons", r.horizons}, {"clauses", clauses},                {"notes", r.notes}};
}

Report report_from_json(const Json& j) {
  for (const char* key : {"subject", "verdict", "version", "horizons", "clauses"}) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("report is missing key ") + key);
  }
  Report r;
  r.subject = j.at("subject").get<std::string>();
  r.horizons = j.at("horizons");
  if (j.contains("notes")) r.notes = j.at("notes");
  for (const auto& c : j.at("clauses")) {
    const std::string v = c.at("verdict").get<std::string>();
    ClauseVerdict cv;
    if (v == "pass") {
      cv = ClauseVerdict::Pass;
    } else if (v == "fail") {
      cv = ClauseVerdict::Fail;
    } else if (v == "inconclusive") {
      cv = ClauseVerdict::Inconclusive;
    } else {
      throw std::invalid_argument("unknown clause verdict: " + v);
    }
    r.add(c.at("name").get<std::string>(), cv, c.value("evidence", Json::object()));
  }
  if (j.at("verdict").get<std::string>() != to_string(r.verdict())) {
    throw std::invalid_argument("report verdict does not match its clauses");
  }
  return r;
}

std::string emit_report(const Report& r, ReportFormat f) {
  if (f == ReportFormat::Json) return report_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << r.subject << "\n";
  out << "verdict: " << to_string(r.verdict()) << "  (version " << kToolkitVersion << ")\n";
  if (!r.horizons.empty()) out << "horizons: " << r.horizons.dump() << "\n";
  for (const auto& c : r.clauses) out << "  [" << to_string(c.verdict) << "] " << c.name << "\n";
  for (const auto& [k, v] : r.notes.items()) out << "  note " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  return out.str();
}

int exit_code(ClauseVerdict v) {
  switch (v) {
    case ClauseVerdict::Pass: return 0;
    case ClauseVerdict::Fail: return 2;
    case ClauseVerdict::Inconclusive: return 3;
  }
  return 3;
}

}  // namespace idealpts
