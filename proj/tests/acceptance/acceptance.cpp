// Acceptance suite: one PASS/FAIL line per criterion, tolerances and time limits pinned below.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "idealpts/verify.hpp"

using namespace idealpts;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double limit_seconds;  // 0 means no time limit
  std::function<Outcome()> run;
};

bool all_pass(const Report& r) {
  for (const auto& c : r.clauses) {
    if (c.verdict != ClauseVerdict::Pass) return false;
  }
  return true;
}

std::string first_problem(const Report& r) {
  for (const auto& c : r.clauses) {
    if (c.verdict != ClauseVerdict::Pass) return c.name + " -> " + to_string(c.verdict);
  }
  return "";
}

// 1. Level-d nodes of the full Fin-scheme partition [0, 2^d * 100) exactly, d <= 10.
Outcome fin_scheme_exactness() {
  const auto a = fin_full_scheme();
  for (unsigned d = 0; d <= 10; ++d) {
    const Nat bound = (Nat{1} << d) * 100;
    std::vector<int> hits(bound, 0);
    for (Nat v = 0; v < (Nat{1} << d); ++v) {
      std::vector<std::uint8_t> bits(d);
      for (unsigned i = 0; i < d; ++i) bits[i] = (v >> i) & 1U;
      const BinWord s(bits);
      const auto members = elements_upto(a->node(s), bound - 1);
      // Brute force: n lies in node(s) iff n = value(s) mod 2^d.
      std::vector<Nat> brute;
      for (Nat n = v; n < bound; n += Nat{1} << d) brute.push_back(n);
      if (members != brute) return {false, "node " + s.str() + " differs from its residue class"};
      for (Nat n : members) ++hits[n];
    }
    for (Nat n = 0; n < bound; ++n) {
      if (hits[n] != 1) return {false, "d=" + std::to_string(d) + ": " + std::to_string(n) + " covered " + std::to_string(hits[n]) + " times"};
    }
  }
  return {true, "d = 0..10 exact"};
}

// 2. No wrong In/Positive on the corpus; Unknown at most 20%.
Outcome decision_soundness() {
  std::size_t pairs = 0;
  std::size_t unknown = 0;
  const auto items = corpus::build();
  for (const auto& item : items) {
    const DescribedSet s = parse_set(item.term);
    for (const auto& [ideal, truth] : item.truth) {
      const Verdict got = ideal_by_name(ideal)->decide(s).verdict;
      ++pairs;
      if (got == Verdict::Unknown) {
        ++unknown;
      } else if (got != truth) {
        return {false, ideal + " wrong on " + item.term};
      }
    }
  }
  std::ostringstream d;
  d << items.size() << " sets, " << pairs << " decisions, " << unknown << " unknown";
  return {unknown * 5 <= pairs, d.str()};
}

// 3. The block set separates Z from Banach density zero.
Outcome z_minus_b() {
  const DescribedSet b = parse_set("(blocks 2 1 0)");
  if (density_zero_ideal()->decide(b).verdict != Verdict::In) return {false, "not In Z"};
  if (ideal_by_name("banach")->decide(b).verdict != Verdict::Positive) return {false, "not Positive for Banach"};
  const Nat n = Nat{1} << 20;
  const Nat w = 19;
  std::vector<std::uint8_t> chi(n, 0);
  for (Nat k = 0; (Nat{1} << k) < n; ++k) {
    for (Nat j = 0; j < k && (Nat{1} << k) + j < n; ++j) chi[(Nat{1} << k) + j] = 1;
  }
  Nat brute = 0;
  for (auto c : chi) brute += c;
  Nat window = 0;
  Nat best = 0;
  for (Nat i = 0; i < n; ++i) {
    window += chi[i];
    if (i >= w) window -= chi[i - w];
    if (i + 1 >= w) best = std::max(best, window);
  }
  if (count_upto(b, n) != brute) return {false, "count_upto differs from the block-count oracle"};
  const Rational density = density_upto(b, n);
  if (density > Rational(21, 1024)) return {false, "density above 21/1024"};
  const Rational bw = banach_window(b, n, w);
  if (bw != Rational(best, w)) return {false, "banach_window differs from the sliding-window oracle"};
  if (bw < Rational(18, 19)) return {false, "banach_window below 18/19"};
  return {true, "count " + std::to_string(brute) + ", density " + rational_str(density) + ", window " + rational_str(bw)};
}

// 4. Scheme axioms, with no inconclusive clause.
Outcome scheme_axioms() {
  struct Case {
    SchemeHandle a;
    IdealHandle ideal;
    unsigned depth;
  };
  const auto an = fin2_anchored_scheme();
  const std::vector<Case> cases = {
      {fin_full_scheme(), fin_ideal(), 8},
      {empty_times_fin_scheme(), ideal_by_name("etf"), 8},
      {an, fin2_ideal(), 8},
      {fullize(an), fin2_ideal(), 6},
      {shift_to_zero(an, CantorPoint::parse("101:0")), fin2_ideal(), 6},
      {double_to_sigma02(an), fin2_ideal(), 6},
      {densify(an, q_enum, "q_enum"), fin2_ideal(), 6},
  };
  std::size_t clauses = 0;
  for (const auto& c : cases) {
    const Report r = check_scheme(*c.a, c.ideal, c.depth);
    clauses += r.clauses.size();
    if (!all_pass(r)) return {false, c.a->name + ": " + first_problem(r)};
  }
  return {true, std::to_string(cases.size()) + " schemes, " + std::to_string(clauses) + " clauses"};
}

// 5. Probes on the anchored Fin^2-scheme.
Outcome b_probes() {
  const auto an = fin2_anchored_scheme();
  const auto ideal = fin2_ideal();
  ProbeParams p;
  p.depth = 10;
  p.sweep = 100;
  std::size_t not_in_b = 0;
  // w^inf for every word w of length <= 5 with at least two ones.
  for (Nat i = 0; i < (Nat{1} << 6) - 1; ++i) {
    const BinWord w = word_from_index(i);
    if (w.count_ones() < 2) continue;
    const CantorPoint x = CantorPoint::periodic(BinWord{}, w);
    const ProbeResult res = b_membership_probe(*an, ideal, x, p);
    if (res.outcome != ProbeOutcome::NotInB || !all_pass(res.report)) {
      return {false, x.literal() + ": " + to_string(res.outcome) + " " + first_problem(res.report)};
    }
    ++not_in_b;
  }
  std::size_t in_b = 0;
  for (const char* lit : {":0", "1:0", "01:0", "11:0", "101:0", "0011:0", "11111:0", "010011:0"}) {
    const CantorPoint x = CantorPoint::parse(lit);
    const ProbeResult res = b_membership_probe(*an, ideal, x, p);
    if (res.outcome != ProbeOutcome::InB || !all_pass(res.report)) {
      return {false, x.literal() + ": " + to_string(res.outcome) + " " + first_problem(res.report)};
    }
    ++in_b;
  }
  return {true, std::to_string(not_in_b) + " NotInB certificates replayed, " + std::to_string(in_b) + " InB sweeps of 100"};
}

std::vector<Target> sample_branches(const ClosedCode& t, std::size_t count, std::uint64_t seed, unsigned depth) {
  std::mt19937_64 rng(seed);
  std::vector<Target> out;
  for (std::size_t k = 0; k < count; ++k) {
    BinWord s;
    for (unsigned d = 0; d < depth; ++d) {
      const auto kids = t.admitted_children(s);
      s = s.append(kids[rng() % kids.size()]);
    }
    const CantorPoint p = t.leftmost_completion(s);
    out.push_back(Target{p, nullptr, std::nullopt, p.literal()});
  }
  return out;
}

VerifyParams base_params() {
  VerifyParams p;
  p.resolution = 10;
  p.horizon = 100000;
  p.range_count = 10000;
  p.replay_depth = 10;
  return p;
}

// 6. Closed realizer on 5 random trees, 20 branches each.
Outcome closed_realizer() {
  const VerifyParams p = base_params();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ClosedCode t = ClosedCode::random_pruned(seed, 8);
    const auto r = realize_closed(fin_full_scheme(), t, fin_ideal());
    const Report rep = verify_realization(*r, sample_branches(t, 20, seed, 12), p);
    if (!all_pass(rep)) return {false, t.name() + ": " + first_problem(rep)};
  }
  return {true, "5 trees x 20 branches, resolution 2^-10, horizon 10^5, range 10^4"};
}

Outcome demo_passes(const std::string& name, VerifyParams p, const std::function<std::string(const Report&)>& extra) {
  const Report r = run_demo(name, p);
  if (!all_pass(r)) return {false, name + ": " + first_problem(r)};
  const std::string problem = extra ? extra(r) : "";
  if (!problem.empty()) return {false, name + ": " + problem};
  return {true, name + " " + std::to_string(r.clauses.size()) + " clauses"};
}

std::string count_targets(const Report& r, std::size_t expect) {
  std::size_t n = 0;
  for (const auto& c : r.clauses) n += c.name.rfind("target ", 0) == 0 ? 1 : 0;
  return n >= expect ? "" : "only " + std::to_string(n) + " targets";
}

// 11. Fin (x) Fin agrees with the built-in Fin^2 on the whole corpus.
Outcome fubini_coherence() {
  const auto product = fubini_product(fin_ideal(), fin_ideal());
  const auto fin2 = fin2_ideal();
  std::size_t decided = 0;
  const auto items = corpus::build();
  for (const auto& item : items) {
    const DescribedSet s = parse_set(item.term);
    const Verdict a = product->decide(s).verdict;
    const Verdict b = fin2->decide(s).verdict;
    if (a != b) return {false, item.term + ": product " + to_string(a) + ", built-in " + to_string(b)};
    decided += a != Verdict::Unknown ? 1 : 0;
  }
  return {true, std::to_string(items.size()) + " sets, " + std::to_string(decided) + " decided identically"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Fin-scheme exactness", 5, fin_scheme_exactness},
      {2, "ideal-decision soundness", 10, decision_soundness},
      {3, "Z minus Banach separation", 0, z_minus_b},
      {4, "scheme axiom suite", 30, scheme_axioms},
      {5, "B-probe certificates", 60, b_probes},
      {6, "closed realizer", 60, closed_realizer},
      {7, "F_sigma realizer (empty x Fin)", 0,
       [] { return demo_passes("etf-fsigma", base_params(), [](const Report& r) { return count_targets(r, 20); }); }},
      {8, "F_sigma-delta realizer (Fin^2)", 120,
       [] {
         return demo_passes("fin2-fsigmadelta", base_params(), [](const Report& r) {
           if (r.notes.value("carrier", "") != "omega2") return std::string("carrier is not the plane");
           return count_targets(r, 10);
         });
       }},
      {9, "analytic realizer", 0,
       [] {
         return demo_passes("wirr-analytic", base_params(), [](const Report& r) {
           if (r.notes.value("verification_level", "") != "OneSided") return std::string("missing OneSided flag");
           return count_targets(r, 5);
         });
       }},
      {10, "Gamma/Lambda separations", 120,
       [] {
         const auto t0 = std::chrono::steady_clock::now();
         Outcome a = demo_passes("gamma-not-lambda-z", base_params(), nullptr);
         const double s1 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
         if (!a.ok || s1 > 60) return Outcome{false, a.detail};
         const auto t1 = std::chrono::steady_clock::now();
         Outcome b = demo_passes("empty-lambda-fin2", base_params(), nullptr);
         const double s2 = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
         if (!b.ok || s2 > 60) return Outcome{false, b.detail};
         return Outcome{true, a.detail + "; " + b.detail};
       }},
      {11, "Fubini coherence", 0, fubini_coherence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.ok = false;
      o.detail += " (over the time limit)";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.title << " [" << timing;
    if (c.limit_seconds > 0) std::cout << " / limit " << c.limit_seconds << "s";
    std::cout << "] " << o.detail << std::endl;
    failed += o.ok ? 0 : 1;
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " FAILED") << std::endl;
  return failed == 0 ? 0 : 1;
}
