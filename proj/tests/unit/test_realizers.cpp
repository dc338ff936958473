#include <random>

#include "doctest.h"
#include "idealpts/realizers.hpp"
#include "idealpts/verify.hpp"

using namespace idealpts;

namespace {

VerifyParams quick() {
  VerifyParams p;
  p.horizon = 20000;
  p.range_count = 2000;
  p.resolution = 8;
  p.replay_depth = 8;
  return p;
}

std::string failures(const Report& r) {
  std::string out;
  for (const auto& c : r.clauses) {
    if (c.verdict != ClauseVerdict::Pass) out += c.name + ": " + c.evidence.dump().substr(0, 400) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("finite realization: constant on parts, exact certificates") {
  const CantorPoint p = CantorPoint::parse("-:0");
  const CantorPoint q = CantorPoint::parse("1:01");
  const auto r = realize_finite({p, q}, {DescribedSet::residue(0, 2), DescribedSet::residue(1, 2)}, fin_ideal());
  for (Nat n = 0; n < 500; ++n) CHECK(r->at(Site{n, 0}) == (n % 2 == 0 ? p : q));
  const Report rep = verify_realization(*r, {Target{p, nullptr, std::nullopt, "p"}, Target{q, nullptr, std::nullopt, "q"}}, quick());
  CHECK_MESSAGE(rep.verdict() == ClauseVerdict::Pass, failures(rep));
  // A point that is not a value has no certificate and fails.
  const Report bad = verify_target(*r, Target{CantorPoint::ones(), nullptr, std::nullopt, "ones"}, quick());
  CHECK(bad.verdict() == ClauseVerdict::Fail);
}

TEST_CASE("finite realization rejects bad partitions") {
  const auto p = CantorPoint::zeros();
  const auto q = CantorPoint::ones();
  CHECK_THROWS_AS(realize_finite({p, q}, {DescribedSet::residue(0, 2), DescribedSet::residue(0, 4)}, fin_ideal()),
                  std::invalid_argument);
  CHECK_THROWS_AS(realize_finite({p, q}, {DescribedSet::finite({0}), DescribedSet::interval(1, std::nullopt)}, fin_ideal()),
                  std::invalid_argument);
  CHECK_THROWS_AS(realize_finite({p, p}, {DescribedSet::residue(0, 2), DescribedSet::residue(1, 2)}, fin_ideal()),
                  std::invalid_argument);
  CHECK_THROWS_AS(realize_finite({p, q}, {DescribedSet::residue(0, 3), DescribedSet::residue(1, 3)}, fin_ideal()),
                  std::invalid_argument);
}

TEST_CASE("closed realization values do not depend on evaluation order") {
  const ClosedCode t = ClosedCode::random_pruned(5, 6);
  const auto forward = realize_closed(fin_full_scheme(), t, fin_ideal());
  const auto backward = realize_closed(fin_full_scheme(), t, fin_ideal());
  std::vector<std::string> a;
  for (Nat n = 0; n < 3000; ++n) a.push_back(forward->at(Site{n, 0}).literal());
  for (Nat n = 3000; n-- > 0;) CHECK(backward->at(Site{n, 0}).literal() == a[n]);
  for (Nat n = 0; n < 3000; ++n) CHECK(closed_membership(t, forward->at(Site{n, 0}), 30) == Membership::In);
}

TEST_CASE("closed realization preconditions") {
  const ClosedCode t = ClosedCode::by_name("cyl:01");
  CHECK_THROWS_AS(realize_closed(fin2_anchored_scheme(), t, fin2_ideal()), std::invalid_argument);  // not full
  CHECK_THROWS_AS(realize_closed(fin_full_scheme(), t, fin2_ideal()), std::invalid_argument);       // carrier
  const auto r = realize_closed(fin_full_scheme(), t, fin_ideal());
  const Report rep = verify_target(*r, Target{CantorPoint::parse("1:0"), nullptr, std::nullopt, "outside"}, quick());
  CHECK(rep.verdict() == ClauseVerdict::Fail);
}

TEST_CASE("corrupted certificates are caught") {
  const ClosedCode t = ClosedCode::by_name("random:11:5");
  const auto honest = realize_closed(fin_full_scheme(), t, fin_ideal());
  const CantorPoint eta = t.leftmost_completion(BinWord{});
  const Target target{eta, nullptr, std::nullopt, "eta"};
  CHECK_MESSAGE(verify_target(*honest, target, quick()).verdict() == ClauseVerdict::Pass,
                failures(verify_target(*honest, target, quick())));

  auto small_set = std::make_shared<Realization>(*honest);
  small_set->cert_for = [honest](const Target& x) {
    LimitCertificate c = honest->cert_for(x);
    c.set = DescribedSet::finite({1, 2, 3});
    return c;
  };
  const Report r1 = verify_target(*small_set, target, quick());
  CHECK(r1.verdict() == ClauseVerdict::Fail);
  CHECK(r1.clauses.front().name == "certificate set is positive");
  CHECK(r1.clauses.front().verdict == ClauseVerdict::Fail);

  // Threshold zero on the whole carrier claims every value is near eta.
  auto eager = std::make_shared<Realization>(*honest);
  eager->cert_for = [honest](const Target& x) {
    LimitCertificate c = honest->cert_for(x);
    c.set = DescribedSet::all();
    c.threshold = [](Nat) { return Nat{0}; };
    return c;
  };
  CHECK(verify_target(*eager, target, quick()).verdict() == ClauseVerdict::Fail);
}

TEST_CASE("finite and closed realizations agree on a single branch") {
  const CantorPoint p = CantorPoint::parse("01:1");
  const ClosedCode t = ClosedCode::single_branch(p);
  const auto closed = realize_closed(fin_full_scheme(), t, fin_ideal());
  const auto finite = realize_finite({p}, {DescribedSet::all()}, fin_ideal());
  for (Nat n = 0; n < 2000; ++n) CHECK(closed->at(Site{n, 0}) == finite->at(Site{n, 0}));
  // Each certificate is valid for the other realization since the values coincide.
  const Target target{p, nullptr, std::nullopt, "p"};
  auto swapped_a = std::make_shared<Realization>(*finite);
  swapped_a->cert_for = closed->cert_for;
  auto swapped_b = std::make_shared<Realization>(*closed);
  swapped_b->cert_for = finite->cert_for;
  swapped_b->level = VerificationLevel::OneSided;
  for (const auto* r : {swapped_a.get(), swapped_b.get()}) {
    const Report rep = verify_target(*r, target, quick());
    CHECK_MESSAGE(rep.verdict() == ClauseVerdict::Pass, failures(rep));
  }
}

TEST_CASE("gamma-not-lambda-z: values and densities against brute force") {
  const auto ev = gamma_not_lambda_z(SweepParams{20, 3, 6, 20000});
  CHECK_MESSAGE(ev.report.verdict() == ClauseVerdict::Pass, failures(ev.report));
  const auto& r = *ev.realization;
  // The sites whose value lies within 2^-3 of 0^inf are 0 and the union of S_k, k >= 3: the multiples of 8.
  const Nat n = Nat{1} << 16;
  Nat near = 0;
  for (Nat i = 0; i < n; ++i) {
    const CantorPoint x = r.at(Site{i, 0});
    if (metric(x, CantorPoint::zeros()).at_most(3)) ++near;
    // x_i = 0^k 1 0^inf with 2^k the largest power of two dividing i.
    if (i > 0) {
      Nat k = 0;
      while ((i >> k) % 2 == 0) ++k;
      CHECK(x == CantorPoint::padded(BinWord::zeros(k).append(1)));
    }
  }
  CHECK(near == n / 8);
  CHECK_THROWS_AS(r.cert_for(Target{CantorPoint::zeros(), nullptr, std::nullopt, "0"}), std::invalid_argument);
}

TEST_CASE("empty limit sequence rejects a chain step outside the ideal") {
  auto chain = [](Nat n) { return DescribedSet::interval(n, std::nullopt); };
  auto y = [](Nat m) { return CantorPoint::padded(BinWord::zeros(m).append(1)); };
  // Under Fin the steps {n} are in the ideal and every y_n is isolated.
  const auto good = empty_limit_sequence(fin_ideal(), chain, y, CantorPoint::zeros(), SweepParams{10, 1, 5, 5000});
  CHECK_MESSAGE(good.report.verdict() != ClauseVerdict::Fail, failures(good.report));
  // Steps of residue chains are infinite, so the construction is refused.
  auto coarse = [](Nat n) { return DescribedSet::residue(0, Nat{1} << n); };
  CHECK_THROWS_AS(empty_limit_sequence(fin_ideal(), coarse, y, CantorPoint::zeros(), SweepParams{10, 1, 5, 5000}),
                  std::invalid_argument);
}

TEST_CASE("scheme from a realization: nodes are visit sets") {
  // Values of the closed realization on the full tree visit every cylinder.
  const auto r = realize_closed(fin_full_scheme(), ClosedCode::full(), fin_ideal());
  const auto a = scheme_from_realization(r, [](const BinWord& s) { return s; }, "note", 4096);
  for (Nat i = 0; i < 15; ++i) {
    const BinWord s = word_from_index(i);
    std::vector<Nat> brute;
    for (Nat n = 0; n < 300; ++n) {
      if (r->at(Site{n, 0}).prefix(s.size()) == s) brute.push_back(n);
    }
    CHECK(elements_upto(a->node(s), 299) == brute);
  }
  CHECK_THROWS_AS(scheme_from_realization(r, [](const BinWord&) { return BinWord{}; }, "note", 64), std::invalid_argument);
}
