#include "corpus.hpp"
#include "doctest.h"
#include "idealpts/ideals.hpp"
#include "oracles.hpp"

#include <set>

using namespace idealpts;

namespace {
Verdict v(const std::string& ideal, const std::string& term) { return ideal_by_name(ideal)->decide(parse_set(term)).verdict; }
}  // namespace

TEST_CASE("decisions on the regression corpus are never wrong") {
  std::size_t pairs = 0;
  std::size_t unknown = 0;
  for (const auto& item : corpus::build()) {
    for (const auto& [ideal, truth] : item.truth) {
      const Verdict got = v(ideal, item.term);
      ++pairs;
      if (got == Verdict::Unknown) {
        ++unknown;
        continue;
      }
      CHECK_MESSAGE(got == truth, ideal << " on " << item.term << " (" << item.family << ")");
    }
  }
  CHECK(unknown * 5 <= pairs);
}

TEST_CASE("documented decisions") {
  CHECK(v("z", "(res 1 4)") == Verdict::Positive);
  CHECK(v("summable", "(enum pow 2)") == Verdict::In);
  CHECK(v("z", "(blocks 2 1 0)") == Verdict::In);
  CHECK(v("banach", "(blocks 2 1 0)") == Verdict::Positive);
  CHECK(v("fin2", "(row 0)") == Verdict::In);
  CHECK(v("fin2", "(rect (res 0 2) (ival 0 *))") == Verdict::Positive);
  const auto etf = fubini_product(trivial_ideal(), fin_ideal());
  CHECK(etf->decide(parse_set("(col 3)")).verdict == Verdict::Positive);
  CHECK(etf->decide(parse_set("(under 1 0)")).verdict == Verdict::In);
  CHECK(iw_ideal()->decide(parse_set("(fin 0 1 2)")).verdict == Verdict::In);
}

TEST_CASE("ideal laws hold on random terms") {
  std::mt19937_64 rng(21);
  for (const char* name : {"fin", "summable", "z", "banach"}) {
    const auto ideal = ideal_by_name(name);
    for (int trial = 0; trial < 150; ++trial) {
      const auto a = oracle::random_term(rng, 2);
      const auto b = oracle::random_term(rng, 2);
      const Verdict va = ideal->decide(parse_set(a.text)).verdict;
      const Verdict vb = ideal->decide(parse_set(b.text)).verdict;
      const Verdict vu = ideal->decide(parse_set(oracle::unite(a, b).text)).verdict;
      const Verdict vi = ideal->decide(parse_set(oracle::meet(a, b).text)).verdict;
      const Verdict vc = ideal->decide(parse_set(oracle::compl_(a).text)).verdict;
      // Closure under finite unions and subsets.
      if (va == Verdict::In && vb == Verdict::In) CHECK_MESSAGE(vu != Verdict::Positive, name << " " << a.text << " " << b.text);
      if (va == Verdict::In) CHECK_MESSAGE(vi != Verdict::Positive, name << " " << a.text << " " << b.text);
      if (vi == Verdict::Positive) CHECK_MESSAGE(va != Verdict::In, name << " " << a.text << " " << b.text);
      // Properness: a set and its complement are never both small.
      CHECK_MESSAGE(!(va == Verdict::In && vc == Verdict::In), name << " " << a.text);
      // Every finite set is small; every set the ideal calls positive is infinite.
      if (va == Verdict::Positive) CHECK(is_finite(parse_set(a.text)) != Finiteness::Finite);
    }
  }
}

TEST_CASE("Fubini sum places the components on evens and odds") {
  const auto s = fubini_sum(fin_ideal(), density_zero_ideal());
  CHECK(s->decide(parse_set("(res 0 2)")).verdict == Verdict::Positive);  // full left component
  CHECK(s->decide(parse_set("(inter (res 1 2) (enum pow 2))")).verdict != Verdict::Positive);
  CHECK(s->decide(parse_set("(fin 1 2 3)")).verdict == Verdict::In);
}

TEST_CASE("restriction") {
  const auto r = restrict_ideal(fin_ideal(), parse_set("(res 0 2)"));
  CHECK(r->decide(parse_set("(res 0 4)")).verdict == Verdict::Positive);
  CHECK(restrict_ideal(density_zero_ideal(), parse_set("(res 0 2)"))->decide(parse_set("(fin 2 4)")).verdict == Verdict::In);
  CHECK_THROWS(restrict_ideal(fin_ideal(), parse_set("(fin 1 2)")));
}

TEST_CASE("generated positive candidates are positive and distinct") {
  for (const char* name : {"fin", "z", "fin2", "etf"}) {
    const auto ideal = ideal_by_name(name);
    const auto cands = positive_candidates(ideal, 40, 3);
    CHECK(cands.size() == 40);
    std::set<std::string> terms;
    for (const auto& c : cands) {
      CHECK_MESSAGE(ideal->decide(c).verdict == Verdict::Positive, name << " " << c.term());
      terms.insert(c.term());
    }
    CHECK(terms.size() == cands.size());
  }
}

TEST_CASE("refuting a candidate against a decreasing chain") {
  std::vector<DescribedSet> chain;
  for (Nat n = 0; n < 20; ++n) chain.push_back(parse_set("(res 0 " + std::to_string(Nat{1} << n) + ")"));
  const auto hit = refute_candidate(chain, parse_set("(res 4 8)"));
  REQUIRE(hit.has_value());
  CHECK(*hit == 3);  // 4 mod 8 leaves multiples of 8 immediately
  CHECK_FALSE(refute_candidate(chain, parse_set("(fin 0 8 16)")).has_value());
}

TEST_CASE("reductions along the identity and affine maps") {
  std::vector<DescribedSet> samples;
  for (const auto& item : corpus::build()) {
    if (item.truth.count("fin")) samples.push_back(parse_set(item.term));
  }
  const auto rep = check_reduction(ReductionMap::identity(), fin_ideal(), fin_ideal(), samples, ReductionMode::RudinBlass);
  CHECK(rep.violations == 0);
  const auto aff = check_reduction(ReductionMap::affine(2, 0), fin_ideal(), fin_ideal(), samples, ReductionMode::Katetov);
  CHECK(aff.violations == 0);
}
