#include <algorithm>
#include "doctest.h"
#include "idealpts/natsets.hpp"
#include "oracles.hpp"

using namespace idealpts;

TEST_CASE("word index is a bijection with the level order") {
  for (Nat n = 0; n < 5000; ++n) {
    const BinWord u = word_from_index(n);
    CHECK(word_index(u) == n);
    CHECK(u.size() == level_of(n));
    const auto w = oracle::tree_word(n);
    REQUIRE(w.size() == u.size());
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(u[i] == w[i]);
  }
}

TEST_CASE("pairing code round trips and orders like the integers") {
  for (Nat n = 0; n < 20; ++n) {
    for (Nat k = 0; k < 200; ++k) {
      const Nat m = pair(n, k);
      CHECK(m == (Nat{1} << n) * (2 * k + 1) - 1);
      CHECK(unpair(m) == std::make_pair(n, k));
    }
  }
  for (Nat n1 = 0; n1 < 8; ++n1) {
    for (Nat k1 = 0; k1 < 40; ++k1) {
      for (Nat n2 = 0; n2 < 8; ++n2) {
        for (Nat k2 = 0; k2 < 40; ++k2) {
          const Nat a = pair(n1, k1);
          const Nat b = pair(n2, k2);
          CHECK(compare_pair_codes(n1, k1, n2, k2) == (a < b ? -1 : a > b ? 1 : 0));
        }
      }
    }
  }
}

TEST_CASE("membership of random set terms matches the reference semantics") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const oracle::Term t = oracle::random_term(rng, 3);
    const DescribedSet s = parse_set(t.text);
    for (Nat n = 0; n < 1500; ++n) {
      REQUIRE_MESSAGE(member(s, n) == t.member(n), t.text << " at " << n);
    }
  }
}

TEST_CASE("elements_upto and counts agree with a brute-force scan") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const oracle::Term t = oracle::random_term(rng, 2);
    const DescribedSet s = parse_set(t.text);
    std::vector<Nat> brute;
    for (Nat n = 0; n <= 3000; ++n) {
      if (t.member(n)) brute.push_back(n);
    }
    CHECK_MESSAGE(elements_upto(s, 3000) == brute, t.text);
    // Counts and densities are taken over [0, 3000).
    const Nat below = static_cast<Nat>(std::count_if(brute.begin(), brute.end(), [](Nat n) { return n < 3000; }));
    CHECK_MESSAGE(count_upto(s, 3000) == below, t.text);
    CHECK(density_upto(s, 3000) == Rational(below, 3000));
  }
}

TEST_CASE("finiteness and emptiness verdicts are never contradicted") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const oracle::Term t = oracle::random_term(rng, 3);
    const DescribedSet s = parse_set(t.text);
    const Finiteness f = is_finite(s);
    const Tri e = is_empty(s);
    bool any_low = false;
    bool any_high = false;
    for (Nat n = 0; n < 4096; ++n) any_low = any_low || t.member(n);
    for (Nat n = 1 << 16; n < (1 << 16) + 4096; ++n) any_high = any_high || t.member(n);
    // Every generated finite piece lies below 600, so members far out witness infinitude.
    if (f == Finiteness::Finite) CHECK_MESSAGE(!any_high, t.text);
    if (e == Tri::Yes) CHECK_MESSAGE(!any_low, t.text);
    if (e == Tri::No && f == Finiteness::Finite) CHECK_MESSAGE(any_low, t.text);
  }
}

TEST_CASE("periodic density equals the count over one period") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const Nat m1 = 1 + rng() % 8;
    const Nat m2 = 1 + rng() % 8;
    const oracle::Term t = oracle::minus(oracle::unite(oracle::residue(rng() % m1, m1), oracle::residue(rng() % m2, m2)),
                                         oracle::finite({1, 2, 3}));
    const auto d = periodic_density(parse_set(t.text));
    REQUIRE(d.has_value());
    const Nat period = m1 * m2 * 10;
    Nat count = 0;
    for (Nat n = 1000; n < 1000 + period; ++n) count += t.member(n) ? 1 : 0;
    CHECK(*d == Rational(count, period));
  }
}

TEST_CASE("printing and parsing round trip") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const oracle::Term t = oracle::random_term(rng, 3);
    const DescribedSet s = parse_set(t.text);
    const DescribedSet back = parse_set(print_set(s));
    for (Nat n = 0; n < 600; ++n) REQUIRE(member(back, n) == t.member(n));
  }
  CHECK_THROWS_AS(parse_set("(res 1 0)"), ParseError);
  CHECK_THROWS_AS(parse_set("(nope 1)"), ParseError);
  CHECK_THROWS_AS(parse_set("(fin 1 2) extra"), ParseError);
}

TEST_CASE("block set statistics") {
  const DescribedSet b = parse_set("(blocks 2 1 0)");
  const oracle::Term t = oracle::blocks(2, 1, 0);
  Nat brute = 0;
  for (Nat n = 0; n < (1 << 16); ++n) brute += t.member(n) ? 1 : 0;
  CHECK(count_upto(b, 1 << 16) == brute);
  // The block of length 12 starts at 2^12, so a window of width 12 is full.
  CHECK(banach_window(b, 1 << 16, 12) == Rational(1));
}

TEST_CASE("enumerated sets follow their enumeration") {
  const DescribedSet p = DescribedSet::enumerated(powers_enumeration(3));
  const auto e = powers_enumeration(3);
  for (Nat i = 0; i < 20; ++i) {
    CHECK(member(p, e->at(i)));
    if (e->at(i) + 1 < e->at(i + 1)) CHECK_FALSE(member(p, e->at(i) + 1));
  }
  CHECK(is_finite(p) == Finiteness::Infinite);
  CHECK(growth_witness_holds(*powers_enumeration(2), 40));
  CHECK(growth_witness_holds(*polynomial_enumeration(2), 200));
}

TEST_CASE("planar sets and column analysis") {
  const DescribedSet r = parse_set("(rect (res 0 2) (ival 0 9))");
  const auto pairs = pairs_upto(r, 20);
  for (const auto& [c, k] : pairs) {
    CHECK(c % 2 == 0);
    CHECK(k <= 9);
  }
  CHECK(pairs.size() == 11 * 10);
  const auto prof = column_profile(parse_set("(union (col 3) (under 2 1))"));
  REQUIRE(prof.has_value());
  const auto sec = section_of(parse_set("(under 2 1)"), 5);
  REQUIRE(sec.has_value());
  CHECK(elements_upto(*sec, 100).size() == 12);  // rows k <= 2*5 + 1
}
