#include <random>
#include <set>

#include "doctest.h"
#include "idealpts/cantor.hpp"

using namespace idealpts;

namespace {

CantorPoint random_point(std::mt19937_64& rng) {
  std::vector<std::uint8_t> head(rng() % 6);
  std::vector<std::uint8_t> period(1 + rng() % 4);
  for (auto& b : head) b = rng() & 1U;
  for (auto& b : period) b = rng() & 1U;
  return CantorPoint::periodic(BinWord(head), BinWord(period));
}

// Reference first difference by direct bit comparison.
std::optional<Nat> brute_difference(const CantorPoint& x, const CantorPoint& y) {
  for (Nat i = 0; i < 200; ++i) {
    if (x.bit(i) != y.bit(i)) return i;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("point literals round trip and equality is extensional") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const CantorPoint x = random_point(rng);
    const CantorPoint back = CantorPoint::parse(x.literal());
    CHECK(back == x);
    for (Nat i = 0; i < 50; ++i) CHECK(back.bit(i) == x.bit(i));
  }
  CHECK(CantorPoint::parse("0:0") == CantorPoint::zeros());
  CHECK(CantorPoint::parse("01:0101") == CantorPoint::parse("-:01"));
  CHECK_THROWS(CantorPoint::parse("0110"));
}

TEST_CASE("the metric is an ultrametric matching the first difference") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    const CantorPoint x = random_point(rng);
    const CantorPoint y = random_point(rng);
    const CantorPoint z = random_point(rng);
    CHECK(first_difference(x, y) == brute_difference(x, y));
    CHECK(metric(x, y) == metric(y, x));
    CHECK(metric(x, x).is_zero());
    // d(x,z) <= max(d(x,y), d(y,z)): the first difference of x,z is at least the smaller one.
    const auto dxy = brute_difference(x, y).value_or(kNatMax);
    const auto dyz = brute_difference(y, z).value_or(kNatMax);
    const auto dxz = brute_difference(x, z).value_or(kNatMax);
    CHECK(dxz >= std::min(dxy, dyz));
  }
  CHECK(metric(CantorPoint::parse("0:0"), CantorPoint::parse("001:0")).str() == "2^-2");
}

TEST_CASE("q_enum enumerates the eventually zero points without repetition") {
  std::set<std::string> seen;
  for (Nat n = 0; n < 4000; ++n) {
    const CantorPoint q = q_enum(n);
    CHECK(q.eventually_zero());
    CHECK(q_index(q) == n);
    seen.insert(q.literal());
  }
  CHECK(seen.size() == 4000);
  // Every eventually zero word of length <= 8 appears.
  for (Nat v = 0; v < 256; ++v) {
    std::vector<std::uint8_t> bits(8);
    for (int i = 0; i < 8; ++i) bits[i] = (v >> i) & 1U;
    const CantorPoint p = CantorPoint::padded(BinWord(bits));
    REQUIRE(q_index(p).has_value());
    CHECK(q_enum(*q_index(p)) == p);
  }
  CHECK_FALSE(q_index(CantorPoint::ones()).has_value());
}

TEST_CASE("closed codes: membership agrees with admitted prefixes") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const ClosedCode t = ClosedCode::random_pruned(seed, 7);
    CHECK(t.check_pruned(12));
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 60; ++trial) {
      const CantorPoint x = random_point(rng);
      bool inside = true;
      for (Nat i = 0; i <= 40 && inside; ++i) inside = t.admits(x.prefix(i));
      const Membership m = closed_membership(t, x, 40);
      CHECK(m == (inside ? Membership::In : Membership::Out));
    }
    // Leftmost completions stay inside and extend the given node.
    for (Nat i = 0; i < 64; ++i) {
      const BinWord s = word_from_index(i);
      if (!t.admits(s)) continue;
      const CantorPoint c = t.leftmost_completion(s);
      CHECK(c.prefix(s.size()) == s);
      CHECK(closed_membership(t, c, 40) == Membership::In);
    }
  }
  CHECK(ClosedCode::by_name("zeros:3:1").contains(CantorPoint::parse("-:101")) == Membership::In);
  CHECK(ClosedCode::by_name("zeros:3:1").contains(CantorPoint::parse("-:1")) == Membership::Out);
}

TEST_CASE("tree surjection is onto every admitted node and inverts") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ClosedCode t = ClosedCode::random_pruned(seed + 100, 6);
    std::set<std::vector<std::uint8_t>> hit;
    // All y in {0,1}^5 reach every admitted node of length 5.
    for (Nat v = 0; v < 32; ++v) {
      std::vector<Nat> y(5);
      for (int i = 0; i < 5; ++i) y[i] = (v >> i) & 1U;
      const BinWord s = surject_prefix(t, y);
      CHECK(t.admits(s));
      hit.insert(s.bits());
    }
    std::size_t admitted = 0;
    for (Nat i = (1 << 5) - 1; i < (1 << 6) - 1; ++i) admitted += t.admits(word_from_index(i)) ? 1 : 0;
    CHECK(hit.size() == admitted);
    for (const auto& bits : hit) {
      const BinWord s(bits);
      CHECK(surject_prefix(t, surject_inverse(t, s)) == s);
    }
  }
}

TEST_CASE("limsup stream cells are cylinders of length level + 1 that meet the target") {
  const LimsupStream stream(infinitely_many_zeros_code());
  for (Nat lvl = 0; lvl < 8; ++lvl) {
    const auto& cells = stream.level(lvl);
    CHECK(cells.size() == (Nat{1} << lvl));  // cylinders of length lvl + 1 ending in 0
    for (std::size_t j = 0; j < cells.size(); ++j) {
      CHECK(cells[j].cylinder.size() == lvl + 1);
      CHECK(cells[j].cylinder.back() == 0);
      CHECK(stream.at(stream.level_offset(lvl) + j).cylinder == cells[j].cylinder);
    }
  }
  CHECK_THROWS_AS(stream.level(21), ResourceLimit);
  const auto code = infinitely_many_zeros_code();
  CHECK(code.contains(CantorPoint::parse("-:10")) == Membership::In);
  CHECK(code.contains(CantorPoint::parse("0:1")) == Membership::Out);
}

TEST_CASE("the Souslin code over W_irr is monotone with shrinking cells") {
  const SouslinCode code = wirr_souslin();
  std::string failure;
  CHECK_MESSAGE(check_souslin(code, 4, 4, &failure), failure);
  const BaireWord t{2, 0, 1};
  CHECK(wirr_word(t).str() == "001101");
  CHECK(code.limit(t) == CantorPoint::parse("001101:1"));
  CHECK(point_xor(CantorPoint::parse("-:01"), CantorPoint::parse("-:11")) == CantorPoint::parse("-:10"));
}
