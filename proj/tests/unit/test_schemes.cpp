#include <random>
#include <set>

#include "doctest.h"
#include "idealpts/schemes.hpp"

using namespace idealpts;

namespace {

bool clean(const Report& r) {
  for (const auto& c : r.clauses) {
    if (c.verdict != ClauseVerdict::Pass) return false;
  }
  return true;
}

std::string failures(const Report& r) {
  std::string out;
  for (const auto& c : r.clauses) {
    if (c.verdict != ClauseVerdict::Pass) out += c.name + ": " + c.evidence.dump().substr(0, 300) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("full Fin-scheme nodes are residue classes mod 2^|s|") {
  const auto a = fin_full_scheme();
  for (Nat i = 0; i < 127; ++i) {
    const BinWord s = word_from_index(i);
    const DescribedSet node = a->node(s);
    Nat value = 0;
    for (std::size_t k = 0; k < s.size(); ++k) value |= Nat{s[k]} << k;
    for (Nat n = 0; n < 1000; ++n) CHECK(member(node, n) == (n % (Nat{1} << s.size()) == value));
  }
}

TEST_CASE("scheme axioms at small depth") {
  CHECK_MESSAGE(clean(check_scheme(*fin_full_scheme(), fin_ideal(), 6)), failures(check_scheme(*fin_full_scheme(), fin_ideal(), 6)));
  const auto etf = check_scheme(*empty_times_fin_scheme(), ideal_by_name("etf"), 6);
  CHECK_MESSAGE(clean(etf), failures(etf));
  const auto z = check_scheme(*z_tail_scheme(), density_zero_ideal(), 5);
  CHECK_MESSAGE(clean(z), failures(z));
  const auto an = check_scheme(*fin2_anchored_scheme(), fin2_ideal(), 5);
  CHECK_MESSAGE(clean(an), failures(an));
}

TEST_CASE("locators place a site in every node along its branch") {
  for (const char* name : {"fin-full", "etf", "z-tail", "fin2-anchored"}) {
    const auto a = scheme_by_name(name);
    REQUIRE(a->locate);
    std::size_t located = 0;
    for (const Site& s : [&] {
           std::vector<Site> v;
           if (a->carrier == Carrier::Omega) {
             for (Nat n = 0; n < 400; ++n) v.push_back(Site{n, 0});
           } else {
             for (Nat c = 0; c < 20; ++c) {
               for (Nat r = 0; r < 20; ++r) v.push_back(Site{c, r});
             }
           }
           return v;
         }()) {
      const auto x = a->locate(s);
      if (!x) continue;
      ++located;
      for (Nat k = 0; k <= 10; ++k) CHECK_MESSAGE(site_in(a->carrier, a->node(x->prefix(k)), s), name << " " << k);
    }
    CHECK(located > 0);
  }
}

TEST_CASE("leading members are the smallest node members in carrier order") {
  for (const char* name : {"fin-full", "fin2-anchored"}) {
    const auto a = scheme_by_name(name);
    for (Nat i = 0; i < 15; ++i) {
      const BinWord s = word_from_index(i);
      const auto lead = leading_members(*a, s, 6);
      REQUIRE(lead.size() == 6);
      // Brute force: scan the carrier in order.
      std::vector<Site> brute;
      if (a->carrier == Carrier::Omega) {
        for (Nat n = 0; brute.size() < 6; ++n) {
          if (site_in(a->carrier, a->node(s), Site{n, 0})) brute.push_back(Site{n, 0});
        }
      } else {
        for (Nat h = 0; brute.size() < 6 && h < 5000; ++h) {
          for (Nat c = 0; c < h && brute.size() < 6; ++c) {
            if (site_in(a->carrier, a->node(s), Site{c, h})) brute.push_back(Site{c, h});
          }
          for (Nat r = 0; r <= h && brute.size() < 6; ++r) {
            if (site_in(a->carrier, a->node(s), Site{h, r})) brute.push_back(Site{h, r});
          }
        }
      }
      CHECK(lead == brute);
    }
  }
}

TEST_CASE("certificates replay for branches outside B") {
  std::mt19937_64 rng(41);
  const auto fin = fin_full_scheme();
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::uint8_t> head(rng() % 6);
    for (auto& b : head) b = rng() & 1U;
    const CantorPoint x = CantorPoint::periodic(BinWord(head), BinWord::parse(trial % 2 ? "01" : "0"));
    const auto cert = fin->cert_gen(x);
    REQUIRE(cert.has_value());
    const Report r = replay_certificate(*fin, fin_ideal(), *cert, 10, 100000);
    CHECK_MESSAGE(clean(r), failures(r));
  }
  const auto an = fin2_anchored_scheme();
  CHECK_FALSE(an->cert_gen(CantorPoint::parse("1101:0")).has_value());
  const auto cert = an->cert_gen(CantorPoint::parse("1:10"));
  REQUIRE(cert.has_value());
  CHECK(clean(replay_certificate(*an, fin2_ideal(), *cert, 10, 100000)));
}

TEST_CASE("B-membership probes") {
  const auto an = fin2_anchored_scheme();
  ProbeParams p;
  p.sweep = 30;
  CHECK(b_membership_probe(*an, fin2_ideal(), CantorPoint::parse("00000000:0"), p).outcome == ProbeOutcome::InB);
  CHECK(b_membership_probe(*an, fin2_ideal(), CantorPoint::parse("-:10"), p).outcome == ProbeOutcome::NotInB);
  CHECK(b_membership_probe(*fin_full_scheme(), fin_ideal(), CantorPoint::parse("-:0"), p).outcome == ProbeOutcome::NotInB);
  CHECK(b_membership_probe(*empty_times_fin_scheme(), ideal_by_name("etf"), CantorPoint::parse("-:0"), p).outcome ==
        ProbeOutcome::InB);
}

TEST_CASE("word transforms") {
  CHECK(baire_word({2, 0, 1}).str() == "001101");
  CHECK(baire_word({}).str() == "-");
  CHECK(doubled_word(BinWord::parse("000")).str() == "000000");
  // After the leading zeros every digit b becomes the pair (b, 1).
  CHECK(doubled_word(BinWord::parse("0101")).str() == "00110111");
  const CantorPoint x = CantorPoint::parse("01:10");
  CHECK(drop_prefix(prepend(BinWord::parse("110"), x), 3) == x);
}

TEST_CASE("transforms of the anchored scheme keep the axioms") {
  const auto an = fin2_anchored_scheme();
  for (const auto& t : {fullize(an), shift_to_zero(an, CantorPoint::parse("101:0")), densify(an, q_enum, "q_enum")}) {
    const auto r = check_scheme(*t, fin2_ideal(), 4);
    CHECK_MESSAGE(clean(r), t->name << "\n" << failures(r));
  }
  CHECK_THROWS(double_to_sigma02(empty_times_fin_scheme()));
  const auto sub = subscheme(an, BinWord::parse("01"), "Q(2^omega)");
  for (Nat i = 0; i < 15; ++i) {
    const BinWord s = word_from_index(i);
    const auto a = sub->node(s);
    const auto b = an->node(BinWord::parse("01").concat(s));
    for (const auto& [c, r] : pairs_upto(b, 40)) CHECK(a.contains_pair(c, r));
  }
}
